#pragma once

#include "magpair/spectral.hpp"

namespace magpair {

// Abel-regulator schedule for the principal-value quadratures. All lengths
// are dimensionless (in units of eta).
struct RegulatorPlan {
    std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025};  // strictly decreasing, > 0
    double eta_max = 0.0;          // integration cutoff; 0 = automatic (45 / smallest epsilon)
    int extrapolation_order = 3;   // >= 2
    double tolerance = 1e-2;       // relative convergence requirement on the extrapolation

    void validate() const;         // throws std::invalid_argument; rejects eta_max >= 50/min(eps)
    double effective_eta_max() const;

    // Tighter schedule for acceptance-grade oracle runs (the default plan
    // saturates near 1e-3 relative error at eta ~ 7).
    static RegulatorPlan refined();
};

// Extrapolation to eps = 0 failed to settle; carries the estimate sequence.
class ExtrapolationError : public std::runtime_error {
public:
    ExtrapolationError(const std::string& what, std::vector<Complex> estimates)
        : std::runtime_error(what), estimates_(std::move(estimates)) {}
    const std::vector<Complex>& estimates() const { return estimates_; }

private:
    std::vector<Complex> estimates_;
};

struct PvResult {
    Complex value;                  // extrapolated eps -> 0 value
    double error_estimate;          // last extrapolation step magnitude
    std::vector<Complex> regulated; // value at each plan epsilon
};

// Principal-value kernel brackets:
//   b_dot = cos(eta) + eta sin(eta) - eta^2 cos(eta)
//   b_rad = cos(eta) + eta sin(eta) - (1/3) eta^2 cos(eta)
// Exactly even in eta; (1, 1) at eta = 0. Taylor switch below |eta| = 0.1.
BracketPair k_brackets(double eta);

// K(Omega) in rad/s:
//   K = mu0 / (4 pi r^3 hbar) * [dot * b_dot - 3 * radial * b_rad],  eta = |Omega| r / c.
// Even in Omega by construction; K(0) is the classical coupling coefficient.
Complex k_kernel(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                 const PhysicalConstants& consts);

// Regulated quadrature of P Int_0^inf (dw/2pi) J(w) 2w/(Omega^2 - w^2) e^{-eps w r/c}
// (odd-J folding of the full-line principal integral), Richardson-extrapolated
// to eps = 0. The pole at w = |Omega| is removed by symmetric subtraction over
// a window. Throws ExtrapolationError when the estimate sequence fails the
// plan tolerance.
PvResult k_kernel_oracle(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                         const PhysicalConstants& consts, const RegulatorPlan& plan);

// xi(Omega) = P Int_0^inf (dw/2pi) J(w)/(Omega - w) e^{-eps w r/c}  (extrapolated)
//             - (i/2) J(Omega) [Omega > 0]        (closed form).
// regulated[i] carries the finite-eps value with the delta part damped by
// e^{-eps eta}, which is the object the memory-kernel identity holds for.
PvResult xi_coefficient(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                        const PhysicalConstants& consts, const RegulatorPlan& plan);

// Lambda(Omega) = K(Omega) - (i/2) J(Omega), closed forms only.
Complex lambda_coefficient(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                           const PhysicalConstants& consts);

struct MemoryKernelResult {
    Complex value;                  // extrapolated eps -> 0 value
    double error_estimate;
    std::vector<double> epsilons;
    std::vector<Complex> regulated; // per-epsilon regulated kernel values
    bool converged;                 // false near the light cone s ~ r/c; reported, never thrown
};

// Time-domain memory kernel D(s) = -i Int_0^inf (dw/2pi) J(w) e^{-i w s},
// Abel-regulated and extrapolated. Distribution-valued at s = r/c: the
// extrapolation is best-effort there and the result says so.
MemoryKernelResult memory_kernel(double s, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                                 const PhysicalConstants& consts, const RegulatorPlan& plan);

}  // namespace magpair
