#pragma once

#include "magpair/types.hpp"

namespace magpair {

// Dimensionless bracket coefficients as functions of eta = omega*r/c.
struct BracketPair {
    double b_dot;
    double b_rad;
    double eta;
};

// Spectral-density brackets:
//   b_dot = eta^2 sin(eta) + eta cos(eta) - sin(eta)
//   b_rad = (1/3) eta^2 sin(eta) + eta cos(eta) - sin(eta)
// Both switch to odd Taylor series below |eta| = 0.1 (the direct forms lose
// half their digits to cancellation there). Exactly odd in eta.
BracketPair j_brackets(double eta);

// Coupling spectral density J(omega) in rad/s:
//   J = mu0 / (2 pi r^3 hbar) * [dot * b_dot - 3 * radial * b_rad],  eta = omega*r/c.
// Odd in omega by construction, exactly zero at omega = 0.
Complex j_coupling(double omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                   const PhysicalConstants& consts);

// Brute-force solid-angle quadrature of the mode integral
//   (mu0 omega^3 / (8 pi^2 c^3 hbar)) * Int dOmega_k e^{i k.r} [m1.m2 - (m1.k^)(m2.k^)]
// by Gauss-Legendre in theta x trapezoid in phi. Demands omega > 0 and
// quad_points >= 32; asserts the imaginary part of the angular integral
// cancels when both moments are real.
Complex j_coupling_oracle(double omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                          const PhysicalConstants& consts, int quad_points);

namespace detail {

// Overflow-safe split of the shared prefactor: magnitudes are normalized out
// of the bilinears and concentrated in `scale` = mu0*s1*s2 / (4 pi r^3 hbar).
struct ScaledBilinears {
    Complex dot_hat;
    Complex rad_hat;
    double scale;  // rad/s
    bool zero;     // either moment is exactly zero
};

ScaledBilinears scaled_bilinears(const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                                 const PhysicalConstants& consts);

}  // namespace detail

}  // namespace magpair
