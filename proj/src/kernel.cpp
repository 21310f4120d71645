#include "magpair/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "magpair/quadrature.hpp"

namespace magpair {

void RegulatorPlan::validate() const {
    if (epsilons.empty()) throw std::invalid_argument("RegulatorPlan: empty epsilon schedule");
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i]))
            throw std::invalid_argument("RegulatorPlan: epsilons must be positive and finite");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("RegulatorPlan: epsilons must be strictly decreasing");
    }
    const double min_eps = epsilons.back();
    if (eta_max < 0.0 || !std::isfinite(eta_max))
        throw std::invalid_argument("RegulatorPlan: eta_max must be finite and >= 0");
    if (eta_max != 0.0 && eta_max >= 50.0 / min_eps)
        throw std::invalid_argument("RegulatorPlan: eta_max >= 50/min(eps) integrates a fully damped tail");
    if (extrapolation_order < 2) throw std::invalid_argument("RegulatorPlan: extrapolation_order must be >= 2");
    if (!(tolerance > 0.0)) throw std::invalid_argument("RegulatorPlan: tolerance must be positive");
}

double RegulatorPlan::effective_eta_max() const {
    return eta_max > 0.0 ? eta_max : 45.0 / epsilons.back();
}

RegulatorPlan RegulatorPlan::refined() {
    RegulatorPlan plan;
    plan.epsilons = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    plan.extrapolation_order = 4;
    plan.tolerance = 1e-3;
    return plan;
}

BracketPair k_brackets(double eta) {
    if (!std::isfinite(eta)) throw std::invalid_argument("k_brackets: non-finite eta");
    const double e2 = eta * eta;
    if (std::abs(eta) < 0.1) {
        const double b_dot =
            1.0 + e2 * (-0.5 +
                        e2 * (3.0 / 8.0 +
                              e2 * (-5.0 / 144.0 +
                                    e2 * (7.0 / 5760.0 + e2 * (-1.0 / 44800.0 + e2 * 11.0 / 43545600.0)))));
        const double b_rad =
            1.0 + e2 * (1.0 / 6.0 +
                        e2 * (1.0 / 24.0 +
                              e2 * (-1.0 / 144.0 +
                                    e2 * (1.0 / 3456.0 + e2 * (-1.0 / 172800.0 + e2 / 14515200.0)))));
        return {b_dot, b_rad, eta};
    }
    const double s = std::sin(eta);
    const double c = std::cos(eta);
    return {c + eta * s - e2 * c, c + eta * s - e2 * c / 3.0, eta};
}

Complex k_kernel(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                 const PhysicalConstants& consts) {
    if (!std::isfinite(Omega)) throw std::invalid_argument("k_kernel: non-finite Omega");
    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    if (sb.zero) return 0.0;
    const BracketPair b = k_brackets(std::abs(Omega) * geom.r / consts.c);
    return sb.scale * (sb.dot_hat * b.b_dot - 3.0 * sb.rad_hat * b.b_rad);
}

namespace {

using quad::GaussLegendre;
using quad::graded_breakpoints;
using quad::integrate_panels;

// Normalized spectral-density factor at dimensionless frequency x.
struct GHat {
    Complex dot_hat, rad_hat;
    Complex operator()(double x) const {
        const BracketPair b = j_brackets(x);
        return dot_hat * b.b_dot - 3.0 * rad_hat * b.b_rad;
    }
};

// P int_0^xmax ghat(x) * 2x / (eta^2 - x^2) * e^{-eps x} dx  (eta >= 0).
Complex pv_fold(const GHat& g, double eta, double eps, double xmax) {
    const auto& gl = GaussLegendre::order16();
    if (eta == 0.0) {
        auto f = [&](double x) { return g(x) * (-2.0 / x) * std::exp(-eps * x); };
        return integrate_panels(f, graded_breakpoints(0.0, xmax, 0.0, 0.02, M_PI / 2), gl);
    }
    const double delta = std::min(0.5, eta / 2.0);
    const double h_min = std::min(0.02, delta / 4.0);
    const Complex gp = g(eta) * std::exp(-eps * eta);
    auto f = [&](double x) { return g(x) * (2.0 * x / ((eta - x) * (eta + x))) * std::exp(-eps * x); };
    auto f_sub = [&](double x) {
        return (g(x) * std::exp(-eps * x) - gp) * (2.0 * x / ((eta - x) * (eta + x)));
    };
    Complex out = integrate_panels(f, graded_breakpoints(0.0, eta - delta, eta, h_min, M_PI / 2), gl);
    const std::vector<double> window{eta - delta, eta - delta / 2, eta, eta + delta / 2, eta + delta};
    out += integrate_panels(f_sub, window, gl);
    out += gp * (-std::log((2.0 * eta + delta) / (2.0 * eta - delta)));
    out += integrate_panels(f, graded_breakpoints(eta + delta, xmax, eta, h_min, M_PI / 2), gl);
    return out;
}

// P int_0^xmax ghat(x) / (eta - x) * e^{-eps x} dx; the pole exists only for eta > 0.
Complex pv_half(const GHat& g, double eta, double eps, double xmax) {
    const auto& gl = GaussLegendre::order16();
    auto f = [&](double x) { return g(x) / (eta - x) * std::exp(-eps * x); };
    if (eta <= 0.0) {
        const double h_min = std::min(0.02, std::max(0.005, std::abs(eta) / 4.0));
        return integrate_panels(f, graded_breakpoints(0.0, xmax, eta, h_min, M_PI / 2), gl);
    }
    const double delta = std::min(0.5, eta / 2.0);
    const double h_min = std::min(0.02, delta / 4.0);
    const Complex gp = g(eta) * std::exp(-eps * eta);
    auto f_sub = [&](double x) { return (g(x) * std::exp(-eps * x) - gp) / (eta - x); };
    Complex out = integrate_panels(f, graded_breakpoints(0.0, eta - delta, eta, h_min, M_PI / 2), gl);
    const std::vector<double> window{eta - delta, eta - delta / 2, eta, eta + delta / 2, eta + delta};
    // The principal value of 1/(eta - x) over the symmetric window is exactly zero,
    // so only the subtracted remainder is integrated there.
    out += integrate_panels(f_sub, window, gl);
    out += integrate_panels(f, graded_breakpoints(eta + delta, xmax, eta, h_min, M_PI / 2), gl);
    return out;
}

double bracket_scale_floor(const GHat& g, double eta) {
    return 0.01 * (std::abs(g.dot_hat) + 3.0 * std::abs(g.rad_hat)) * (1.0 + eta * eta);
}

}  // namespace

PvResult k_kernel_oracle(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                         const PhysicalConstants& consts, const RegulatorPlan& plan) {
    plan.validate();
    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    const size_t n = plan.epsilons.size();
    if (sb.zero) return {0.0, 0.0, std::vector<Complex>(n, 0.0)};

    const double eta = std::abs(Omega) * geom.r / consts.c;
    const double xmax = plan.effective_eta_max();
    if (eta > 0.5 * xmax)
        throw std::invalid_argument("k_kernel_oracle: plan cutoff too small for this frequency");

    const GHat g{sb.dot_hat, sb.rad_hat};
    std::vector<Complex> vals(n);
    for (size_t i = 0; i < n; ++i) vals[i] = pv_fold(g, eta, plan.epsilons[i], xmax);
    auto ex = quad::richardson_to_zero(plan.epsilons, vals, plan.extrapolation_order);

    const double pref = sb.scale / M_PI;
    const double est = n >= 2 ? ex.error_estimate : std::numeric_limits<double>::infinity();
    if (est > plan.tolerance * std::max(std::abs(ex.value), bracket_scale_floor(g, eta))) {
        std::vector<Complex> seq = ex.sequence;
        for (auto& v : seq) v *= pref;
        std::ostringstream msg;
        msg << "k_kernel_oracle: epsilon extrapolation did not converge at eta = " << eta
            << " (estimate " << est * pref << ")";
        throw ExtrapolationError(msg.str(), std::move(seq));
    }

    PvResult out;
    out.value = pref * ex.value;
    out.error_estimate = pref * est;
    out.regulated.resize(n);
    for (size_t i = 0; i < n; ++i) out.regulated[i] = pref * vals[i];
    return out;
}

PvResult xi_coefficient(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                        const PhysicalConstants& consts, const RegulatorPlan& plan) {
    plan.validate();
    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    const size_t n = plan.epsilons.size();
    if (sb.zero) return {0.0, 0.0, std::vector<Complex>(n, 0.0)};

    const double eta = Omega * geom.r / consts.c;  // signed: the pole exists only for Omega > 0
    const double xmax = plan.effective_eta_max();
    if (std::abs(eta) > 0.5 * xmax)
        throw std::invalid_argument("xi_coefficient: plan cutoff too small for this frequency");

    const GHat g{sb.dot_hat, sb.rad_hat};
    std::vector<Complex> vals(n);
    for (size_t i = 0; i < n; ++i) vals[i] = pv_half(g, eta, plan.epsilons[i], xmax);
    auto ex = quad::richardson_to_zero(plan.epsilons, vals, plan.extrapolation_order);

    const double pref = sb.scale / M_PI;
    const double est = n >= 2 ? ex.error_estimate : std::numeric_limits<double>::infinity();
    if (est > plan.tolerance * std::max(std::abs(ex.value), bracket_scale_floor(g, std::abs(eta)))) {
        std::vector<Complex> seq = ex.sequence;
        for (auto& v : seq) v *= pref;
        std::ostringstream msg;
        msg << "xi_coefficient: epsilon extrapolation did not converge at eta = " << eta
            << " (estimate " << est * pref << ")";
        throw ExtrapolationError(msg.str(), std::move(seq));
    }

    const Complex j_delta = Omega > 0.0 ? j_coupling(Omega, geom, m1, m2, consts) : Complex(0.0);
    PvResult out;
    out.value = pref * ex.value - Complex(0.0, 0.5) * j_delta;
    out.error_estimate = pref * est;
    out.regulated.resize(n);
    for (size_t i = 0; i < n; ++i)
        out.regulated[i] = pref * vals[i] - Complex(0.0, 0.5) * j_delta * std::exp(-plan.epsilons[i] * eta);
    return out;
}

Complex lambda_coefficient(double Omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                           const PhysicalConstants& consts) {
    return k_kernel(Omega, geom, m1, m2, consts) -
           Complex(0.0, 0.5) * j_coupling(Omega, geom, m1, m2, consts);
}

MemoryKernelResult memory_kernel(double s, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                                 const PhysicalConstants& consts, const RegulatorPlan& plan) {
    plan.validate();
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("memory_kernel: s must be >= 0");
    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    const size_t n = plan.epsilons.size();
    if (sb.zero) return {0.0, 0.0, plan.epsilons, std::vector<Complex>(n, 0.0), true};

    const double sigma = s * consts.c / geom.r;
    const double xmax = plan.effective_eta_max();
    const GHat g{sb.dot_hat, sb.rad_hat};
    const auto& gl = GaussLegendre::order16();
    const double h = std::min(M_PI / 2, 2.0 * M_PI / (sigma + 2.0));

    std::vector<Complex> vals(n);
    for (size_t i = 0; i < n; ++i) {
        const double eps = plan.epsilons[i];
        auto f = [&](double x) { return g(x) * std::polar(std::exp(-eps * x), -sigma * x); };
        vals[i] = integrate_panels(f, quad::uniform_breakpoints(0.0, xmax, h), gl);
    }
    auto ex = quad::richardson_to_zero(plan.epsilons, vals, plan.extrapolation_order);

    const Complex pref = Complex(0.0, -1.0) * (consts.c / geom.r) * (sb.scale / M_PI);
    const double est = n >= 2 ? ex.error_estimate : std::numeric_limits<double>::infinity();
    const double floor = 0.01 * (std::abs(g.dot_hat) + 3.0 * std::abs(g.rad_hat));

    MemoryKernelResult out;
    out.value = pref * ex.value;
    out.error_estimate = std::abs(pref) * est;
    out.epsilons = plan.epsilons;
    out.regulated.resize(n);
    for (size_t i = 0; i < n; ++i) out.regulated[i] = pref * vals[i];
    out.converged = est <= plan.tolerance * std::max(std::abs(ex.value), floor);
    return out;
}

}  // namespace magpair
