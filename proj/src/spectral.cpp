#include "magpair/spectral.hpp"

#include <cmath>

#include "magpair/quadrature.hpp"

namespace magpair {

namespace detail {

ScaledBilinears scaled_bilinears(const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                                 const PhysicalConstants& consts) {
    consts.validate();
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        s1 = std::max(s1, std::abs(m1[i]));
        s2 = std::max(s2, std::abs(m2[i]));
    }
    if (s1 == 0.0 || s2 == 0.0) return {0.0, 0.0, 0.0, true};

    const CVec3 a = m1 / s1;
    const CVec3 b = m2 / s2;
    const Bilinears bl = bilinear_form(a, b, geom.e_r);
    // Staged products keep intermediate magnitudes near 1 for physical inputs
    // (moments ~ 1e-23 A*m^2, hbar ~ 1e-34).
    const double r = geom.r;
    const double scale = (consts.mu0 / (4.0 * M_PI)) * (s1 / r) * (s2 / (r * r)) / consts.hbar;
    return {bl.dot, bl.radial, scale, false};
}

}  // namespace detail

BracketPair j_brackets(double eta) {
    if (!std::isfinite(eta)) throw std::invalid_argument("j_brackets: non-finite eta");
    if (std::abs(eta) < 0.1) {
        const double e2 = eta * eta;
        const double e3 = eta * e2;
        const double e5 = e3 * e2;
        const double b_dot =
            e3 * (2.0 / 3.0 +
                  e2 * (-2.0 / 15.0 +
                        e2 * (1.0 / 140.0 +
                              e2 * (-1.0 / 5670.0 + e2 * (1.0 / 399168.0 - e2 / 43243200.0)))));
        const double b_rad =
            e5 * (-1.0 / 45.0 +
                  e2 * (1.0 / 630.0 +
                        e2 * (-1.0 / 22680.0 +
                              e2 * (1.0 / 1496880.0 + e2 * (-1.0 / 155675520.0 + e2 / 23351328000.0)))));
        return {b_dot, b_rad, eta};
    }
    const double s = std::sin(eta);
    const double c = std::cos(eta);
    const double e2 = eta * eta;
    return {e2 * s + eta * c - s, e2 * s / 3.0 + eta * c - s, eta};
}

Complex j_coupling(double omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                   const PhysicalConstants& consts) {
    if (!std::isfinite(omega)) throw std::invalid_argument("j_coupling: non-finite omega");
    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    if (sb.zero || omega == 0.0) return 0.0;
    const BracketPair b = j_brackets(omega * geom.r / consts.c);
    return 2.0 * sb.scale * (sb.dot_hat * b.b_dot - 3.0 * sb.rad_hat * b.b_rad);
}

Complex j_coupling_oracle(double omega, const PairGeometry& geom, const CVec3& m1, const CVec3& m2,
                          const PhysicalConstants& consts, int quad_points) {
    if (!(omega > 0.0)) throw std::invalid_argument("j_coupling_oracle: omega must be > 0");
    if (quad_points < 32)
        throw std::invalid_argument("j_coupling_oracle: quad_points < 32 cannot resolve the mode integral");

    const auto sb = detail::scaled_bilinears(geom, m1, m2, consts);
    if (sb.zero) return 0.0;

    const CVec3 a = m1 / m1.cwiseAbs().maxCoeff();
    const CVec3 b = m2 / m2.cwiseAbs().maxCoeff();
    const double eta = omega * geom.r / consts.c;
    const Complex m_dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

    const auto& gl = quad::GaussLegendre::cached(quad_points);
    const int n_phi = 2 * quad_points;
    const double w_phi = 2.0 * M_PI / n_phi;

    Complex integral = 0.0;
    for (int it = 0; it < quad_points; ++it) {
        const double theta = 0.5 * M_PI * (1.0 + gl.nodes[static_cast<size_t>(it)]);
        const double w_theta = 0.5 * M_PI * gl.weights[static_cast<size_t>(it)];
        const double st = std::sin(theta), ct = std::cos(theta);
        Complex phi_sum = 0.0;
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = w_phi * ip;
            const RVec3 k_hat(st * std::cos(phi), st * std::sin(phi), ct);
            const Complex ak = a[0] * k_hat[0] + a[1] * k_hat[1] + a[2] * k_hat[2];
            const Complex bk = b[0] * k_hat[0] + b[1] * k_hat[1] + b[2] * k_hat[2];
            const double kr = eta * k_hat.dot(geom.e_r);
            phi_sum += std::polar(1.0, kr) * (m_dot - ak * bk);
        }
        integral += w_theta * st * w_phi * phi_sum;
    }

    const bool real_moments = m1.imag().isZero(0.0) && m2.imag().isZero(0.0);
    if (real_moments && std::abs(integral.imag()) > 1e-9 * std::max(1.0, std::abs(integral)))
        throw std::logic_error("j_coupling_oracle: imaginary part of the angular integral failed to cancel "
                               "for real moments");

    return sb.scale * eta * eta * eta / (2.0 * M_PI) * integral;
}

}  // namespace magpair
