#pragma once

#include <random>

#include "magpair/types.hpp"

namespace testhelp {

using magpair::Complex;
using magpair::CVec3;
using magpair::DipoleSpec;
using magpair::PairGeometry;
using magpair::RVec3;

inline double uniform(std::mt19937_64& g, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(g);
}

inline RVec3 random_unit(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    RVec3 v;
    do {
        v = RVec3(n(g), n(g), n(g));
    } while (v.norm() < 1e-3);
    return v.normalized();
}

inline CVec3 random_cvec(std::mt19937_64& g, double scale = 1.0, bool real_only = false) {
    std::normal_distribution<double> n(0.0, scale);
    CVec3 v;
    for (int i = 0; i < 3; ++i) v[i] = Complex(n(g), real_only ? 0.0 : n(g));
    return v;
}

// Random multi-level dipole with a component-wise Hermitian moment matrix.
// Level gaps are uniform in [0.3, 1.2] * energy_scale.
inline DipoleSpec random_dipole(std::mt19937_64& g, int dim, bool zero_diagonal = false,
                                bool real_moments = false, double energy_scale = 1.0) {
    std::vector<double> energies(static_cast<size_t>(dim));
    energies[0] = 0.0;
    for (int i = 1; i < dim; ++i)
        energies[static_cast<size_t>(i)] =
            energies[static_cast<size_t>(i - 1)] + uniform(g, 0.3, 1.2) * energy_scale;

    std::vector<CVec3> moments(static_cast<size_t>(dim) * dim, CVec3::Zero());
    for (int x = 0; x < dim; ++x) {
        if (!zero_diagonal) moments[static_cast<size_t>(x) * dim + x] = random_cvec(g, 1.0, true);
        for (int y = x + 1; y < dim; ++y) {
            const CVec3 m = random_cvec(g, 1.0, real_moments);
            moments[static_cast<size_t>(x) * dim + y] = m;
            moments[static_cast<size_t>(y) * dim + x] = m.conjugate();
        }
    }
    return DipoleSpec(std::move(energies), std::move(moments));
}

inline PairGeometry random_geometry(std::mt19937_64& g, double r_min = 0.5, double r_max = 3.0) {
    return PairGeometry(uniform(g, r_min, r_max), random_unit(g));
}

}  // namespace testhelp
