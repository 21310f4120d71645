#include "magpair/types.hpp"

#include <cmath>
#include <sstream>

namespace magpair {

void PhysicalConstants::validate() const {
    if (!(mu0 > 0.0) || !(hbar > 0.0) || !(c > 0.0))
        throw std::invalid_argument("PhysicalConstants: mu0, hbar, c must all be strictly positive");
    if (!std::isfinite(mu0) || !std::isfinite(hbar) || !std::isfinite(c))
        throw std::invalid_argument("PhysicalConstants: non-finite value");
}

namespace {

bool finite(const CVec3& v) {
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

Bilinears bilinear_form(const CVec3& m1, const CVec3& m2, const RVec3& e_r, double unit_tol) {
    if (!finite(m1) || !finite(m2)) throw std::invalid_argument("bilinear_form: non-finite moment component");
    if (!e_r.allFinite()) throw std::invalid_argument("bilinear_form: non-finite direction component");
    if (std::abs(e_r.norm() - 1.0) > unit_tol)
        throw std::invalid_argument("bilinear_form: e_r is not a unit vector (|e_r| = " +
                                    std::to_string(e_r.norm()) + ")");
    Complex dot = 0.0, p1 = 0.0, p2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        dot += m1[i] * m2[i];  // unconjugated on purpose
        p1 += m1[i] * e_r[i];
        p2 += m2[i] * e_r[i];
    }
    return {dot, p1 * p2};
}

DipoleSpec::DipoleSpec(std::vector<double> energies, std::vector<CVec3> moments, double hermiticity_tol)
    : dim_(static_cast<int>(energies.size())), energies_(std::move(energies)), moments_(std::move(moments)) {
    if (dim_ < 2) throw std::invalid_argument("DipoleSpec: at least two levels required");
    if (moments_.size() != static_cast<size_t>(dim_) * dim_)
        throw std::invalid_argument("DipoleSpec: moment matrix must be dim x dim (" +
                                    std::to_string(dim_) + " levels, " + std::to_string(moments_.size()) +
                                    " entries given)");
    for (double e : energies_)
        if (!std::isfinite(e)) throw std::invalid_argument("DipoleSpec: non-finite level energy");

    scale_ = 0.0;
    for (const CVec3& v : moments_) {
        if (!finite(v)) throw std::invalid_argument("DipoleSpec: non-finite moment component");
        for (int i = 0; i < 3; ++i) scale_ = std::max(scale_, std::abs(v[i]));
    }

    const double tol = hermiticity_tol * std::max(scale_, 1e-300);
    for (int x = 0; x < dim_; ++x) {
        for (int y = x; y < dim_; ++y) {
            const CVec3& a = moments_[static_cast<size_t>(x) * dim_ + y];
            const CVec3& b = moments_[static_cast<size_t>(y) * dim_ + x];
            for (int i = 0; i < 3; ++i) {
                if (std::abs(a[i] - std::conj(b[i])) > tol) {
                    std::ostringstream msg;
                    msg << "DipoleSpec: moment matrix is not Hermitian at element pair (" << x << "," << y
                        << ") component " << i << ": " << a[i] << " vs conj of " << b[i];
                    throw std::invalid_argument(msg.str());
                }
            }
        }
    }
}

double transition_frequency(const DipoleSpec& spec, int y, int x, const PhysicalConstants& consts) {
    return (spec.energy(y) - spec.energy(x)) / consts.hbar;
}

PairGeometry::PairGeometry(double r_, const RVec3& e_r_, double unit_tol) : r(r_), e_r(e_r_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("PairGeometry: separation r must be > 0");
    if (!e_r.allFinite() || std::abs(e_r.norm() - 1.0) > unit_tol)
        throw std::invalid_argument("PairGeometry: e_r must be a unit vector");
}

PairGeometry PairGeometry::from_positions(const RVec3& x1, const RVec3& x2) {
    const RVec3 d = x2 - x1;
    const double r = d.norm();
    if (!(r > 0.0)) throw std::invalid_argument("PairGeometry: coincident positions");
    return PairGeometry(r, RVec3(d / r));
}

}  // namespace magpair
