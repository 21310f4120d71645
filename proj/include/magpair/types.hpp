#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magpair/constants.hpp"

namespace magpair {

using Complex = std::complex<double>;
using CVec3 = Eigen::Vector3cd;  // dipole-moment matrix element, A*m^2 in SI mode
using RVec3 = Eigen::Vector3d;

struct Bilinears {
    Complex dot;     // m1 . m2, unconjugated
    Complex radial;  // (m1 . e_r)(m2 . e_r)
};

// Unconjugated bilinears shared by the spectral density and the kernel.
// Throws std::invalid_argument for a non-unit e_r or non-finite components.
Bilinears bilinear_form(const CVec3& m1, const CVec3& m2, const RVec3& e_r,
                        double unit_tol = Tolerances{}.unit_vector_abs);

// Level energies plus the full complex dipole-moment matrix of one dipole.
// moment(x, y) = <x| m_op |y>; the matrix must be Hermitian component-wise.
class DipoleSpec {
public:
    DipoleSpec(std::vector<double> energies, std::vector<CVec3> moments,
               double hermiticity_tol = Tolerances{}.hermiticity_rel);

    int dim() const { return dim_; }
    double energy(int x) const { return energies_.at(static_cast<size_t>(x)); }
    const std::vector<double>& energies() const { return energies_; }
    const CVec3& moment(int x, int y) const {
        check_index(x);
        check_index(y);
        return moments_[static_cast<size_t>(x) * dim_ + y];
    }
    const std::vector<CVec3>& moments() const { return moments_; }

    // Largest moment-component magnitude, used as the strength scale.
    double moment_scale() const { return scale_; }

private:
    void check_index(int i) const {
        if (i < 0 || i >= dim_) throw std::out_of_range("DipoleSpec: level index " + std::to_string(i));
    }

    int dim_;
    std::vector<double> energies_;
    std::vector<CVec3> moments_;  // row-major, moments_[x*dim + y]
    double scale_;
};

// (E_y - E_x) / hbar in rad/s.
double transition_frequency(const DipoleSpec& spec, int y, int x, const PhysicalConstants& consts);

struct PairGeometry {
    double r;   // separation, m
    RVec3 e_r;  // unit vector from dipole 1 to dipole 2

    PairGeometry(double r_, const RVec3& e_r_, double unit_tol = Tolerances{}.unit_vector_abs);
    static PairGeometry from_positions(const RVec3& x1, const RVec3& x2);
};

}  // namespace magpair
