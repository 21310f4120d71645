#pragma once

#include <utility>

#include "magpair/coupling.hpp"

namespace magpair {

// Interaction matrix on the tensor-product level space. Composite basis
// index i = x1 * dim2 + x2, labelled "x1|x2".
struct HamiltonianMatrix {
    int dim1;
    int dim2;
    Eigen::MatrixXcd matrix;  // (dim1*dim2) x (dim1*dim2), rad/s

    int basis_index(int x1, int x2) const { return x1 * dim2 + x2; }
    std::pair<int, int> basis_levels(int i) const { return {i / dim2, i % dim2}; }
    std::string basis_label(int i) const;
};

struct AssembleOptions {
    bool include_dissipative = true;  // keep the G^(D) correction (on by default)
};

double max_norm(const Eigen::MatrixXcd& m);
double frobenius_norm(const Eigen::MatrixXcd& m);

// Sum of G^{yx,uv} tau1^{yx} tau2^{uv}: matrix element [(y,u), (x,v)] is the
// coupling coefficient of that index tuple. Self-adjointness is asserted
// after assembly (throws std::logic_error beyond tolerance; that would be an
// internal inconsistency).
HamiltonianMatrix assemble(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                           const PhysicalConstants& consts, const AssembleOptions& options = {},
                           const Tolerances& tol = {});

// Classical coupling, built from operator dot products:
//   mu0 / (4 pi r^3 hbar) [ M1 . M2 - 3 (M1 . e_r)(M2 . e_r) ]
// with M_i the three component matrices of each dipole operator.
HamiltonianMatrix classical_hamiltonian(const DipoleSpec& d1, const DipoleSpec& d2,
                                        const PairGeometry& geom, const PhysicalConstants& consts);

struct DickeScan {
    std::vector<std::pair<double, double>> points;  // (r, relative Frobenius deviation)
    double small_r_slope;                           // log-log slope over the smallest decade
};

// Relative deviation ||assemble - classical||_F / ||classical||_F over a list
// of separations. Throws std::domain_error when the classical norm vanishes
// (deviation undefined).
DickeScan dicke_deviation(const DipoleSpec& d1, const DipoleSpec& d2, const RVec3& e_r,
                          const PhysicalConstants& consts, const std::vector<double>& radii);

// Zero every counter-rotating and mixed term; keeps resonant, non-resonant
// and permanent-permanent couplings. The result stays self-adjoint.
HamiltonianMatrix rwa_filter(const HamiltonianMatrix& h, const DipoleSpec& d1, const DipoleSpec& d2,
                             const PhysicalConstants& consts,
                             double resonance_tol = Tolerances{}.resonance_rel);

}  // namespace magpair
