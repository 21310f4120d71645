#include "magpair/hamiltonian.hpp"

#include <cmath>
#include <limits>

namespace magpair {

std::string HamiltonianMatrix::basis_label(int i) const {
    const auto [x1, x2] = basis_levels(i);
    return std::to_string(x1) + "|" + std::to_string(x2);
}

double max_norm(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double frobenius_norm(const Eigen::MatrixXcd& m) { return m.norm(); }

HamiltonianMatrix assemble(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                           const PhysicalConstants& consts, const AssembleOptions& options,
                           const Tolerances& tol) {
    const CouplingTensor tensor = coupling_tensor(d1, d2, geom, consts, tol);
    const int n1 = tensor.dim1();
    const int n2 = tensor.dim2();
    HamiltonianMatrix h{n1, n2, Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2)};
    for (const auto& e : tensor.entries()) {
        Complex g = e.g_principal;
        if (options.include_dissipative) g += e.g_dissipative;
        h.matrix(h.basis_index(e.y, e.u), h.basis_index(e.x, e.v)) += g;
    }

    const double hmax = max_norm(h.matrix);
    const double dev = max_norm(h.matrix - h.matrix.adjoint());
    if (dev > tol.self_adjoint_rel * std::max(hmax, 1e-300))
        throw std::logic_error("assemble: result failed the self-adjointness check; internal inconsistency");
    return h;
}

HamiltonianMatrix classical_hamiltonian(const DipoleSpec& d1, const DipoleSpec& d2,
                                        const PairGeometry& geom, const PhysicalConstants& consts) {
    consts.validate();
    const int n1 = d1.dim();
    const int n2 = d2.dim();
    const double r = geom.r;
    const double pref = (consts.mu0 / (4.0 * M_PI)) / (r * r * r) / consts.hbar;

    HamiltonianMatrix h{n1, n2, Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2)};
    for (int y = 0; y < n1; ++y)
        for (int x = 0; x < n1; ++x)
            for (int u = 0; u < n2; ++u)
                for (int v = 0; v < n2; ++v) {
                    const CVec3& a = d1.moment(y, x);
                    const CVec3& b = d2.moment(u, v);
                    Complex dot = 0.0, pa = 0.0, pb = 0.0;
                    for (int i = 0; i < 3; ++i) {
                        dot += a[i] * b[i];
                        pa += a[i] * geom.e_r[i];
                        pb += b[i] * geom.e_r[i];
                    }
                    h.matrix(h.basis_index(y, u), h.basis_index(x, v)) = pref * (dot - 3.0 * pa * pb);
                }
    return h;
}

DickeScan dicke_deviation(const DipoleSpec& d1, const DipoleSpec& d2, const RVec3& e_r,
                          const PhysicalConstants& consts, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("dicke_deviation: empty radius list");

    DickeScan scan;
    scan.points.reserve(radii.size());
    for (double r : radii) {
        const PairGeometry geom(r, e_r);
        const HamiltonianMatrix full = assemble(d1, d2, geom, consts);
        const HamiltonianMatrix cl = classical_hamiltonian(d1, d2, geom, consts);
        const double n_cl = frobenius_norm(cl.matrix);
        if (n_cl == 0.0)
            throw std::domain_error("dicke_deviation: classical coupling vanishes, deviation undefined");
        scan.points.emplace_back(r, frobenius_norm(full.matrix - cl.matrix) / n_cl);
    }

    // Log-log slope over the smallest decade of separations.
    double r_min = radii[0];
    for (double r : radii) r_min = std::min(r_min, r);
    std::vector<std::pair<double, double>> fit;
    for (const auto& [r, dev] : scan.points)
        if (r <= 10.0 * r_min * (1.0 + 1e-12) && dev > 0.0) fit.emplace_back(std::log(r), std::log(dev));
    if (fit.size() < 2)
        for (const auto& [r, dev] : scan.points)
            if (dev > 0.0) fit.emplace_back(std::log(r), std::log(dev));
    if (fit.size() < 2) {
        scan.small_r_slope = std::numeric_limits<double>::quiet_NaN();
        return scan;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [lx, ly] : fit) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(fit.size());
    scan.small_r_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return scan;
}

HamiltonianMatrix rwa_filter(const HamiltonianMatrix& h, const DipoleSpec& d1, const DipoleSpec& d2,
                             const PhysicalConstants& consts, double resonance_tol) {
    if (h.dim1 != d1.dim() || h.dim2 != d2.dim())
        throw std::invalid_argument("rwa_filter: matrix dimensions do not match the dipole specs");
    HamiltonianMatrix out = h;
    for (int y = 0; y < h.dim1; ++y)
        for (int x = 0; x < h.dim1; ++x)
            for (int u = 0; u < h.dim2; ++u)
                for (int v = 0; v < h.dim2; ++v) {
                    const TermClass c = classify(d1, d2, y, x, u, v, consts, resonance_tol);
                    if (c == TermClass::CounterRotating || c == TermClass::Mixed)
                        out.matrix(out.basis_index(y, u), out.basis_index(x, v)) = 0.0;
                }
    return out;
}

}  // namespace magpair
