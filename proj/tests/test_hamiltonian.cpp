#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "magpair/hamiltonian.hpp"

using namespace magpair;

namespace {

const PhysicalConstants kDimless = PhysicalConstants::dimensionless();
const double kPi = 3.14159265358979323846;

DipoleSpec two_level(double gap, const CVec3& offdiag, const CVec3& diag_g = CVec3::Zero(),
                     const CVec3& diag_e = CVec3::Zero()) {
    return DipoleSpec({0.0, gap}, {diag_g, offdiag, offdiag.conjugate(), diag_e});
}

}  // namespace

TEST_CASE("basis indexing and labels") {
    HamiltonianMatrix h{2, 3, Eigen::MatrixXcd::Zero(6, 6)};
    CHECK(h.basis_index(1, 2) == 5);
    CHECK(h.basis_levels(5) == std::pair<int, int>{1, 2});
    CHECK(h.basis_label(5) == "1|2");
    CHECK(h.basis_label(0) == "0|0");
}

TEST_CASE("matrix norms") {
    Eigen::MatrixXcd m(2, 2);
    m << Complex(3, 4), 0, 0, Complex(0, -1);
    CHECK(max_norm(m) == doctest::Approx(5.0));
    CHECK(frobenius_norm(m) == doctest::Approx(std::sqrt(26.0)));
    CHECK(max_norm(Eigen::MatrixXcd()) == 0.0);
}

TEST_CASE("assembled matrix places each coupling coefficient at its index pair") {
    const DipoleSpec d1 = two_level(1.1, CVec3(0.7, Complex(0, 0.5), 0.1));
    const DipoleSpec d2 = two_level(0.8, CVec3(1.0, 0.2, 0));
    const PairGeometry geom(1.4, RVec3(0, 0.6, 0.8));

    const HamiltonianMatrix h = assemble(d1, d2, geom, kDimless);
    REQUIRE(h.matrix.rows() == 4);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    const Complex g = g_principal(d1, d2, geom, y, x, u, v, kDimless) +
                                      g_dissipative(d1, d2, geom, y, x, u, v, kDimless);
                    CHECK(h.matrix(h.basis_index(y, u), h.basis_index(x, v)) == g);
                }

    AssembleOptions principal_only;
    principal_only.include_dissipative = false;
    const HamiltonianMatrix hp = assemble(d1, d2, geom, kDimless, principal_only);
    CHECK(hp.matrix(hp.basis_index(1, 0), hp.basis_index(0, 1)) ==
          g_principal(d1, d2, geom, 1, 0, 0, 1, kDimless));
}

TEST_CASE("assembled matrix is self-adjoint for random specifications") {
    std::mt19937_64 g(4100);
    for (int t = 0; t < 25; ++t) {
        const DipoleSpec d1 = testhelp::random_dipole(g, 2 + t % 3);
        const DipoleSpec d2 = testhelp::random_dipole(g, 2 + (t + 1) % 2);
        const PairGeometry geom = testhelp::random_geometry(g);
        const HamiltonianMatrix h = assemble(d1, d2, geom, kDimless);
        const double dev = max_norm(Eigen::MatrixXcd(h.matrix - h.matrix.adjoint()));
        CHECK(dev <= 1e-12 * std::max(max_norm(h.matrix), 1e-300));
    }
}

TEST_CASE("degenerate levels reproduce the classical matrix") {
    std::mt19937_64 g(4200);
    for (int t = 0; t < 10; ++t) {
        // all level energies equal: every transition frequency is zero, so the
        // full interaction must equal the static operator form
        const int dim = 2 + t % 2;
        std::vector<CVec3> moments(static_cast<size_t>(dim) * dim, CVec3::Zero());
        for (int x = 0; x < dim; ++x) {
            moments[static_cast<size_t>(x) * dim + x] = testhelp::random_cvec(g, 1.0, true);
            for (int y = x + 1; y < dim; ++y) {
                const CVec3 m = testhelp::random_cvec(g);
                moments[static_cast<size_t>(x) * dim + y] = m;
                moments[static_cast<size_t>(y) * dim + x] = m.conjugate();
            }
        }
        const DipoleSpec d(std::vector<double>(static_cast<size_t>(dim), 0.75), moments);
        const PairGeometry geom = testhelp::random_geometry(g);
        const HamiltonianMatrix full = assemble(d, d, geom, kDimless);
        const HamiltonianMatrix cl = classical_hamiltonian(d, d, geom, kDimless);
        CHECK(max_norm(Eigen::MatrixXcd(full.matrix - cl.matrix)) <=
              1e-14 * std::max(max_norm(cl.matrix), 1e-300));
    }
}

TEST_CASE("classical matrix entry by hand") {
    const DipoleSpec d1 = two_level(1.0, CVec3(1, 0, 0));
    const DipoleSpec d2 = two_level(1.0, CVec3(1, 0, 0));
    const PairGeometry geom(2.0, RVec3(0, 0, 1));
    const HamiltonianMatrix cl = classical_hamiltonian(d1, d2, geom, kDimless);
    // x-oriented transition moments, z separation: no radial part, the
    // (0|0 <- 1|1) element is mu0/(4 pi r^3 hbar) * 1
    const double pref = 1.0 / (4 * kPi * 8.0);
    CHECK(cl.matrix(cl.basis_index(0, 0), cl.basis_index(1, 1)).real() == doctest::Approx(pref));
    CHECK(cl.matrix(cl.basis_index(0, 0), cl.basis_index(0, 0)) == Complex(0, 0));
}

TEST_CASE("interaction scales quadratically in the moments, bit-exactly for powers of two") {
    const DipoleSpec d1 = two_level(1.1, CVec3(0.7, Complex(0, 0.5), 0.1));
    const DipoleSpec d1x2 = two_level(1.1, 2.0 * CVec3(0.7, Complex(0, 0.5), 0.1));
    const DipoleSpec d2 = two_level(0.8, CVec3(1.0, 0.2, 0));
    const DipoleSpec d2x2 = two_level(0.8, 2.0 * CVec3(1.0, 0.2, 0));
    const PairGeometry geom(1.4, RVec3(0, 0.6, 0.8));

    const HamiltonianMatrix h = assemble(d1, d2, geom, kDimless);
    const HamiltonianMatrix h4 = assemble(d1x2, d2x2, geom, kDimless);
    CHECK((h4.matrix - 4.0 * h.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("small-separation deviation from the classical form grows quadratically") {
    const DipoleSpec d1 = two_level(1.0, CVec3(1, 0, 0));
    const DipoleSpec d2 = two_level(1.0, CVec3(0.6, 0.8, 0));
    std::vector<double> radii;
    for (int i = 0; i <= 12; ++i) radii.push_back(1e-4 * std::pow(100.0, i / 12.0));

    const DickeScan scan = dicke_deviation(d1, d2, RVec3(0, 0, 1), kDimless, radii);
    REQUIRE(scan.points.size() == radii.size());
    CHECK(scan.small_r_slope == doctest::Approx(2.0).epsilon(0.01));
    for (const auto& [r, dev] : scan.points) {
        if (r == radii[6]) CHECK(dev <= 5e-6);  // eta = 1e-3
        CHECK(dev >= 0.0);
    }
}

TEST_CASE("deviation is undefined when the classical matrix vanishes") {
    // orthogonal transition moments, both transverse: dot and radial parts both zero
    const DipoleSpec d1 = two_level(1.0, CVec3(1, 0, 0));
    const DipoleSpec d2 = two_level(1.0, CVec3(0, 1, 0));
    CHECK_THROWS_AS(dicke_deviation(d1, d2, RVec3(0, 0, 1), kDimless, {0.01, 0.1}),
                    std::domain_error);
}

TEST_CASE("rotating-frame filter zeroes counter-rotating and mixed terms only") {
    const DipoleSpec d1 = two_level(1.0, CVec3(0.8, Complex(0, 0.6), 0.2), CVec3(0.3, 0, 0),
                                    CVec3(-0.3, 0, 0));
    const DipoleSpec d2 = two_level(1.0, CVec3(1.0, 0.3, 0));
    const PairGeometry geom(1.3, RVec3(0, 0, 1));

    const HamiltonianMatrix full = assemble(d1, d2, geom, kDimless);
    const HamiltonianMatrix kept = rwa_filter(full, d1, d2, kDimless);

    const int cr_row = full.basis_index(0, 0), cr_col = full.basis_index(1, 1);
    CHECK(full.matrix(cr_row, cr_col) != Complex(0, 0));
    CHECK(kept.matrix(cr_row, cr_col) == Complex(0, 0));

    // mixed: diagonal moment of dipole 1 against a transition of dipole 2
    const int mx_row = full.basis_index(0, 0), mx_col = full.basis_index(0, 1);
    CHECK(full.matrix(mx_row, mx_col) != Complex(0, 0));
    CHECK(kept.matrix(mx_row, mx_col) == Complex(0, 0));

    // resonant element survives untouched
    const int r_row = full.basis_index(1, 0), r_col = full.basis_index(0, 1);
    CHECK(kept.matrix(r_row, r_col) == full.matrix(r_row, r_col));
    // permanent-permanent element survives untouched
    const int pp = full.basis_index(0, 0);
    CHECK(kept.matrix(pp, pp) == full.matrix(pp, pp));

    CHECK(max_norm(Eigen::MatrixXcd(kept.matrix - kept.matrix.adjoint())) <=
          1e-12 * std::max(max_norm(kept.matrix), 1e-300));

    std::mt19937_64 g(5);
    const DipoleSpec d_wrong = testhelp::random_dipole(g, 3);
    CHECK_THROWS_AS(rwa_filter(full, d_wrong, d2, kDimless), std::invalid_argument);
}
