#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "helpers.hpp"
#include "magpair/quadrature.hpp"
#include "magpair/textio.hpp"

using namespace magpair;

TEST_CASE("bilinear form is unconjugated") {
    const CVec3 m(Complex(0, 1), 0, 0);
    const Bilinears b = bilinear_form(m, m, RVec3(0, 0, 1));
    CHECK(b.dot == Complex(-1.0, 0.0));  // i*i, not conj(i)*i
    CHECK(b.radial == Complex(0.0, 0.0));

    const CVec3 m1(0.6, Complex(0, 0.8), 0.0), m2(1.0, 0.0, 0.0);
    const Bilinears b2 = bilinear_form(m1, m2, RVec3(0, 0.6, 0.8));
    CHECK(b2.dot == Complex(0.6, 0.0));
    CHECK(b2.radial == Complex(0, 0.8) * 0.6 * 0.0);
}

TEST_CASE("bilinear form rejects bad separation directions") {
    const CVec3 m(1, 0, 0);
    CHECK_THROWS_AS(bilinear_form(m, m, RVec3(0, 0, 1.5)), std::invalid_argument);
    CHECK_THROWS_AS(bilinear_form(m, m, RVec3(0, 0, 0)), std::invalid_argument);
    CVec3 bad = m;
    bad[1] = Complex(std::nan(""), 0);
    CHECK_THROWS_AS(bilinear_form(bad, m, RVec3(0, 0, 1)), std::invalid_argument);
}

TEST_CASE("dipole spec validates Hermiticity and shape") {
    std::vector<CVec3> ok{CVec3::Zero(), CVec3(1, Complex(0, 2), 0), CVec3(1, Complex(0, -2), 0),
                          CVec3::Zero()};
    const DipoleSpec d({0.0, 1.5}, ok);
    CHECK(d.dim() == 2);
    CHECK(d.moment_scale() == doctest::Approx(2.0));
    CHECK(d.moment(0, 1)[1] == Complex(0, 2));
    CHECK_THROWS_AS(d.moment(2, 0), std::out_of_range);

    std::vector<CVec3> broken = ok;
    broken[2] = CVec3(1, Complex(0, 2), 0);  // should be the conjugate
    CHECK_THROWS_WITH_AS(DipoleSpec({0.0, 1.5}, broken), doctest::Contains("(0,1)"),
                         std::invalid_argument);

    CHECK_THROWS_AS(DipoleSpec({0.0}, {CVec3::Zero()}), std::invalid_argument);
    CHECK_THROWS_AS(DipoleSpec({0.0, 1.0}, {CVec3::Zero()}), std::invalid_argument);
}

TEST_CASE("transition frequency sign convention") {
    const DipoleSpec d({0.0, 2.0}, {CVec3::Zero(), CVec3(1, 0, 0), CVec3(1, 0, 0), CVec3::Zero()});
    PhysicalConstants consts = PhysicalConstants::dimensionless();
    CHECK(transition_frequency(d, 1, 0, consts) == 2.0);
    CHECK(transition_frequency(d, 0, 1, consts) == -2.0);
    CHECK(transition_frequency(d, 1, 1, consts) == 0.0);
    consts.hbar = 4.0;
    CHECK(transition_frequency(d, 1, 0, consts) == 0.5);
}

TEST_CASE("pair geometry construction") {
    CHECK_THROWS_AS(PairGeometry(0.0, RVec3(0, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(PairGeometry(-1.0, RVec3(0, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(PairGeometry(1.0, RVec3(0, 0, 0.9)), std::invalid_argument);

    const PairGeometry g = PairGeometry::from_positions(RVec3(1, 1, 1), RVec3(1, 1, 4));
    CHECK(g.r == doctest::Approx(3.0));
    CHECK(g.e_r[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(PairGeometry::from_positions(RVec3(1, 1, 1), RVec3(1, 1, 1)),
                    std::invalid_argument);
}

TEST_CASE("gauss-legendre nodes integrate high-degree polynomials exactly") {
    const auto& gl = quad::GaussLegendre::order16();
    REQUIRE(gl.nodes.size() == 16);

    double wsum = 0.0, x30 = 0.0;
    for (size_t i = 0; i < 16; ++i) {
        wsum += gl.weights[i];
        x30 += gl.weights[i] * std::pow(gl.nodes[i], 30);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x30 == doctest::Approx(2.0 / 31.0).epsilon(1e-13));  // degree 30 < 2*16

    // symmetry of the rule
    for (size_t i = 0; i < 8; ++i) {
        CHECK(gl.nodes[i] == doctest::Approx(-gl.nodes[15 - i]).epsilon(1e-15));
        CHECK(gl.weights[i] == doctest::Approx(gl.weights[15 - i]).epsilon(1e-15));
    }

    const auto& g7 = quad::GaussLegendre::cached(7);
    CHECK(g7.nodes[3] == doctest::Approx(0.0));
    double x12 = 0.0;
    for (size_t i = 0; i < 7; ++i) x12 += g7.weights[i] * std::pow(g7.nodes[i], 12);
    CHECK(x12 == doctest::Approx(2.0 / 13.0).epsilon(1e-13));
}

TEST_CASE("graded breakpoints cluster near the pole and span the interval") {
    const auto pts = quad::graded_breakpoints(0.0, 10.0, 2.0, 0.05, 1.0);
    REQUIRE(pts.size() >= 3);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == 10.0);
    double min_near = 1e9, max_far = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i] > pts[i - 1]);
        const double h = pts[i] - pts[i - 1];
        const double d = std::abs(0.5 * (pts[i] + pts[i - 1]) - 2.0);
        if (d < 0.2) min_near = std::min(min_near, h);
        if (d > 5.0) max_far = std::max(max_far, h);
    }
    CHECK(min_near < 0.1);
    CHECK(max_far > 0.5);
}

TEST_CASE("richardson extrapolation recovers polynomial limits exactly") {
    const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    std::vector<Complex> vals;
    for (double e : eps) vals.push_back(Complex(3.0 + 2.0 * e + 5.0 * e * e, -1.0 + 0.5 * e));
    const auto ex = quad::richardson_to_zero(eps, vals, 3);
    CHECK(std::abs(ex.value - Complex(3.0, -1.0)) < 1e-12);
    CHECK(ex.error_estimate < 1e-10);
    REQUIRE(ex.sequence.size() == 4);
    // column-0 estimate is the finest raw sample; the diagonal ends at the full-order value
    CHECK(std::abs(ex.sequence[0] - vals.back()) == 0.0);
    CHECK(std::abs(ex.sequence.back() - ex.value) == 0.0);

    // non-polynomial decay still converges to the right limit
    std::vector<Complex> vals2;
    for (double e : eps) vals2.push_back(Complex(1.0 / (1.0 + e), 0.0));
    const auto ex2 = quad::richardson_to_zero(eps, vals2, 3);
    CHECK(std::abs(ex2.value - 1.0) < 1e-4);
    CHECK(std::abs(ex2.value - 1.0) < 10 * std::max(ex2.error_estimate, 1e-9));
}

TEST_CASE("double formatting round-trips exactly") {
    std::mt19937_64 g(7771);
    for (int t = 0; t < 200; ++t) {
        double x = std::ldexp(testhelp::uniform(g, -1.0, 1.0), static_cast<int>(testhelp::uniform(g, -60, 60)));
        const std::string s = textio::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(textio::format_double(0.0) == "0.0000000000000000e+00");
    CHECK(textio::format_double(-0.25) == "-2.5000000000000000e-01");
}

TEST_CASE("csv quoting") {
    CHECK(textio::csv_field("plain") == "plain");
    CHECK(textio::csv_field("a,b") == "\"a,b\"");
    CHECK(textio::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(textio::csv_field("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(textio::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(textio::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(textio::fnv1a64_hex("") == "fnv1a64:cbf29ce484222325");
}
