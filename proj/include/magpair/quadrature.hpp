#pragma once

#include <complex>
#include <vector>

namespace magpair::quad {

using Complex = std::complex<double>;

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static GaussLegendre compute(int n);      // Newton iteration on the Legendre recurrence
    static const GaussLegendre& order16();    // cached panel rule
    static const GaussLegendre& cached(int n);
};

// Breakpoints on [a, b] whose spacing shrinks toward `pole`:
// h = min(h_max, max(h_min, 0.7 * distance-to-pole)).
std::vector<double> graded_breakpoints(double a, double b, double pole, double h_min, double h_max);

// Uniform breakpoints with spacing at most h.
std::vector<double> uniform_breakpoints(double a, double b, double h);

template <class F>
Complex integrate_panels(F&& f, const std::vector<double>& breaks, const GaussLegendre& gl) {
    Complex acc = 0.0;
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        Complex s = 0.0;
        for (size_t q = 0; q < gl.nodes.size(); ++q) s += gl.weights[q] * f(mid + half * gl.nodes[q]);
        acc += half * s;
    }
    return acc;
}

struct Extrapolation {
    Complex value;
    double error_estimate;           // |last diagonal step|
    std::vector<Complex> sequence;   // successive extrapolated estimates, one per Neville column
};

// Neville polynomial extrapolation of samples (eps[i], vals[i]) to eps = 0,
// using at most `order` elimination stages.
Extrapolation richardson_to_zero(const std::vector<double>& eps, const std::vector<Complex>& vals, int order);

}  // namespace magpair::quad
