#include "magpair/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace magpair::quad {

GaussLegendre GaussLegendre::compute(int n) {
    if (n < 2) throw std::invalid_argument("GaussLegendre: order must be >= 2");
    GaussLegendre out;
    out.nodes.resize(static_cast<size_t>(n));
    out.weights.resize(static_cast<size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x).
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        out.nodes[static_cast<size_t>(i)] = -x;
        out.nodes[static_cast<size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        out.weights[static_cast<size_t>(i)] = w;
        out.weights[static_cast<size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) out.nodes[static_cast<size_t>(n / 2)] = 0.0;
    return out;
}

const GaussLegendre& GaussLegendre::order16() {
    static const GaussLegendre gl = compute(16);
    return gl;
}

const GaussLegendre& GaussLegendre::cached(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
    return it->second;
}

std::vector<double> graded_breakpoints(double a, double b, double pole, double h_min, double h_max) {
    std::vector<double> pts{a};
    double x = a;
    const double fuzz = 1e-12 * std::max(1.0, std::abs(b));
    while (x < b - fuzz) {
        const double d = std::abs(x - pole);
        const double h = std::min(h_max, std::max(h_min, 0.7 * d));
        x = std::min(b, x + h);
        pts.push_back(x);
    }
    if (pts.size() < 2) pts.push_back(b);
    pts.back() = b;
    return pts;
}

std::vector<double> uniform_breakpoints(double a, double b, double h) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    std::vector<double> pts(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts[static_cast<size_t>(i)] = a + (b - a) * i / n;
    pts.back() = b;
    return pts;
}

Extrapolation richardson_to_zero(const std::vector<double>& eps, const std::vector<Complex>& vals, int order) {
    const size_t n = eps.size();
    if (n == 0 || vals.size() != n) throw std::invalid_argument("richardson_to_zero: size mismatch");
    const size_t jmax = std::min<size_t>(static_cast<size_t>(order), n - 1);

    std::vector<Complex> prev(vals);
    Extrapolation out;
    out.sequence.push_back(prev.back());
    for (size_t j = 1; j <= jmax; ++j) {
        std::vector<Complex> cur(n);
        for (size_t i = j; i < n; ++i)
            cur[i] = (eps[i] * prev[i - 1] - eps[i - j] * prev[i]) / (eps[i] - eps[i - j]);
        prev = cur;
        out.sequence.push_back(prev.back());
    }
    out.value = out.sequence.back();
    out.error_estimate = out.sequence.size() >= 2
                             ? std::abs(out.sequence.back() - out.sequence[out.sequence.size() - 2])
                             : 0.0;
    return out;
}

}  // namespace magpair::quad
