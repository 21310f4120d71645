#include "magpair/coupling.hpp"

#include <cmath>
#include <sstream>

namespace magpair {

const char* term_class_label(TermClass c) {
    switch (c) {
        case TermClass::PermanentPermanent: return "permanent_permanent";
        case TermClass::Mixed: return "mixed";
        case TermClass::Resonant: return "resonant";
        case TermClass::NonResonant: return "non_resonant";
        case TermClass::CounterRotating: return "counter_rotating";
    }
    return "unknown";
}

TermClass classify(const DipoleSpec& d1, const DipoleSpec& d2, int y, int x, int u, int v,
                   const PhysicalConstants& consts, double resonance_tol) {
    const bool diag1 = (y == x);
    const bool diag2 = (u == v);
    if (diag1 && diag2) return TermClass::PermanentPermanent;
    if (diag1 || diag2) return TermClass::Mixed;

    const double w1 = transition_frequency(d1, y, x, consts);
    const double w2 = transition_frequency(d2, u, v, consts);
    const bool same_sign = (w1 > 0.0 && w2 > 0.0) || (w1 < 0.0 && w2 < 0.0);
    if (same_sign) return TermClass::CounterRotating;

    const bool opposite = (w1 > 0.0 && w2 < 0.0) || (w1 < 0.0 && w2 > 0.0);
    const bool both_zero = (w1 == 0.0 && w2 == 0.0);  // degenerate off-diagonal pair
    if ((opposite || both_zero) &&
        std::abs(w1 + w2) <= resonance_tol * std::max(std::abs(w1), std::abs(w2)))
        return TermClass::Resonant;
    return TermClass::NonResonant;
}

Complex g_principal(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                    int y, int x, int u, int v, const PhysicalConstants& consts) {
    const CVec3& m1 = d1.moment(y, x);
    const CVec3& m2 = d2.moment(u, v);
    const double w1 = transition_frequency(d1, y, x, consts);
    const double w2 = transition_frequency(d2, u, v, consts);
    return 0.5 * (k_kernel(w1, geom, m1, m2, consts) + k_kernel(w2, geom, m1, m2, consts));
}

Complex g_dissipative(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                      int y, int x, int u, int v, const PhysicalConstants& consts) {
    const CVec3& m1 = d1.moment(y, x);
    const CVec3& m2 = d2.moment(u, v);
    const double w1 = transition_frequency(d1, y, x, consts);
    const double w2 = transition_frequency(d2, u, v, consts);
    // J is exactly odd, so the sum cancels bit-for-bit when w2 == -w1.
    const Complex j_sum = j_coupling(w1, geom, m1, m2, consts) + j_coupling(w2, geom, m1, m2, consts);
    return Complex(0.0, -0.25) * j_sum;
}

CouplingTensor::CouplingTensor(int dim1, int dim2, std::vector<Entry> entries, bool dense)
    : dim1_(dim1), dim2_(dim2), dense_(dense), entries_(std::move(entries)) {
    const size_t total = static_cast<size_t>(dim1_) * dim1_ * dim2_ * dim2_;
    if (total <= (1u << 24)) {
        index_.assign(total, -1);
        for (size_t k = 0; k < entries_.size(); ++k) {
            const Entry& e = entries_[k];
            const size_t off = ((static_cast<size_t>(e.y) * dim1_ + e.x) * dim2_ + e.u) * dim2_ + e.v;
            index_[off] = static_cast<int>(k);
        }
    }
}

const CouplingTensor::Entry& CouplingTensor::at(int y, int x, int u, int v) const {
    if (y < 0 || y >= dim1_ || x < 0 || x >= dim1_ || u < 0 || u >= dim2_ || v < 0 || v >= dim2_)
        throw std::out_of_range("CouplingTensor::at: index out of range");
    if (!index_.empty()) {
        const size_t off = ((static_cast<size_t>(y) * dim1_ + x) * dim2_ + u) * dim2_ + v;
        const int k = index_[off];
        if (k < 0) throw std::out_of_range("CouplingTensor::at: entry skipped (zero moment pair)");
        return entries_[static_cast<size_t>(k)];
    }
    for (const Entry& e : entries_)
        if (e.y == y && e.x == x && e.u == u && e.v == v) return e;
    throw std::out_of_range("CouplingTensor::at: entry skipped (zero moment pair)");
}

CouplingTensor coupling_tensor(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                               const PhysicalConstants& consts, const Tolerances& tol) {
    const int n1 = d1.dim();
    const int n2 = d2.dim();
    const bool dense = n1 * n2 <= 64;

    auto moment_zero = [](const CVec3& m) { return m[0] == 0.0 && m[1] == 0.0 && m[2] == 0.0; };

    std::vector<CouplingTensor::Entry> entries;
    entries.reserve(dense ? static_cast<size_t>(n1) * n1 * n2 * n2 : 64);
    for (int y = 0; y < n1; ++y)
        for (int x = 0; x < n1; ++x)
            for (int u = 0; u < n2; ++u)
                for (int v = 0; v < n2; ++v) {
                    if (!dense && (moment_zero(d1.moment(y, x)) || moment_zero(d2.moment(u, v)))) continue;
                    entries.push_back({y, x, u, v,
                                       g_principal(d1, d2, geom, y, x, u, v, consts),
                                       g_dissipative(d1, d2, geom, y, x, u, v, consts),
                                       classify(d1, d2, y, x, u, v, consts, tol.resonance_rel)});
                }

    CouplingTensor tensor(n1, n2, std::move(entries), dense);

    // Hermitian pairing self-check: G^{xy,vu} must equal conj(G^{yx,uv}).
    double scale = 0.0;
    for (const auto& e : tensor.entries())
        scale = std::max({scale, std::abs(e.g_principal), std::abs(e.g_dissipative)});
    const double limit = tol.pairing_rel * std::max(scale, 1e-300);
    for (const auto& e : tensor.entries()) {
        const auto& partner = tensor.at(e.x, e.y, e.v, e.u);
        if (std::abs(partner.g_principal - std::conj(e.g_principal)) > limit ||
            std::abs(partner.g_dissipative - std::conj(e.g_dissipative)) > limit) {
            std::ostringstream msg;
            msg << "coupling_tensor: Hermitian pairing violated at (" << e.y << "," << e.x << "," << e.u
                << "," << e.v << "); internal inconsistency";
            throw std::logic_error(msg.str());
        }
    }
    return tensor;
}

}  // namespace magpair
