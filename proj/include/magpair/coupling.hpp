#pragma once

#include "magpair/kernel.hpp"

namespace magpair {

enum class TermClass {
    PermanentPermanent,  // both indices diagonal
    Mixed,               // exactly one index diagonal
    Resonant,            // opposite-sign frequencies matching within tolerance
    NonResonant,         // opposite-sign frequencies, detuned
    CounterRotating,     // same-sign frequencies (double raising / double lowering)
};

const char* term_class_label(TermClass c);

// Classify the interaction term tau1^{yx} tau2^{uv} by its frequency content.
TermClass classify(const DipoleSpec& d1, const DipoleSpec& d2, int y, int x, int u, int v,
                   const PhysicalConstants& consts, double resonance_tol = Tolerances{}.resonance_rel);

// Principal part: (1/2)[K^{yx,uv}(Omega1^{yx}) + K^{yx,uv}(Omega2^{uv})].
// The 2->1 direction is folded in through the exchange identity
// K_{2->1}^{uv,yx}(w) = K_{1->2}^{yx,uv}(w).
Complex g_principal(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                    int y, int x, int u, int v, const PhysicalConstants& consts);

// Dissipation correction: (1/4i)[J^{yx,uv}(Omega1^{yx}) + J^{yx,uv}(Omega2^{uv})].
// Cancels exactly (bit-for-bit) when Omega2^{uv} == -Omega1^{yx}.
Complex g_dissipative(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                      int y, int x, int u, int v, const PhysicalConstants& consts);

// All coupling coefficients of the pair, indexed by (y, x, u, v).
class CouplingTensor {
public:
    struct Entry {
        int y, x, u, v;
        Complex g_principal;
        Complex g_dissipative;
        TermClass term_class;
    };

    CouplingTensor(int dim1, int dim2, std::vector<Entry> entries, bool dense);

    int dim1() const { return dim1_; }
    int dim2() const { return dim2_; }
    bool dense() const { return dense_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Dense-layout lookups; throw std::out_of_range for an entry that was
    // skipped in sparse mode.
    const Entry& at(int y, int x, int u, int v) const;

private:
    int dim1_, dim2_;
    bool dense_;
    std::vector<Entry> entries_;             // lexicographic in (y, x, u, v)
    std::vector<int> index_;                 // dense offset table, -1 for skipped
};

// Builds every coefficient and self-checks the Hermitian pairing
// G^{xy,vu} == conj(G^{yx,uv}) (throws std::logic_error on violation, which
// would mean internal inconsistency, not bad input). Dense storage while
// dim1*dim2 <= 64; beyond that, entries whose moment pair is exactly zero
// are skipped.
CouplingTensor coupling_tensor(const DipoleSpec& d1, const DipoleSpec& d2, const PairGeometry& geom,
                               const PhysicalConstants& consts, const Tolerances& tol = {});

}  // namespace magpair
