#pragma once

namespace magpair {

// CODATA 2018 SI values by default; dimensionless() sets all three to 1
// so every quantity is expressed in the natural (eta, strength) pair.
struct PhysicalConstants {
    double mu0  = 1.25663706212e-6;  // vacuum permeability, T*m/A
    double hbar = 1.054571817e-34;   // reduced Planck constant, J*s
    double c    = 299792458.0;       // speed of light, m/s

    static PhysicalConstants si() { return {}; }
    static PhysicalConstants dimensionless() { return {1.0, 1.0, 1.0}; }

    void validate() const;  // throws std::invalid_argument unless all strictly positive
};

// Every tolerance knob in one place.
struct Tolerances {
    double hermiticity_rel    = 1e-12;  // moment-matrix Hermiticity at construction
    double unit_vector_abs    = 1e-12;  // |e_r| - 1
    double pairing_rel        = 1e-12;  // coupling-tensor Hermitian pairing self-check
    double self_adjoint_rel   = 1e-12;  // assembled Hamiltonian vs its adjoint, max norm
    double resonance_rel      = 1e-9;   // |omega1 + omega2| vs max(|omega1|,|omega2|)
    double angular_oracle_rel = 1e-8;   // closed-form J vs solid-angle quadrature
    double pv_oracle_rel      = 1e-4;   // closed-form K vs regulated principal-value quadrature
};

}  // namespace magpair
