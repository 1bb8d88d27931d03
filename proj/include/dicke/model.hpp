#pragma once
// Truncated cavity-spin Hilbert space and the operators of the open Dicke
// model.  Conventions: hbar = 1, collective spin j = spin_count / 2, cavity
// Fock space truncated at n_cutoff excitations.

#include <stdexcept>
#include <vector>

#include "dicke/types.hpp"

namespace dicke {

// Physical couplings and truncation sizes.
struct ModelParams {
    double omega_c = 1.0;  // cavity frequency
    double omega_s = 1.0;  // spin level splitting
    double kappa = 1.0;    // cavity photon loss rate
    double lambda = 0.0;   // cavity-spin coupling
    int spin_count = 6;    // number of two-level emitters; j = spin_count / 2
    int n_cutoff = 16;     // largest retained cavity occupation
};

// Throws std::invalid_argument when a parameter is out of range.
void validate(const ModelParams& params);

// Product state |n, m>.  m is stored doubled so half-integer spin projections
// stay exact integers.
struct HilbertState {
    int n;        // cavity occupation, 0 <= n <= n_cutoff
    int twice_m;  // 2m, ranging over -spin_count .. spin_count in steps of 2
    double m() const { return 0.5 * twice_m; }
};

// Canonical basis enumeration: n-major, m ascending within each n.
struct HilbertBasis {
    int n_cutoff = 0;
    int spin_count = 0;
    std::vector<HilbertState> states;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(states.size()); }

    Eigen::Index index(int n, int twice_m) const {
        return static_cast<Eigen::Index>(n) * (spin_count + 1) +
               (twice_m + spin_count) / 2;
    }
};

HilbertBasis enumerate_basis(const ModelParams& params);

// Cavity annihilation operator a, truncated at n_cutoff.
SparseMatrixXcd op_cavity_annihilation(const HilbertBasis& basis);

// Photon number a^dag a, assembled directly as diag(n) so occupations are
// exact integers rather than products of square roots.
SparseMatrixXcd op_number(const HilbertBasis& basis);

enum class SpinAxis { x, y, z };

// Collective spin component S^x, S^y, or S^z in the symmetric representation.
SparseMatrixXcd op_spin(const HilbertBasis& basis, SpinAxis axis);

SparseMatrixXcd op_spin_raising(const HilbertBasis& basis);
SparseMatrixXcd op_spin_lowering(const HilbertBasis& basis);

// H = omega_c a^dag a + omega_s S^z + (2 lambda / sqrt(spin_count)) (a^dag + a) S^x.
// The assembly keeps H exactly Hermitian in floating point: every off-diagonal
// element and its transpose partner are the same single product of doubles.
SparseMatrixXcd build_hamiltonian(const HilbertBasis& basis,
                                  const ModelParams& params);
SparseMatrixXcd build_hamiltonian(const ModelParams& params);

// Coupling strength at which the normal / superradiant transition sits:
// lambda* = (1/2) sqrt(omega_c omega_s) sqrt(1 + kappa^2 / omega_c^2).
double critical_coupling(const ModelParams& params);

// Diagonal of the excitation-number parity operator Pi = exp(i pi (a^dag a + S^z + j)),
// one +1 or -1 entry per basis state.
Eigen::VectorXi parity_signs(const HilbertBasis& basis);

}  // namespace dicke
