#pragma once
// Liouville-space representation of the Lindblad generator
//   L rho = -i [H, rho] + kappa (2 a rho a^dag - {a^dag a, rho}),
// vectorized over the basis |n_l, m_l><n_r, m_r| with the left Hilbert index
// major.  The generator commutes with the weak parity zeta = pi_l * pi_r, so
// it is exactly block diagonal over zeta = +1 / -1.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

enum class Sector { full, even, odd };

const char* to_string(Sector sector);

// One Liouville basis vector |n_l, m_l><n_r, m_r|.
struct LiouvilleState {
    int n_l;
    int twice_m_l;
    int n_r;
    int twice_m_r;
};

struct LiouvilleBasis {
    std::vector<LiouvilleState> states;  // left index major, right minor
    std::vector<std::int8_t> parities;   // zeta per state, +1 or -1

    Eigen::Index dim() const { return static_cast<Eigen::Index>(states.size()); }
};

LiouvilleBasis enumerate_liouville_basis(const HilbertBasis& basis);

// Thrown when a requested dense dimension exceeds the configured guard.
struct DimensionGuardError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AssemblyOptions {
    // Densifying a block larger than this is refused unless force is set.
    // The full Liouville dimension may be up to twice the guard since only
    // its parity blocks are ever made dense.
    Eigen::Index dense_dimension_guard = 20000;
    bool force = false;
};

struct LiouvillianMatrix {
    SparseMatrixXcd matrix;
    ModelParams params;
    Sector sector = Sector::full;
    LiouvilleBasis basis;  // states spanning this matrix's index space

    Eigen::Index dim() const { return matrix.rows(); }
};

// Sparse Liouvillian over the full Liouville basis.
LiouvillianMatrix assemble_liouvillian(const ModelParams& params,
                                       const AssemblyOptions& options = {});

// Principal submatrix on one parity block, reindexed contiguously.
// Requires a full-sector input.
LiouvillianMatrix project_sector(const LiouvillianMatrix& full, Sector sector);

// Largest |entry| connecting states of opposite parity.  A faithful assembly
// has no such entries at all, so this returns exactly 0.0.
double verify_weak_symmetry(const LiouvillianMatrix& liouvillian);

// Largest |sum over diagonal states <<n,m|n,m|| of any column|.  Trace
// preservation makes every such sum vanish to rounding.
double trace_preservation_defect(const LiouvillianMatrix& liouvillian);

// Exact real similarity form of a parity-respecting block.  Swapping the bra
// and ket of a basis state conjugates the stored entry bitwise (the generator
// preserves Hermiticity), so regrouping each swap pair into its Hermitian and
// anti-Hermitian combination turns the block into a real matrix with the same
// spectrum.  Real Schur iteration on that form yields eigenvalues in exactly
// conjugate pairs: conjugation closure of the spectrum holds by construction
// rather than to solver accuracy.  The entry symmetry is verified cell by
// cell; a violation throws std::logic_error.
SparseMatrixXd conjugation_real_form(const LiouvillianMatrix& block);

// Dense copy of the stored matrix, guarded against runaway dimensions.
Eigen::MatrixXcd to_dense(const LiouvillianMatrix& liouvillian,
                          const AssemblyOptions& options = {});

// Same guard for a real sparse matrix (the conjugation real form).
Eigen::MatrixXd to_dense(const SparseMatrixXd& matrix,
                         const AssemblyOptions& options = {});

// Text export: one "dim nnz" line, then "row col re im" per stored entry in
// column-major order, values with 17 significant digits.
void write_sparse_matrix(std::ostream& out, const SparseMatrixXcd& matrix);

}  // namespace dicke
