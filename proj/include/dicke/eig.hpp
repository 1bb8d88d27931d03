#pragma once
// Dense non-Hermitian eigensolve and the complex-spectrum container shared by
// the Liouvillian pipeline and the synthetic ensembles.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

// Raised when the QR iteration fails to converge; `converged` counts the
// eigenvalues that were still computed correctly.
struct EigensolverError : std::runtime_error {
    EigensolverError(const std::string& what, Eigen::Index converged_count)
        : std::runtime_error(what), converged(converged_count) {}
    Eigen::Index converged = 0;
};

// Complex spectrum plus the provenance that travels into emitted files.
// Eigenvalues produced by this module are sorted by (Re, Im) ascending.
struct Spectrum {
    Eigen::VectorXcd eigenvalues;
    std::optional<double> residual_max;  // sampled ||A v - E v|| / ||v||
    std::optional<std::pair<double, double>> window;  // applied [re_min, re_max]
    std::vector<std::pair<std::string, std::string>> metadata;  // header lines

    Eigen::Index size() const { return eigenvalues.size(); }
};

// In-place canonical ordering: by real part, imaginary part breaking ties.
void sort_canonical(Eigen::VectorXcd& values);

// All eigenvalues of a dense complex matrix (QR with balancing).  When
// with_residuals is set, right eigenvectors are also computed and up to 32
// eigenpairs are spot-checked; the worst relative residual is recorded.
Spectrum eigenvalues(const Eigen::MatrixXcd& matrix, bool with_residuals = false);

// All eigenvalues of a dense real matrix via the real Schur form.  Complex
// eigenvalues emerge in exactly conjugate pairs, so the returned spectrum is
// closed under conjugation as a multiset, not merely to solver accuracy.
Spectrum eigenvalues(const Eigen::MatrixXd& matrix);

// Keep eigenvalues with Re E in [-alpha * kappa * n_cutoff, 0], inclusive on
// both edges.  An empty result is legal; callers decide how loudly to warn.
Spectrum window_filter(const Spectrum& spectrum, const ModelParams& params,
                       double alpha);

// Text format: "# key = value" header lines, then one "re im" pair per line
// with 17 significant digits (round-trip exact).
void write_spectrum(std::ostream& out, const Spectrum& spectrum);
Spectrum read_spectrum(std::istream& in);

}  // namespace dicke
