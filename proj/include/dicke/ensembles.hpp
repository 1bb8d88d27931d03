#pragma once
// Reference ensembles that bracket the Liouvillian statistics: GinUE for the
// chaotic side, uncorrelated 2D points for the integrable side, and the
// analytically known lambda = 0 Liouvillian spectrum as an exact oracle.

#include <cstdint>
#include <optional>

#include "dicke/eig.hpp"
#include "dicke/liouville.hpp"
#include "dicke/stats.hpp"

namespace dicke {

struct EnsembleDescriptor {
    enum class Kind { ginue, poisson2d, decoupled_dicke };
    Kind kind = Kind::ginue;
    Eigen::Index size = 0;       // matrix dimension or point count
    std::uint64_t seed = 0;      // ignored by decoupled_dicke
    std::optional<ModelParams> params;  // decoupled_dicke only
    std::optional<Sector> sector;       // decoupled_dicke only
};

// Eigenvalues of an n x n matrix with iid complex Gaussian entries, real and
// imaginary parts of variance 1/2 each.  The circular-law disk then has
// radius sqrt(n) and unit mean density.
Spectrum sample_ginue(Eigen::Index n, std::uint64_t seed);

// n points drawn uniformly from the square [0, sqrt(n)]^2, matching the
// circular-law bulk density of sample_ginue.
Spectrum sample_poisson2d(Eigen::Index n, std::uint64_t seed);

// Exact lambda = 0 Liouvillian spectrum by enumeration:
// E = -i omega_c (n_l - n_r) - i omega_s (m_l - m_r) - kappa (n_l + n_r),
// optionally restricted to one parity sector.  Requires params.lambda == 0.
Spectrum decoupled_spectrum(const ModelParams& params,
                            std::optional<Sector> sector = {});

Spectrum sample(const EnsembleDescriptor& descriptor);

// Drop eigenvalues with |E| >= radius_factor * sqrt(n): keeps the circular-law
// bulk where the density is flat and edge effects cannot skew the spacing law.
Spectrum bulk_filter(const Spectrum& spectrum, Eigen::Index n,
                     double radius_factor = 0.85);

// Same cut as a statistics mask: bulk eigenvalues contribute samples while
// neighbors and the density estimate still see the whole spectrum.
SampleMask bulk_mask(const Spectrum& spectrum, Eigen::Index n,
                     double radius_factor = 0.85);

}  // namespace dicke
