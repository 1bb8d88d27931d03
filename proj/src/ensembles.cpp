#include "dicke/ensembles.hpp"

#include <cmath>
#include <string>

#include "dicke/prng.hpp"

namespace dicke {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;

std::vector<std::pair<std::string, std::string>> seeded_metadata(
    const char* kind, Eigen::Index size, std::uint64_t seed) {
    return {{"ensemble", kind},
            {"size", std::to_string(size)},
            {"seed", std::to_string(seed)}};
}

}  // namespace

Spectrum sample_ginue(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_ginue: n must be positive");
    Philox4x32 rng(seed);
    Eigen::MatrixXcd matrix(n, n);
    // Row-major fill, one Box-Muller pair per entry.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = rng.next_gaussian();
            const double im = rng.next_gaussian();
            matrix(i, j) = Complex(re * inv_sqrt2, im * inv_sqrt2);
        }
    Spectrum spectrum = eigenvalues(matrix);
    spectrum.metadata = seeded_metadata("ginue", n, seed);
    return spectrum;
}

Spectrum sample_poisson2d(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_poisson2d: n must be positive");
    Philox4x32 rng(seed);
    const double side = std::sqrt(static_cast<double>(n));
    Eigen::VectorXcd points(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = side * rng.next_double();
        const double y = side * rng.next_double();
        points[i] = Complex(x, y);
    }
    sort_canonical(points);
    Spectrum spectrum;
    spectrum.eigenvalues = std::move(points);
    spectrum.metadata = seeded_metadata("poisson2d", n, seed);
    return spectrum;
}

Spectrum decoupled_spectrum(const ModelParams& params,
                            std::optional<Sector> sector) {
    validate(params);
    if (params.lambda != 0.0)
        throw std::invalid_argument(
            "decoupled_spectrum requires lambda == 0");
    const HilbertBasis hbasis = enumerate_basis(params);
    const LiouvilleBasis lbasis = enumerate_liouville_basis(hbasis);
    const std::int8_t wanted =
        (sector && *sector == Sector::even) ? 1 : (sector && *sector == Sector::odd) ? -1 : 0;

    std::vector<Complex> values;
    values.reserve(static_cast<std::size_t>(lbasis.dim()));
    for (Eigen::Index i = 0; i < lbasis.dim(); ++i) {
        if (wanted != 0 && lbasis.parities[static_cast<std::size_t>(i)] != wanted)
            continue;
        const LiouvilleState& s = lbasis.states[static_cast<std::size_t>(i)];
        // Uncoupled generator is diagonal up to a strictly triangular jump
        // term, so the diagonal is the spectrum.
        const double re = -params.kappa * static_cast<double>(s.n_l + s.n_r);
        const double im = -params.omega_c * static_cast<double>(s.n_l - s.n_r) -
                          params.omega_s * 0.5 *
                              static_cast<double>(s.twice_m_l - s.twice_m_r);
        values.emplace_back(re, im);
    }
    Eigen::VectorXcd eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    sort_canonical(eigenvalues);

    Spectrum spectrum;
    spectrum.eigenvalues = std::move(eigenvalues);
    spectrum.metadata = {
        {"ensemble", "decoupled_dicke"},
        {"sector", sector ? to_string(*sector) : "full"},
        {"spin_count", std::to_string(params.spin_count)},
        {"n_cutoff", std::to_string(params.n_cutoff)}};
    return spectrum;
}

Spectrum sample(const EnsembleDescriptor& descriptor) {
    switch (descriptor.kind) {
        case EnsembleDescriptor::Kind::ginue:
            return sample_ginue(descriptor.size, descriptor.seed);
        case EnsembleDescriptor::Kind::poisson2d:
            return sample_poisson2d(descriptor.size, descriptor.seed);
        case EnsembleDescriptor::Kind::decoupled_dicke:
            if (!descriptor.params)
                throw std::invalid_argument(
                    "decoupled_dicke ensemble needs model parameters");
            return decoupled_spectrum(*descriptor.params, descriptor.sector);
    }
    throw std::invalid_argument("unknown ensemble kind");
}

Spectrum bulk_filter(const Spectrum& spectrum, Eigen::Index n,
                     double radius_factor) {
    if (n < 1) throw std::invalid_argument("bulk_filter: n must be positive");
    if (!(radius_factor > 0.0))
        throw std::invalid_argument("bulk_filter: radius_factor must be positive");
    const double radius = radius_factor * std::sqrt(static_cast<double>(n));
    std::vector<Complex> kept;
    kept.reserve(static_cast<std::size_t>(spectrum.size()));
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
        if (std::abs(spectrum.eigenvalues[i]) < radius)
            kept.push_back(spectrum.eigenvalues[i]);

    Spectrum result;
    result.metadata = spectrum.metadata;
    result.residual_max = spectrum.residual_max;
    result.window = spectrum.window;
    result.metadata.emplace_back("bulk_radius",
                                 std::to_string(radius_factor));
    result.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        kept.data(), static_cast<Eigen::Index>(kept.size()));
    return result;
}

SampleMask bulk_mask(const Spectrum& spectrum, Eigen::Index n,
                     double radius_factor) {
    if (n < 1) throw std::invalid_argument("bulk_mask: n must be positive");
    if (!(radius_factor > 0.0))
        throw std::invalid_argument("bulk_mask: radius_factor must be positive");
    const double radius = radius_factor * std::sqrt(static_cast<double>(n));
    SampleMask keep(static_cast<std::size_t>(spectrum.size()));
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
        keep[static_cast<std::size_t>(i)] =
            std::abs(spectrum.eigenvalues[i]) < radius ? 1 : 0;
    return keep;
}

}  // namespace dicke
