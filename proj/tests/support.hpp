#pragma once
// Shared helpers for the integration and acceptance suites: pooled ensemble
// statistics (unfold per realization, aggregate spacings and ratios across
// seeds) mirroring how ensemble-averaged spacing laws are estimated.

#include <cstdint>
#include <utility>
#include <vector>

#include "dicke/ensembles.hpp"
#include "dicke/stats.hpp"

namespace dicke::testing {

struct PooledStats {
    double eta = 0.0;
    RatioSummary ratios;
    Eigen::Index spacing_count = 0;
    Eigen::Index ratio_count = 0;
    HistogramDensity histogram;
};

// One realization plus the mask of eigenvalues that contribute statistics;
// an empty mask keeps everything.
struct MaskedSpectrum {
    Spectrum spectrum;
    SampleMask keep;
};

// Unfolding is per realization (each spectrum gets its own KDE), the
// histogram and ratio averages run over the pooled samples.
inline PooledStats pooled_stats(const std::vector<MaskedSpectrum>& spectra,
                                double s_max, int bins,
                                double bandwidth_factor = 4.5) {
    std::vector<double> pooled_spacings;
    std::vector<RatioSample> pooled_ratios;
    for (const MaskedSpectrum& sample : spectra) {
        const bool masked = !sample.keep.empty();
        const UnfoldedSpacings unfolded =
            masked ? unfold(sample.spectrum, sample.keep, bandwidth_factor)
                   : unfold(sample.spectrum, bandwidth_factor);
        pooled_spacings.insert(
            pooled_spacings.end(), unfolded.unfolded.data(),
            unfolded.unfolded.data() + unfolded.unfolded.size());
        const std::vector<RatioSample> samples =
            masked ? spacing_ratios(sample.spectrum, sample.keep)
                   : spacing_ratios(sample.spectrum);
        pooled_ratios.insert(pooled_ratios.end(), samples.begin(),
                             samples.end());
    }

    UnfoldedSpacings pooled;
    pooled.unfolded = Eigen::Map<const Eigen::VectorXd>(
        pooled_spacings.data(),
        static_cast<Eigen::Index>(pooled_spacings.size()));

    PooledStats result;
    result.histogram = spacing_histogram(pooled, s_max, bins);
    result.eta = eta_metric(result.histogram);
    result.ratios = ratio_summary(pooled_ratios);
    result.spacing_count = static_cast<Eigen::Index>(pooled_spacings.size());
    result.ratio_count = static_cast<Eigen::Index>(pooled_ratios.size());
    return result;
}

inline std::vector<MaskedSpectrum> ginue_bulk_spectra(
    Eigen::Index n, std::uint64_t first_seed, int seeds,
    double radius_factor = 0.85) {
    std::vector<MaskedSpectrum> spectra;
    spectra.reserve(static_cast<std::size_t>(seeds));
    for (int k = 0; k < seeds; ++k) {
        Spectrum spectrum =
            sample_ginue(n, first_seed + static_cast<std::uint64_t>(k));
        SampleMask keep = bulk_mask(spectrum, n, radius_factor);
        spectra.push_back({std::move(spectrum), std::move(keep)});
    }
    return spectra;
}

inline std::vector<MaskedSpectrum> poisson_spectra(Eigen::Index n,
                                                   std::uint64_t first_seed,
                                                   int seeds) {
    std::vector<MaskedSpectrum> spectra;
    spectra.reserve(static_cast<std::size_t>(seeds));
    for (int k = 0; k < seeds; ++k)
        spectra.push_back(
            {sample_poisson2d(n, first_seed + static_cast<std::uint64_t>(k)),
             SampleMask{}});
    return spectra;
}

}  // namespace dicke::testing
