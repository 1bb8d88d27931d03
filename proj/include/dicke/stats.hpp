#pragma once
// Universal statistics of complex spectra: nearest-neighbor spacings with
// local-density unfolding, reference spacing densities (2D Poisson and GinUE),
// the eta interpolation metric, and complex spacing ratios.

#include <iosfwd>
#include <vector>

#include "dicke/eig.hpp"
#include "dicke/types.hpp"

namespace dicke {

// Spacings at or below this threshold count as degeneracies.  The scale is
// relative to the spectral extent so it survives overall rescaling.
double degeneracy_threshold(const Spectrum& spectrum);

// Euclidean distance from each eigenvalue to its nearest neighbor, in the
// spectrum's stored order.  O(N^2) pairwise scan; ties at relative 1e-13
// resolve to the smaller index.
Eigen::VectorXd nn_spacings(const Spectrum& spectrum);

// Gaussian kernel density estimate at a point of the complex plane.
double kde_density(const Spectrum& spectrum, Complex point, double sigma);

// Restricts which eigenvalues contribute samples to the statistics.  Neighbor
// distances and the density estimate always see the complete spectrum; only
// the sample selection changes.  Cutting the spectrum first would fake a
// density cliff at the cut and mis-scale every spacing within a bandwidth of
// it.  Size must equal the spectrum size; nonzero = keep.
using SampleMask = std::vector<char>;

struct UnfoldedSpacings {
    Eigen::VectorXd raw;       // s_i of the kept eigenvalues
    Eigen::VectorXd unfolded;  // s'_i, kept-sample mean 1 by construction
    double sigma = 0.0;        // KDE bandwidth actually used
    double mean_raw = 0.0;     // mean raw spacing of the full spectrum
    double normalizer = 0.0;   // kept-sample mean of s_i sqrt(rho(E_i))
    Eigen::Index degenerate_count = 0;
};

// Local-density unfolding: s'_i = s_i sqrt(rho_avg(E_i)) / mean(...), with
// KDE bandwidth sigma = bandwidth_factor * mean raw spacing.
UnfoldedSpacings unfold(const Spectrum& spectrum, double bandwidth_factor = 4.5);
UnfoldedSpacings unfold(const Spectrum& spectrum, const SampleMask& keep,
                        double bandwidth_factor = 4.5);

// Spacing density of uncorrelated points in the plane, unit mean:
// p(s) = (pi/2) s exp(-pi s^2 / 4).
double pdf_2d_poisson(double s);

// GinUE nearest-neighbor spacing density before mean rescaling:
// p_bar(s) = sum_j [2 s^(2j+1) e^(-s^2) / Gamma(1+j, s^2)]
//            * prod_k [Gamma(1+k, s^2) / k!].
// Evaluated through Poisson tail probabilities Q_k = Gamma(1+k, s^2) / k!,
// which keeps every factor in [0, 1] and the series free of overflow.
double pdf_ginue_unscaled(double s, int truncation_order = 200);

// Mean of pdf_ginue_unscaled (adaptive Simpson, cached for the default order).
double ginue_mean_spacing(int truncation_order = 200);

// Unit-mean GinUE density: s_bar * p_bar(s_bar * s).
double pdf_ginue(double s);

struct HistogramDensity {
    Eigen::VectorXd edges;    // bins + 1 equispaced edges on [0, s_max]
    Eigen::VectorXd density;  // counts / (sample_count * bin_width)
    Eigen::Index sample_count = 0;    // all spacings, overflow included
    Eigen::Index overflow_count = 0;  // spacings beyond s_max

    Eigen::Index bins() const { return density.size(); }
    double bin_width() const {
        return (edges[edges.size() - 1] - edges[0]) / static_cast<double>(bins());
    }
    double midpoint(Eigen::Index i) const {
        return 0.5 * (edges[i] + edges[i + 1]);
    }
    double overflow_fraction() const {
        return sample_count == 0
                   ? 0.0
                   : static_cast<double>(overflow_count) / sample_count;
    }
};

// Density-normalized histogram of unfolded spacings; the right edge of the
// last bin is inclusive, anything beyond is counted as overflow.
HistogramDensity spacing_histogram(const UnfoldedSpacings& spacings,
                                   double s_max = 5.0, int bins = 100);

// Squared L2 distance from 2D Poisson, normalized by the Poisson-to-GinUE
// distance, both integrated over the histogram grid by the midpoint rule.
// 0 = Poisson-like, 1 = GinUE-like.
double eta_metric(const HistogramDensity& histogram);

struct RatioSample {
    Complex z;     // (E_nn - E) / (E_nnn - E)
    double r;      // |z|, in [0, 1]
    double theta;  // arg z, in (-pi, pi]
};

// Complex spacing ratios in the spectrum's stored order.  Needs at least
// three eigenvalues; samples whose two nearest neighbors are both at zero
// distance are dropped (the ratio is undefined there).
std::vector<RatioSample> spacing_ratios(const Spectrum& spectrum);
std::vector<RatioSample> spacing_ratios(const Spectrum& spectrum,
                                        const SampleMask& keep);

struct RatioSummary {
    double mean_r = 0.0;
    double mean_cos_theta = 0.0;
};

RatioSummary ratio_summary(const std::vector<RatioSample>& samples);

// Everything one spectrum analysis produces, ready for serialization.
struct StatsReport {
    std::vector<std::pair<std::string, std::string>> metadata;
    Eigen::Index spectrum_size = 0;
    std::optional<std::pair<double, double>> window;
    UnfoldedSpacings spacings;
    HistogramDensity histogram;
    double eta = 0.0;
    RatioSummary ratios;
    Eigen::Index ratio_count = 0;
};

StatsReport analyze_spectrum(
    const Spectrum& spectrum, double s_max = 5.0, int bins = 100,
    double bandwidth_factor = 4.5,
    std::vector<std::pair<std::string, std::string>> metadata = {});

// Masked analysis: spectrum_size and every statistic describe the kept
// eigenvalues, with neighbors and density taken from the full spectrum.
StatsReport analyze_spectrum(
    const Spectrum& spectrum, const SampleMask& keep, double s_max = 5.0,
    int bins = 100, double bandwidth_factor = 4.5,
    std::vector<std::pair<std::string, std::string>> metadata = {});

// Sectioned key = value text document.
void write_stats_document(std::ostream& out, const StatsReport& report);

// CSV with the resolved-config header: bin_left,bin_right,midpoint,density.
void write_histogram_csv(
    std::ostream& out, const HistogramDensity& histogram,
    const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace dicke
