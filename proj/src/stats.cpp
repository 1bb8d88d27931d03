#include "dicke/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

namespace dicke {

namespace {

constexpr double pi = 3.141592653589793238462643383280;
constexpr double tie_tolerance = 1e-13;

struct TwoNearest {
    double d1 = std::numeric_limits<double>::infinity();
    Eigen::Index j1 = -1;
    double d2 = std::numeric_limits<double>::infinity();
    Eigen::Index j2 = -1;
};

// Nearest and second-nearest neighbor of every eigenvalue.  Distances are
// compared as squares first; the exact sqrt comparison with the 1e-13
// relative tie band only runs for genuine update candidates, which keeps the
// O(N^2) scan cheap.  Ascending j plus the strict "better" test means ties
// resolve to the smaller index.
std::vector<TwoNearest> two_nearest(const Eigen::VectorXcd& values) {
    const Eigen::Index n = values.size();
    std::vector<TwoNearest> result(static_cast<std::size_t>(n));
    const auto better = [](double candidate, double incumbent) {
        return candidate < incumbent * (1.0 - tie_tolerance);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        TwoNearest& near = result[static_cast<std::size_t>(i)];
        double d2_squared = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dist_squared = std::norm(values[j] - values[i]);
            if (dist_squared >= d2_squared * (1.0 + 4.0 * tie_tolerance))
                continue;
            const double dist = std::sqrt(dist_squared);
            if (better(dist, near.d1)) {
                near.d2 = near.d1;
                near.j2 = near.j1;
                near.d1 = dist;
                near.j1 = j;
                d2_squared = near.d2 * near.d2;
            } else if (better(dist, near.d2)) {
                near.d2 = dist;
                near.j2 = j;
                d2_squared = dist_squared;
            }
        }
    }
    return result;
}

}  // namespace

double degeneracy_threshold(const Spectrum& spectrum) {
    double extent = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
        extent = std::max(extent, std::abs(spectrum.eigenvalues[i]));
    return 1e-8 * std::max(1.0, extent);
}

Eigen::VectorXd nn_spacings(const Spectrum& spectrum) {
    if (spectrum.size() < 2)
        throw std::invalid_argument("nn_spacings needs at least two eigenvalues");
    const std::vector<TwoNearest> near = two_nearest(spectrum.eigenvalues);
    Eigen::VectorXd spacings(spectrum.size());
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
        spacings[i] = near[static_cast<std::size_t>(i)].d1;
    return spacings;
}

double kde_density(const Spectrum& spectrum, Complex point, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("kde_density: sigma must be positive");
    if (spectrum.size() == 0)
        throw std::invalid_argument("kde_density: empty spectrum");
    const double inv_two_sigma_squared = -0.5 / (sigma * sigma);
    const double weight = ((spectrum.eigenvalues.array() - point).abs2() *
                           inv_two_sigma_squared)
                              .exp()
                              .sum();
    return weight /
           (2.0 * pi * sigma * sigma * static_cast<double>(spectrum.size()));
}

namespace {

// Shared core: spacings and density from the full spectrum, samples from the
// kept subset (mask == nullptr keeps everything).
UnfoldedSpacings unfold_core(const Spectrum& spectrum, const SampleMask* mask,
                             double bandwidth_factor) {
    if (!(bandwidth_factor > 0.0))
        throw std::invalid_argument("unfold: bandwidth_factor must be positive");
    const Eigen::Index n = spectrum.size();
    if (mask && static_cast<Eigen::Index>(mask->size()) != n)
        throw std::invalid_argument("unfold: mask size differs from spectrum");

    const Eigen::VectorXd all_spacings = nn_spacings(spectrum);

    UnfoldedSpacings result;
    result.mean_raw = all_spacings.mean();
    if (result.mean_raw == 0.0)
        throw std::domain_error("unfold: all spacings vanish (fully degenerate spectrum)");
    result.sigma = bandwidth_factor * result.mean_raw;

    std::vector<Eigen::Index> kept;
    kept.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (!mask || (*mask)[static_cast<std::size_t>(i)]) kept.push_back(i);
    if (kept.size() < 2)
        throw std::invalid_argument("unfold: fewer than two eigenvalues kept");

    const double threshold = degeneracy_threshold(spectrum);
    result.raw.resize(static_cast<Eigen::Index>(kept.size()));
    Eigen::VectorXd weighted(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const Eigen::Index i = kept[k];
        result.raw[static_cast<Eigen::Index>(k)] = all_spacings[i];
        if (all_spacings[i] <= threshold) ++result.degenerate_count;
        weighted[static_cast<Eigen::Index>(k)] =
            all_spacings[i] *
            std::sqrt(kde_density(spectrum, spectrum.eigenvalues[i], result.sigma));
    }
    result.normalizer = weighted.mean();
    if (result.normalizer == 0.0)
        throw std::domain_error("unfold: kept spacings all vanish");
    result.unfolded = weighted / result.normalizer;
    return result;
}

}  // namespace

UnfoldedSpacings unfold(const Spectrum& spectrum, double bandwidth_factor) {
    return unfold_core(spectrum, nullptr, bandwidth_factor);
}

UnfoldedSpacings unfold(const Spectrum& spectrum, const SampleMask& keep,
                        double bandwidth_factor) {
    return unfold_core(spectrum, &keep, bandwidth_factor);
}

double pdf_2d_poisson(double s) {
    if (!(s >= 0.0))
        throw std::invalid_argument("pdf_2d_poisson: s must be non-negative");
    return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

double pdf_ginue_unscaled(double s, int truncation_order) {
    if (!(s >= 0.0))
        throw std::invalid_argument("pdf_ginue_unscaled: s must be non-negative");
    if (truncation_order < 1)
        throw std::invalid_argument("pdf_ginue_unscaled: order must be positive");
    if (s == 0.0) return 0.0;
    const double x = s * s;
    if (x > 700.0) return 0.0;  // exp(-x) underflows; the true value is far below tiny

    // Poisson pmf g_j = e^-x x^j / j! by upward recurrence; the tail
    // probability Q_j = Gamma(1+j, x) / j! is its running sum.  Then
    //   p_bar = [prod_{k>=1} Q_k] * [sum_{j>=1} 2 s g_j / Q_j],
    // every factor and term staying in [0, 1] x O(s).  Both the product and
    // the series saturate once Q_k reaches 1 to machine precision.
    double pmf = std::exp(-x);
    double tail = pmf;  // Q_0
    double product = 1.0;
    double series = 0.0;
    for (int k = 1; k <= truncation_order; ++k) {
        pmf *= x / static_cast<double>(k);
        tail += pmf;
        product *= tail;
        series += 2.0 * s * pmf / tail;
        if (tail >= 1.0 - 1e-16) break;
    }
    return product * series;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double fa, double m, double fm, double b, double fb,
                        double whole, double tolerance, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tolerance)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tolerance,
                            depth - 1) +
           adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tolerance,
                            depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tolerance, 48);
}

double compute_ginue_mean(int order) {
    // p_bar is negligible beyond s = 6: the product of Poisson tails there is
    // below 1e-100, so the truncated integral carries the full mean.
    return integrate([order](double s) { return s * pdf_ginue_unscaled(s, order); },
                     0.0, 6.0, 1e-12);
}

}  // namespace

double ginue_mean_spacing(int truncation_order) {
    if (truncation_order < 1)
        throw std::invalid_argument("ginue_mean_spacing: order must be positive");
    static const double cached = compute_ginue_mean(200);
    if (truncation_order == 200) return cached;
    return compute_ginue_mean(truncation_order);
}

double pdf_ginue(double s) {
    const double scale = ginue_mean_spacing();
    return scale * pdf_ginue_unscaled(scale * s);
}

HistogramDensity spacing_histogram(const UnfoldedSpacings& spacings,
                                   double s_max, int bins) {
    if (!(s_max > 0.0))
        throw std::invalid_argument("spacing_histogram: s_max must be positive");
    if (bins < 1)
        throw std::invalid_argument("spacing_histogram: bins must be positive");

    HistogramDensity histogram;
    histogram.edges = Eigen::VectorXd::LinSpaced(bins + 1, 0.0, s_max);
    histogram.density = Eigen::VectorXd::Zero(bins);
    histogram.sample_count = spacings.unfolded.size();

    const double width = s_max / static_cast<double>(bins);
    for (Eigen::Index i = 0; i < spacings.unfolded.size(); ++i) {
        const double s = spacings.unfolded[i];
        if (s > s_max) {
            ++histogram.overflow_count;
            continue;
        }
        // Right edge of the final bin is inclusive.
        const Eigen::Index bin = std::min<Eigen::Index>(
            static_cast<Eigen::Index>(s / width), bins - 1);
        histogram.density[bin] += 1.0;
    }
    if (histogram.sample_count > 0)
        histogram.density /=
            static_cast<double>(histogram.sample_count) * width;
    return histogram;
}

double eta_metric(const HistogramDensity& histogram) {
    if (histogram.bins() < 1)
        throw std::invalid_argument("eta_metric: empty histogram");
    const double width = histogram.bin_width();
    double numerator = 0.0;
    double denominator = 0.0;
    for (Eigen::Index b = 0; b < histogram.bins(); ++b) {
        const double s = histogram.midpoint(b);
        const double poisson = pdf_2d_poisson(s);
        const double ginue = pdf_ginue(s);
        numerator += (histogram.density[b] - poisson) *
                     (histogram.density[b] - poisson) * width;
        denominator += (ginue - poisson) * (ginue - poisson) * width;
    }
    if (denominator == 0.0)
        throw std::domain_error(
            "eta_metric: reference densities coincide on this grid");
    return numerator / denominator;
}

namespace {

std::vector<RatioSample> spacing_ratios_core(const Spectrum& spectrum,
                                             const SampleMask* mask) {
    if (spectrum.size() < 3)
        throw std::invalid_argument(
            "spacing_ratios needs at least three eigenvalues");
    if (mask && static_cast<Eigen::Index>(mask->size()) != spectrum.size())
        throw std::invalid_argument(
            "spacing_ratios: mask size differs from spectrum");
    const std::vector<TwoNearest> near = two_nearest(spectrum.eigenvalues);
    std::vector<RatioSample> samples;
    samples.reserve(static_cast<std::size_t>(spectrum.size()));
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        if (mask && !(*mask)[static_cast<std::size_t>(i)]) continue;
        const TwoNearest& pair = near[static_cast<std::size_t>(i)];
        if (pair.d2 == 0.0) continue;  // ratio undefined inside a degenerate cluster
        const Complex z =
            (spectrum.eigenvalues[pair.j1] - spectrum.eigenvalues[i]) /
            (spectrum.eigenvalues[pair.j2] - spectrum.eigenvalues[i]);
        samples.push_back({z, std::abs(z), std::arg(z)});
    }
    return samples;
}

}  // namespace

std::vector<RatioSample> spacing_ratios(const Spectrum& spectrum) {
    return spacing_ratios_core(spectrum, nullptr);
}

std::vector<RatioSample> spacing_ratios(const Spectrum& spectrum,
                                        const SampleMask& keep) {
    return spacing_ratios_core(spectrum, &keep);
}

RatioSummary ratio_summary(const std::vector<RatioSample>& samples) {
    if (samples.empty())
        throw std::invalid_argument("ratio_summary: no samples");
    RatioSummary summary;
    for (const RatioSample& sample : samples) {
        summary.mean_r += sample.r;
        summary.mean_cos_theta += std::cos(sample.theta);
    }
    summary.mean_r /= static_cast<double>(samples.size());
    summary.mean_cos_theta /= static_cast<double>(samples.size());
    return summary;
}

namespace {

StatsReport analyze_core(const Spectrum& spectrum, const SampleMask* mask,
                         double s_max, int bins, double bandwidth_factor,
                         std::vector<std::pair<std::string, std::string>> metadata) {
    StatsReport report;
    report.metadata = std::move(metadata);
    report.window = spectrum.window;
    report.spacings = unfold_core(spectrum, mask, bandwidth_factor);
    report.spectrum_size = report.spacings.raw.size();
    report.histogram = spacing_histogram(report.spacings, s_max, bins);
    report.eta = eta_metric(report.histogram);
    const std::vector<RatioSample> samples = spacing_ratios_core(spectrum, mask);
    report.ratios = ratio_summary(samples);
    report.ratio_count = static_cast<Eigen::Index>(samples.size());
    return report;
}

}  // namespace

StatsReport analyze_spectrum(
    const Spectrum& spectrum, double s_max, int bins, double bandwidth_factor,
    std::vector<std::pair<std::string, std::string>> metadata) {
    return analyze_core(spectrum, nullptr, s_max, bins, bandwidth_factor,
                        std::move(metadata));
}

StatsReport analyze_spectrum(
    const Spectrum& spectrum, const SampleMask& keep, double s_max, int bins,
    double bandwidth_factor,
    std::vector<std::pair<std::string, std::string>> metadata) {
    return analyze_core(spectrum, &keep, s_max, bins, bandwidth_factor,
                        std::move(metadata));
}

namespace {

void write_value(std::ostream& out, const char* key, double value) {
    char line[96];
    std::snprintf(line, sizeof line, "%s = %.17g\n", key, value);
    out << line;
}

}  // namespace

void write_stats_document(std::ostream& out, const StatsReport& report) {
    out << "[config]\n";
    for (const auto& [key, value] : report.metadata)
        out << key << " = " << value << '\n';
    out << "\n[spectrum]\n";
    out << "count = " << report.spectrum_size << '\n';
    if (report.window) {
        write_value(out, "window_re_min", report.window->first);
        write_value(out, "window_re_max", report.window->second);
    }
    out << "degenerate_spacings = " << report.spacings.degenerate_count << '\n';
    out << "\n[unfolding]\n";
    write_value(out, "mean_raw_spacing", report.spacings.mean_raw);
    write_value(out, "kde_sigma", report.spacings.sigma);
    write_value(out, "normalizer", report.spacings.normalizer);
    out << "\n[summary]\n";
    write_value(out, "eta", report.eta);
    write_value(out, "mean_r", report.ratios.mean_r);
    write_value(out, "mean_cos_theta", report.ratios.mean_cos_theta);
    write_value(out, "neg_mean_cos_theta", -report.ratios.mean_cos_theta);
    out << "ratio_count = " << report.ratio_count << '\n';
    write_value(out, "overflow_fraction", report.histogram.overflow_fraction());
    out << "\n[histogram]\n";
    out << "bins = " << report.histogram.bins() << '\n';
    char line[96];
    std::snprintf(line, sizeof line, "s_max = %.17g\n",
                  report.histogram.edges[report.histogram.edges.size() - 1]);
    out << line;
    out << "midpoints =";
    for (Eigen::Index b = 0; b < report.histogram.bins(); ++b) {
        std::snprintf(line, sizeof line, " %.17g", report.histogram.midpoint(b));
        out << line;
    }
    out << "\ndensity =";
    for (Eigen::Index b = 0; b < report.histogram.bins(); ++b) {
        std::snprintf(line, sizeof line, " %.17g", report.histogram.density[b]);
        out << line;
    }
    out << '\n';
}

void write_histogram_csv(
    std::ostream& out, const HistogramDensity& histogram,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
    for (const auto& [key, value] : metadata)
        out << "# " << key << " = " << value << '\n';
    out << "bin_left,bin_right,midpoint,density\n";
    char line[160];
    for (Eigen::Index b = 0; b < histogram.bins(); ++b) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n",
                      histogram.edges[b], histogram.edges[b + 1],
                      histogram.midpoint(b), histogram.density[b]);
        out << line;
    }
}

}  // namespace dicke
