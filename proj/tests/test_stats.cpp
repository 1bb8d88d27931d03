#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "dicke/prng.hpp"
#include "dicke/stats.hpp"

using namespace dicke;

namespace {

Spectrum from_values(std::initializer_list<Complex> values) {
    Spectrum spectrum;
    spectrum.eigenvalues.resize(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex value : values) spectrum.eigenvalues[i++] = value;
    return spectrum;
}

// Composite Simpson on a uniform grid; the tests integrate reference
// densities with it so the check does not reuse the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    const double h = (b - a) / (2.0 * panels);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i)
        sum += f(a + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("nearest-neighbor spacings on a unit grid") {
    std::vector<Complex> points;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) points.emplace_back(x, y);
    Spectrum spectrum;
    spectrum.eigenvalues =
        Eigen::Map<const Eigen::VectorXcd>(points.data(), 9);
    const Eigen::VectorXd spacings = nn_spacings(spectrum);
    for (Eigen::Index i = 0; i < 9; ++i) CHECK(spacings[i] == 1.0);
}

TEST_CASE("spacing ratio of the documented three-point configuration") {
    // E = 0 has neighbors 1 and i at equal distance; the earlier index wins
    // the nearest slot, so z = (1 - 0) / (i - 0) = -i.
    const Spectrum spectrum = from_values({Complex(0.0), Complex(1.0), Complex(0.0, 1.0)});
    const std::vector<RatioSample> samples = spacing_ratios(spectrum);
    REQUIRE(samples.size() == 3);
    CHECK(std::abs(samples[0].z - Complex(0.0, -1.0)) < 1e-15);
    CHECK(samples[0].r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(samples[0].theta ==
          doctest::Approx(-1.5707963267948966).epsilon(1e-15));
}

TEST_CASE("ratio magnitudes never exceed one") {
    Philox4x32 rng(11);
    std::vector<Complex> points;
    for (int i = 0; i < 400; ++i)
        points.emplace_back(20.0 * rng.next_double(), 20.0 * rng.next_double());
    Spectrum spectrum;
    spectrum.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        points.data(), static_cast<Eigen::Index>(points.size()));
    for (const RatioSample& sample : spacing_ratios(spectrum)) {
        CHECK(sample.r <= 1.0 + 1e-12);
        CHECK(sample.theta <= 3.14159265358979324);
        CHECK(sample.theta > -3.14159265358979324);
    }
}

TEST_CASE("degenerate clusters are dropped from ratios but kept in spacings") {
    const Spectrum spectrum =
        from_values({Complex(0.0), Complex(0.0), Complex(0.0), Complex(1.0)});
    const Eigen::VectorXd spacings = nn_spacings(spectrum);
    CHECK(spacings[0] == 0.0);
    CHECK(spacings[3] == 1.0);
    const std::vector<RatioSample> samples = spacing_ratios(spectrum);
    // The three coincident points have both neighbors at distance zero.
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].r == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(degeneracy_threshold(spectrum) == 1e-8);
}

TEST_CASE("unfolding a uniform grid is flat away from the edges") {
    std::vector<Complex> points;
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y) points.emplace_back(x, y);
    Spectrum spectrum;
    spectrum.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        points.data(), static_cast<Eigen::Index>(points.size()));

    const UnfoldedSpacings result = unfold(spectrum);
    CHECK(result.mean_raw == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.sigma == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(std::abs(result.unfolded.mean() - 1.0) < 1e-12);
    CHECK(result.degenerate_count == 0);

    // Mirror-image interior points see mirror-image density estimates.
    const auto at = [&](int x, int y) { return x * 32 + y; };
    CHECK(result.unfolded[at(13, 13)] ==
          doctest::Approx(result.unfolded[at(18, 18)]).epsilon(1e-10));
    CHECK(result.unfolded[at(15, 12)] ==
          doctest::Approx(result.unfolded[at(16, 19)]).epsilon(1e-10));
    // Deep-interior points unfold to a common local scale; the global mean
    // sits below it because the edge bands, a large fraction of a 32 x 32
    // grid at this bandwidth, pull the normalizer down.
    CHECK(result.unfolded[at(15, 15)] ==
          doctest::Approx(result.unfolded[at(12, 14)]).epsilon(5e-3));
    CHECK(result.unfolded[at(15, 15)] > 1.0);
    CHECK(std::abs(result.unfolded[at(15, 15)] - 1.0) < 0.25);
}

TEST_CASE("masked unfolding sees no density cliff at the cut") {
    std::vector<Complex> points;
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y) points.emplace_back(x, y);
    Spectrum spectrum;
    spectrum.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        points.data(), static_cast<Eigen::Index>(points.size()));

    // Keep only points at least 10 sites from every edge.  The density the
    // kept points see is the full grid's, so their unfolded spacings are all
    // equal to a percent, unlike the truncated-spectrum case above where the
    // global mean is dragged by the edge bands.
    SampleMask keep(points.size(), 0);
    Eigen::Index kept_count = 0;
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y)
            if (x >= 10 && x < 22 && y >= 10 && y < 22) {
                keep[static_cast<std::size_t>(x * 32 + y)] = 1;
                ++kept_count;
            }

    const UnfoldedSpacings result = unfold(spectrum, keep);
    CHECK(result.unfolded.size() == kept_count);
    CHECK(result.raw.size() == kept_count);
    CHECK(result.mean_raw == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(result.unfolded.mean() - 1.0) < 1e-12);
    CHECK((result.unfolded.array() - 1.0).abs().maxCoeff() < 0.03);

    SampleMask wrong_size(points.size() - 1, 1);
    CHECK_THROWS_AS(unfold(spectrum, wrong_size), std::invalid_argument);
    SampleMask too_few(points.size(), 0);
    too_few[0] = 1;
    CHECK_THROWS_AS(unfold(spectrum, too_few), std::invalid_argument);
}

TEST_CASE("masked ratios take neighbors from the full spectrum") {
    const Spectrum spectrum =
        from_values({Complex(0.0), Complex(1.0), Complex(2.2, 0.0)});
    SampleMask keep = {1, 0, 0};
    const std::vector<RatioSample> masked = spacing_ratios(spectrum, keep);
    REQUIRE(masked.size() == 1);
    // For E = 0 the neighbors are 1 and 2.2 even though both are masked out
    // as sample centers.
    CHECK(masked[0].z.real() == doctest::Approx(1.0 / 2.2).epsilon(1e-15));
    CHECK(masked[0].z.imag() == 0.0);

    const std::vector<RatioSample> full = spacing_ratios(spectrum);
    REQUIRE(full.size() == 3);
    CHECK(std::abs(full[0].z - masked[0].z) == 0.0);
}

TEST_CASE("unfolding rejects fully degenerate spectra") {
    const Spectrum spectrum =
        from_values({Complex(2.0, 1.0), Complex(2.0, 1.0), Complex(2.0, 1.0)});
    CHECK_THROWS_AS(unfold(spectrum), std::domain_error);
}

TEST_CASE("kde density integrates to one and is exact for a single point") {
    const Spectrum one = from_values({Complex(0.5, -0.25)});
    const double sigma = 0.3;
    // Peak value of a single normalized Gaussian.
    CHECK(kde_density(one, Complex(0.5, -0.25), sigma) ==
          doctest::Approx(1.0 / (2.0 * 3.14159265358979324 * sigma * sigma))
              .epsilon(1e-14));

    const Spectrum pair = from_values({Complex(0.0), Complex(1.0)});
    // Radial shells around both points; integrates to 1 over the plane.
    double integral = 0.0;
    const double step = 0.05;
    for (double x = -8.0; x < 9.0; x += step)
        for (double y = -8.0; y < 8.5; y += step)
            integral += kde_density(pair, Complex(x, y), 0.4) * step * step;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("2D Poisson density has unit mass and unit mean") {
    CHECK(pdf_2d_poisson(0.0) == 0.0);
    CHECK(pdf_2d_poisson(1.0) ==
          doctest::Approx(0.5 * 3.14159265358979324 *
                          std::exp(-0.25 * 3.14159265358979324))
              .epsilon(1e-15));
    const double mass =
        simpson([](double s) { return pdf_2d_poisson(s); }, 0.0, 12.0, 6000);
    const double mean =
        simpson([](double s) { return s * pdf_2d_poisson(s); }, 0.0, 12.0, 6000);
    CHECK(std::abs(mass - 1.0) < 1e-12);
    CHECK(std::abs(mean - 1.0) < 1e-12);
    CHECK_THROWS_AS(pdf_2d_poisson(-0.1), std::invalid_argument);
}

TEST_CASE("GinUE density: cubic onset, unit mass, stable truncation") {
    // Small-s behavior p_bar ~ 2 s^3.
    const double r1 = pdf_ginue_unscaled(1e-2) / (2.0 * 1e-6);
    const double r2 = pdf_ginue_unscaled(1e-3) / (2.0 * 1e-9);
    CHECK(std::abs(r1 - 1.0) < 0.01);
    CHECK(std::abs(r2 - 1.0) < 1e-4);

    const double mass =
        simpson([](double s) { return pdf_ginue_unscaled(s); }, 0.0, 6.0, 6000);
    CHECK(std::abs(mass - 1.0) < 1e-9);

    // Doubling the truncation order must not move the curve.
    for (double s = 0.05; s <= 5.0; s += 0.05) {
        const double base = pdf_ginue_unscaled(s, 200);
        const double doubled = pdf_ginue_unscaled(s, 400);
        CHECK(std::abs(doubled - base) <=
              1e-8 * std::max(base, 1e-300));
    }

    // Unimodal with the mode near the mean.
    CHECK(pdf_ginue_unscaled(0.2) < pdf_ginue_unscaled(1.1));
    CHECK(pdf_ginue_unscaled(1.1) > pdf_ginue_unscaled(2.5));
}

TEST_CASE("rescaled GinUE density has unit mass and unit mean") {
    const double mean_raw = ginue_mean_spacing();
    const double check_mean = simpson(
        [](double s) { return s * pdf_ginue_unscaled(s); }, 0.0, 6.0, 6000);
    CHECK(mean_raw == doctest::Approx(check_mean).epsilon(1e-9));

    const double mass =
        simpson([](double s) { return pdf_ginue(s); }, 0.0, 6.0, 6000);
    const double mean =
        simpson([](double s) { return s * pdf_ginue(s); }, 0.0, 6.0, 6000);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    CHECK(std::abs(mean - 1.0) < 1e-6);
}

TEST_CASE("histogram normalization and overflow accounting") {
    UnfoldedSpacings spacings;
    spacings.unfolded.resize(5);
    spacings.unfolded << 0.1, 0.25, 4.999, 5.0, 7.0;
    const HistogramDensity histogram = spacing_histogram(spacings, 5.0, 10);
    CHECK(histogram.bins() == 10);
    CHECK(histogram.bin_width() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(histogram.sample_count == 5);
    CHECK(histogram.overflow_count == 1);
    CHECK(histogram.density[0] == doctest::Approx(2.0 / (5.0 * 0.5)));
    CHECK(histogram.density[9] == doctest::Approx(2.0 / (5.0 * 0.5)));

    double mass = 0.0;
    for (Eigen::Index b = 0; b < histogram.bins(); ++b)
        mass += histogram.density[b] * histogram.bin_width();
    CHECK(mass + histogram.overflow_fraction() ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(spacing_histogram(spacings, -1.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(spacing_histogram(spacings, 5.0, 0), std::invalid_argument);
}

TEST_CASE("eta metric is pinned at the reference densities") {
    HistogramDensity histogram;
    const int bins = 100;
    histogram.edges = Eigen::VectorXd::LinSpaced(bins + 1, 0.0, 5.0);
    histogram.density.resize(bins);
    histogram.sample_count = 1;

    for (Eigen::Index b = 0; b < bins; ++b)
        histogram.density[b] = pdf_2d_poisson(histogram.midpoint(b));
    CHECK(eta_metric(histogram) == 0.0);

    for (Eigen::Index b = 0; b < bins; ++b)
        histogram.density[b] = pdf_ginue(histogram.midpoint(b));
    CHECK(eta_metric(histogram) == 1.0);

    // A halfway mixture lands at 1/4 by the quadratic form.
    for (Eigen::Index b = 0; b < bins; ++b)
        histogram.density[b] = 0.5 * (pdf_2d_poisson(histogram.midpoint(b)) +
                                      pdf_ginue(histogram.midpoint(b)));
    CHECK(eta_metric(histogram) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("ratio summary averages") {
    std::vector<RatioSample> samples = {
        {Complex(1.0, 0.0), 1.0, 0.0},
        {Complex(0.0, 0.5), 0.5, 1.5707963267948966},
    };
    const RatioSummary summary = ratio_summary(samples);
    CHECK(summary.mean_r == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(summary.mean_cos_theta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ratio_summary({}), std::invalid_argument);
}

TEST_CASE("stats document and histogram csv are well formed") {
    Philox4x32 rng(3);
    std::vector<Complex> points;
    for (int i = 0; i < 500; ++i)
        points.emplace_back(22.0 * rng.next_double(), 22.0 * rng.next_double());
    Spectrum spectrum;
    spectrum.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        points.data(), static_cast<Eigen::Index>(points.size()));
    spectrum.window = {{-10.0, 0.0}};

    const StatsReport report =
        analyze_spectrum(spectrum, 5.0, 50, 4.5, {{"lambda", "0.4"}});
    CHECK(report.spectrum_size == 500);
    CHECK(report.ratio_count == 500);

    std::ostringstream doc;
    write_stats_document(doc, report);
    const std::string text = doc.str();
    CHECK(text.find("[config]") != std::string::npos);
    CHECK(text.find("lambda = 0.4") != std::string::npos);
    CHECK(text.find("[summary]") != std::string::npos);
    CHECK(text.find("eta = ") != std::string::npos);
    CHECK(text.find("mean_r = ") != std::string::npos);
    CHECK(text.find("[histogram]") != std::string::npos);

    std::ostringstream csv;
    write_histogram_csv(csv, report.histogram, report.metadata);
    std::istringstream lines(csv.str());
    std::string line;
    Eigen::Index data_lines = 0;
    bool header_seen = false;
    while (std::getline(lines, line)) {
        if (line.rfind('#', 0) == 0) continue;
        if (!header_seen) {
            CHECK(line == "bin_left,bin_right,midpoint,density");
            header_seen = true;
            continue;
        }
        ++data_lines;
    }
    CHECK(data_lines == 50);
}
