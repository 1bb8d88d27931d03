#include "dicke/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace dicke {

namespace {

std::string format_double(double value) {
    char text[48];
    std::snprintf(text, sizeof text, "%.17g", value);
    return text;
}

std::string format_short(double value) {
    char text[48];
    std::snprintf(text, sizeof text, "%.12g", value);
    return text;
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out.good()) throw IoError("write failed for " + path.string());
}

}  // namespace

void validate(const RunConfig& config) {
    validate(config.model);
    if (!(config.window_alpha >= 0.0))
        throw std::invalid_argument("window_alpha must be non-negative");
    if (!(config.stats.s_max > 0.0))
        throw std::invalid_argument("s_max must be positive");
    if (config.stats.bins < 1)
        throw std::invalid_argument("bins must be positive");
    if (!(config.stats.bandwidth_factor > 0.0))
        throw std::invalid_argument("bandwidth_factor must be positive");
    if (config.workers < 1)
        throw std::invalid_argument("workers must be positive");
    for (double lambda : config.sweep)
        if (!(lambda >= 0.0))
            throw std::invalid_argument("sweep lambda values must be non-negative");
    for (int cutoff : config.convergence)
        if (cutoff < 1)
            throw std::invalid_argument("convergence cutoffs must be positive");
}

std::vector<std::pair<std::string, std::string>> resolved_metadata(
    const RunConfig& config) {
    return {{"omega_c", format_double(config.model.omega_c)},
            {"omega_s", format_double(config.model.omega_s)},
            {"kappa", format_double(config.model.kappa)},
            {"lambda", format_double(config.model.lambda)},
            {"spin_count", std::to_string(config.model.spin_count)},
            {"n_cutoff", std::to_string(config.model.n_cutoff)},
            {"sector", to_string(config.sector)},
            {"window_alpha", format_double(config.window_alpha)},
            {"s_max", format_double(config.stats.s_max)},
            {"bins", std::to_string(config.stats.bins)},
            {"bandwidth_factor", format_double(config.stats.bandwidth_factor)},
            {"include_steady_state",
             config.stats.include_steady_state ? "true" : "false"},
            {"seed", std::to_string(config.seed)}};
}

namespace {

// Drop the eigenvalue nearest zero if it sits below the degeneracy scale;
// used when the steady state should not enter the statistics.
Spectrum drop_steady_state(const Spectrum& spectrum) {
    if (spectrum.size() == 0) return spectrum;
    Eigen::Index closest = 0;
    double smallest = std::abs(spectrum.eigenvalues[0]);
    for (Eigen::Index i = 1; i < spectrum.size(); ++i) {
        const double modulus = std::abs(spectrum.eigenvalues[i]);
        if (modulus < smallest) {
            smallest = modulus;
            closest = i;
        }
    }
    if (smallest > degeneracy_threshold(spectrum)) {
        std::cerr << "warning: no eigenvalue at zero; steady state not removed\n";
        return spectrum;
    }
    Spectrum result = spectrum;
    Eigen::VectorXcd kept(spectrum.size() - 1);
    kept.head(closest) = spectrum.eigenvalues.head(closest);
    kept.tail(spectrum.size() - closest - 1) =
        spectrum.eigenvalues.tail(spectrum.size() - closest - 1);
    result.eigenvalues = std::move(kept);
    return result;
}

PointResult run_point_into(const RunConfig& config,
                           const std::filesystem::path& dir) {
    validate(config);
    std::filesystem::create_directories(dir);
    const auto metadata = resolved_metadata(config);

    const AssemblyOptions assembly{20000, config.force_large};
    const LiouvillianMatrix full = assemble_liouvillian(config.model, assembly);
    if (!config.dump_liouvillian.empty())
        write_file(config.dump_liouvillian, [&](std::ostream& out) {
            for (const auto& [key, value] : metadata)
                out << "# " << key << " = " << value << '\n';
            write_sparse_matrix(out, full.matrix);
        });

    const LiouvillianMatrix block =
        (config.sector == Sector::full) ? full : project_sector(full, config.sector);
    // The exact real similarity form keeps the computed spectrum closed under
    // conjugation and halves the eigensolver's arithmetic.
    const Eigen::MatrixXd dense = to_dense(conjugation_real_form(block), assembly);

    Spectrum spectrum = eigenvalues(dense);
    spectrum.metadata = metadata;
    Spectrum windowed = window_filter(spectrum, config.model, config.window_alpha);
    if (!config.stats.include_steady_state)
        windowed = drop_steady_state(windowed);

    write_file(dir / "spectrum.txt",
               [&](std::ostream& out) { write_spectrum(out, windowed); });

    if (windowed.size() == 0)
        throw std::invalid_argument(
            "spectral window retained no eigenvalues; widen window_alpha");
    if (windowed.size() < 3)
        throw std::invalid_argument(
            "spectral window retained fewer than three eigenvalues; "
            "statistics are undefined");

    const StatsReport report = analyze_spectrum(
        windowed, config.stats.s_max, config.stats.bins,
        config.stats.bandwidth_factor, metadata);
    if (report.spacings.degenerate_count > 0)
        std::cerr << "warning: " << report.spacings.degenerate_count
                  << " degenerate spacings at lambda = "
                  << format_short(config.model.lambda) << '\n';

    write_file(dir / "stats.txt",
               [&](std::ostream& out) { write_stats_document(out, report); });
    write_file(dir / "histogram.csv", [&](std::ostream& out) {
        write_histogram_csv(out, report.histogram, metadata);
    });

    PointResult result;
    result.lambda = config.model.lambda;
    result.n_cutoff = config.model.n_cutoff;
    result.spectrum_size = windowed.size();
    result.degenerate_count = report.spacings.degenerate_count;
    result.eta = report.eta;
    result.ratios = report.ratios;
    return result;
}

}  // namespace

PointResult run_point(const RunConfig& config) {
    return run_point_into(config, config.output_dir);
}

namespace {

// Run one closure per item on a small worker pool.  Results and errors are
// slotted by index, so the outcome is independent of scheduling.
template <typename Work>
void run_indexed(int workers, Eigen::Index count, const Work& work) {
    if (workers <= 1 || count <= 1) {
        for (Eigen::Index i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<Eigen::Index> next{0};
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<Eigen::Index>(count, static_cast<Eigen::Index>(workers)));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t)
        pool.emplace_back([&] {
            for (Eigen::Index i = next.fetch_add(1); i < count;
                 i = next.fetch_add(1))
                work(i);
        });
    for (std::thread& thread : pool) thread.join();
}

}  // namespace

std::vector<PointResult> run_sweep(const RunConfig& config) {
    validate(config);
    if (config.sweep.empty())
        throw std::invalid_argument("run_sweep: empty lambda list");
    std::filesystem::create_directories(config.output_dir);

    const Eigen::Index count = static_cast<Eigen::Index>(config.sweep.size());
    std::vector<PointResult> results(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

    run_indexed(config.workers, count, [&](Eigen::Index i) {
        RunConfig point = config;
        point.model.lambda = config.sweep[static_cast<std::size_t>(i)];
        point.sweep.clear();
        point.dump_liouvillian.clear();
        const std::filesystem::path dir =
            config.output_dir / ("lambda_" + format_short(point.model.lambda));
        try {
            results[static_cast<std::size_t>(i)] = run_point_into(point, dir);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    });

    write_file(config.output_dir / "sweep.csv", [&](std::ostream& out) {
        for (const auto& [key, value] : resolved_metadata(config))
            if (key != "lambda") out << "# " << key << " = " << value << '\n';
        out << "lambda,eta,mean_r,mean_cos_theta,neg_mean_cos_theta,"
               "n_eigenvalues,degeneracies\n";
        for (Eigen::Index i = 0; i < count; ++i) {
            if (errors[static_cast<std::size_t>(i)]) continue;
            const PointResult& row = results[static_cast<std::size_t>(i)];
            out << format_double(row.lambda) << ',' << format_double(row.eta)
                << ',' << format_double(row.ratios.mean_r) << ','
                << format_double(row.ratios.mean_cos_theta) << ','
                << format_double(-row.ratios.mean_cos_theta) << ','
                << row.spectrum_size << ',' << row.degenerate_count << '\n';
        }
    });

    for (Eigen::Index i = 0; i < count; ++i)
        if (errors[static_cast<std::size_t>(i)])
            std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    return results;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config) {
    validate(config);
    if (config.convergence.empty())
        throw std::invalid_argument("run_convergence: empty n_cutoff list");
    std::filesystem::create_directories(config.output_dir);

    const Eigen::Index count =
        static_cast<Eigen::Index>(config.convergence.size());
    std::vector<ConvergenceRow> rows(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

    run_indexed(config.workers, count, [&](Eigen::Index i) {
        RunConfig point = config;
        point.model.n_cutoff = config.convergence[static_cast<std::size_t>(i)];
        point.convergence.clear();
        point.dump_liouvillian.clear();
        const std::filesystem::path dir =
            config.output_dir /
            ("ncutoff_" + std::to_string(point.model.n_cutoff));
        try {
            const PointResult result = run_point_into(point, dir);
            rows[static_cast<std::size_t>(i)] = {
                result.n_cutoff, result.eta, result.ratios.mean_r,
                result.ratios.mean_cos_theta};
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    });

    write_file(config.output_dir / "convergence.csv", [&](std::ostream& out) {
        for (const auto& [key, value] : resolved_metadata(config))
            if (key != "n_cutoff") out << "# " << key << " = " << value << '\n';
        out << "n_cutoff,eta,mean_r,mean_cos_theta,d_eta,d_mean_r,"
               "d_mean_cos_theta\n";
        const ConvergenceRow* previous = nullptr;
        for (Eigen::Index i = 0; i < count; ++i) {
            if (errors[static_cast<std::size_t>(i)]) continue;
            const ConvergenceRow& row = rows[static_cast<std::size_t>(i)];
            out << row.n_cutoff << ',' << format_double(row.eta) << ','
                << format_double(row.mean_r) << ','
                << format_double(row.mean_cos_theta) << ',';
            if (previous) {
                out << format_double(row.eta - previous->eta) << ','
                    << format_double(row.mean_r - previous->mean_r) << ','
                    << format_double(row.mean_cos_theta -
                                     previous->mean_cos_theta);
            } else {
                out << ",,";
            }
            out << '\n';
            previous = &row;
        }
    });

    for (Eigen::Index i = 0; i < count; ++i)
        if (errors[static_cast<std::size_t>(i)])
            std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    return rows;
}

}  // namespace dicke
