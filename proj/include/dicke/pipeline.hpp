#pragma once
// End-to-end runs: assemble, project, diagonalize, window, analyze, and emit
// files.  One directory per spectral point; sweeps and cutoff-convergence
// studies add a summary CSV on top.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/ensembles.hpp"
#include "dicke/stats.hpp"

namespace dicke {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StatsConfig {
    double s_max = 5.0;
    int bins = 100;
    double bandwidth_factor = 4.5;
    bool include_steady_state = true;  // keep the E = 0 eigenvalue
};

struct RunConfig {
    ModelParams model;
    Sector sector = Sector::even;
    double window_alpha = 2.0 / 3.0;
    StatsConfig stats;
    std::vector<double> sweep;        // lambda values; empty = single point
    std::vector<int> convergence;     // n_cutoff values; empty = no study
    std::uint64_t seed = 1;
    int workers = 1;
    bool force_large = false;         // override the dense dimension guard
    std::filesystem::path output_dir = "out";
    std::filesystem::path dump_liouvillian;  // empty = no sparse dump
};

void validate(const RunConfig& config);

// Resolved-config header lines embedded in every emitted file.  Paths and
// worker count are deliberately excluded: identical physics must give
// identical bytes regardless of where and how the run executed.
std::vector<std::pair<std::string, std::string>> resolved_metadata(
    const RunConfig& config);

struct PointResult {
    double lambda = 0.0;
    int n_cutoff = 0;
    Eigen::Index spectrum_size = 0;  // eigenvalues entering the statistics
    Eigen::Index degenerate_count = 0;
    double eta = 0.0;
    RatioSummary ratios;
};

// Single spectral point into config.output_dir: spectrum.txt, stats.txt,
// histogram.csv, plus the optional sparse Liouvillian dump.
PointResult run_point(const RunConfig& config);

// One subdirectory lambda_<value> per sweep entry plus sweep.csv.  Failed
// points do not abort the remaining ones; the first failure is rethrown after
// the summary is written.
std::vector<PointResult> run_sweep(const RunConfig& config);

struct ConvergenceRow {
    int n_cutoff = 0;
    double eta = 0.0;
    double mean_r = 0.0;
    double mean_cos_theta = 0.0;
};

// One subdirectory ncutoff_<value> per entry plus convergence.csv with
// successive-difference columns.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config);

}  // namespace dicke
