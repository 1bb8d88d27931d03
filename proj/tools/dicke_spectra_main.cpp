// dicke-spectra: Liouvillian spectra and spacing statistics of the open Dicke
// model.  Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 I/O.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dicke/pipeline.hpp"

namespace {

void print_point(const dicke::PointResult& row) {
    std::printf(
        "lambda = %-10.6g eta = %-10.6g <r> = %-10.6g -<cos t> = %-10.6g "
        "N = %lld degeneracies = %lld\n",
        row.lambda, row.eta, row.ratios.mean_r, -row.ratios.mean_cos_theta,
        static_cast<long long>(row.spectrum_size),
        static_cast<long long>(row.degenerate_count));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Spectra and universal spacing statistics of the dissipative Dicke "
        "Liouvillian"};
    app.option_defaults()->always_capture_default();

    dicke::RunConfig config;
    std::string sector_name = "even";

    app.add_option("--omega-c", config.model.omega_c, "cavity frequency");
    app.add_option("--omega-s", config.model.omega_s, "spin level splitting");
    app.add_option("--kappa", config.model.kappa, "cavity loss rate");
    app.add_option("--lambda", config.model.lambda, "cavity-spin coupling");
    app.add_option("--spin-count", config.model.spin_count,
                   "number of two-level emitters (spin S = spin-count/2)");
    app.add_option("--n-cutoff", config.model.n_cutoff,
                   "cavity Fock space cutoff");
    app.add_option("--sector", sector_name, "parity sector: even, odd, or full")
        ->check(CLI::IsMember({"even", "odd", "full"}));
    app.add_option("--window-alpha", config.window_alpha,
                   "spectral window keeps Re E in [-alpha*kappa*n_cutoff, 0]");
    app.add_option("--sweep", config.sweep,
                   "comma-separated lambda values; one subdirectory each")
        ->delimiter(',');
    app.add_option("--convergence", config.convergence,
                   "comma-separated n_cutoff values for a convergence study")
        ->delimiter(',');
    app.add_option("--s-max", config.stats.s_max, "histogram upper edge");
    app.add_option("--bins", config.stats.bins, "histogram bin count");
    app.add_option("--bandwidth-factor", config.stats.bandwidth_factor,
                   "KDE bandwidth in units of the mean raw spacing");
    app.add_flag("--include-steady-state,!--drop-steady-state",
                 config.stats.include_steady_state,
                 "keep the zero eigenvalue in the statistics (on by default)");
    app.add_option("--seed", config.seed, "seed recorded in file headers");
    app.add_option("--workers", config.workers,
                   "worker threads for sweeps and convergence studies");
    app.add_flag("--force-large", config.force_large,
                 "override the dense dimension guard");
    app.add_option("--out", config.output_dir, "output directory");
    app.add_option("--dump-liouvillian", config.dump_liouvillian,
                   "also write the assembled sparse Liouvillian to this file");
    app.set_config("--config", "",
                   "key=value file with long option names; command line wins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    config.sector = sector_name == "even"  ? dicke::Sector::even
                    : sector_name == "odd" ? dicke::Sector::odd
                                           : dicke::Sector::full;

    try {
        if (!config.convergence.empty() && !config.sweep.empty())
            throw std::invalid_argument(
                "--sweep and --convergence are mutually exclusive");
        if (!config.convergence.empty()) {
            for (const dicke::ConvergenceRow& row :
                 dicke::run_convergence(config))
                std::printf(
                    "n_cutoff = %-6d eta = %-10.6g <r> = %-10.6g "
                    "-<cos t> = %-10.6g\n",
                    row.n_cutoff, row.eta, row.mean_r, -row.mean_cos_theta);
        } else if (!config.sweep.empty()) {
            for (const dicke::PointResult& row : dicke::run_sweep(config))
                print_point(row);
        } else {
            print_point(dicke::run_point(config));
        }
        return 0;
    } catch (const dicke::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const dicke::EigensolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
