// fadingrate: rate-bound sweeps and verification suites.
//   fadingrate sweep  [--config FILE] [flags]   -> CSV
//   fadingrate verify --suite NAME [flags]      -> report
// Exit codes: 0 ok, 1 verification failure, 2 usage or I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fadingrate/sweep.hpp"
#include "fadingrate/verify.hpp"

using namespace fadingrate;

namespace {

constexpr int kUsageError = 2;

bool emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    out.close();
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Achievable-rate bounds for stationary Rayleigh flat fading with pilot-aided estimation"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Evaluate rate bounds over an f_d x SNR grid and write CSV");
    std::string config_path, psd, fd_list, snr_list, metrics, pilot_mode, sweep_out;
    double rolloff = 0.5, fd_min = 0.0, fd_max = 0.0;
    int fd_points = 0, L = 0;
    bool fd_log = true;
    std::uint64_t sweep_seed = 1;
    sweep->add_option("--config", config_path, "key = value file; flags override it");
    sweep->add_option("--psd", psd, "rect | raised_cosine");
    sweep->add_option("--rolloff", rolloff, "raised cosine roll-off in (0, 1]");
    sweep->add_option("--fd", fd_list, "explicit comma-separated f_d values (replaces the grid)");
    sweep->add_option("--fd-min", fd_min, "grid lower end (default 1e-3)");
    sweep->add_option("--fd-max", fd_max, "grid upper end (default 0.25)");
    sweep->add_option("--fd-points", fd_points, "grid points (default 40)");
    sweep->add_flag("--fd-log,!--fd-linear", fd_log, "log-spaced grid (default) or linear");
    sweep->add_option("--snr-db", snr_list, "comma-separated SNRs in dB (default 0,6,12)");
    sweep->add_option("--metrics", metrics,
                      "comma-separated subset of sep_lower,sep_upper,joint_lower,iid_pg_lower,iid_pg_upper,coherent");
    sweep->add_option("--pilot-mode", pilot_mode, "fixed | sep_optimal (default) | joint_optimal");
    sweep->add_option("--L", L, "pilot spacing for --pilot-mode fixed");
    sweep->add_option("--seed", sweep_seed, "recorded for reproducibility; the sweep itself is deterministic");
    sweep->add_option("--out", sweep_out, "CSV path (default standard output)");

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification suite and write a report");
    std::string suite = "all", verify_out;
    std::uint64_t verify_seed = 1;
    int trials = 0;
    double var_tol = 0.0;
    verify->add_option("--suite,suite", suite, "spectra | szego | concavity | all");
    verify->add_option("--seed", verify_seed, "64-bit seed (default 1)");
    verify->add_option("--out", verify_out, "report path (default standard output)");
    verify->add_option("--trials", trials, "Monte Carlo trials for the spectra suite (default 200)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--var-tol", var_tol, "relative error-variance tolerance (default 0.03)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    if (*sweep) {
        SweepSpec spec;
        try {
            if (!config_path.empty()) spec = parse_config(config_path);
            if (sweep->count("--psd")) spec.psd = psd_kind_from_name(psd);
            if (sweep->count("--rolloff")) spec.rolloff = rolloff;
            if (sweep->count("--fd")) spec.fd_list = parse_double_list(fd_list);
            if (sweep->count("--fd-min")) spec.grid.min = fd_min;
            if (sweep->count("--fd-max")) spec.grid.max = fd_max;
            if (sweep->count("--fd-points")) spec.grid.points = fd_points;
            if (sweep->count("--fd-log") || sweep->count("--fd-linear")) spec.grid.log = fd_log;
            if (sweep->count("--snr-db")) spec.snr_db = parse_double_list(snr_list);
            if (sweep->count("--metrics")) spec.metrics = parse_metric_list(metrics);
            if (sweep->count("--pilot-mode")) spec.pilot_mode = pilot_mode_from_name(pilot_mode);
            if (sweep->count("--L")) {
                spec.L = L;
                if (!sweep->count("--pilot-mode")) spec.pilot_mode = PilotMode::FixedL;
            }
            if (sweep->count("--seed")) spec.seed = sweep_seed;
            if (sweep->count("--out")) spec.out_path = sweep_out;
            spec.validate();
        } catch (const std::exception& e) {
            std::cerr << "fadingrate sweep: " << e.what() << '\n';
            return kUsageError;
        }

        SweepResult result;
        try {
            result = run_sweep(spec);
        } catch (const std::exception& e) {
            std::cerr << "fadingrate sweep: " << e.what() << '\n';
            return kUsageError;
        }
        for (const auto& w : result.warnings) std::cerr << w << '\n';
        std::ostringstream csv;
        write_csv(csv, result.rows);
        if (!emit(spec.out_path, csv.str())) {
            std::cerr << "fadingrate sweep: cannot write '" << spec.out_path << "'\n";
            return kUsageError;
        }
        return 0;
    }

    VerifyOptions options;
    try {
        options.suite = suite_from_name(suite);
    } catch (const std::exception& e) {
        std::cerr << "fadingrate verify: " << e.what() << '\n';
        return kUsageError;
    }
    options.seed = verify_seed;
    if (verify->count("--trials")) options.trials = trials;
    if (verify->count("--var-tol")) options.variance_tolerance = var_tol;

    VerifyReport report;
    try {
        report = run_verify(options);
    } catch (const std::exception& e) {
        std::cerr << "fadingrate verify: " << e.what() << '\n';
        return kUsageError;
    }
    std::ostringstream text;
    write_report(text, report);
    if (!emit(verify_out, text.str())) {
        std::cerr << "fadingrate verify: cannot write '" << verify_out << "'\n";
        return kUsageError;
    }
    if (!verify_out.empty() && verify_out != "-")
        std::cerr << (report.all_passed() ? "all checks passed" : "verification FAILED") << '\n';
    return report.all_passed() ? 0 : 1;
}
