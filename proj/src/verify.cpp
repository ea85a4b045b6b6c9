#include "fadingrate/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fadingrate/estimator.hpp"

namespace fadingrate {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

void add(VerifyReport& r, std::string name, bool passed, double margin) {
    r.checks.push_back({std::move(name), passed, margin});
}

void spectra_suite(const VerifyOptions& opt, VerifyReport& out) {
    const double rho = snr_from_db(6.0);
    const FadingPsd psd = FadingPsd::rectangular(0.05);

    McConfig mc;
    mc.cfg = ChannelConfig::from_snr(psd, rho, 8);
    mc.seed = opt.seed;
    if (opt.trials) mc.trials = *opt.trials;
    if (opt.variance_tolerance) mc.variance_tolerance = *opt.variance_tolerance;
    const McReport pilot = run_pilot_estimation(mc);

    out.lines.push_back("[spectra] rectangular f_d=0.05 L=8 6 dB N=2048 trials=" + std::to_string(mc.trials) +
                        " seed=" + std::to_string(mc.seed));
    out.lines.push_back(fmt("  interior error variance %.6f  analytic %.6f  full block %.6f",
                            pilot.empirical_error_variance, pilot.analytic_error_variance,
                            pilot.full_block_error_variance));
    out.lines.push_back(fmt("  in-band error PSD %.6f  analytic %.6f", pilot.inband_empirical_psd,
                            pilot.inband_analytic_psd));
    for (const auto& c : pilot.checks) add(out, "spectra_" + c.name, c.passed, c.margin);

    add(out, "spectra_edge_containment",
        pilot.full_block_error_variance >= pilot.empirical_error_variance,
        pilot.full_block_error_variance - pilot.empirical_error_variance);

    // Same channel and noise realizations with every symbol known.
    McConfig cm = mc;
    cm.knowledge = SymbolKnowledge::AllKnownCM;
    cm.logdet_block = 0;
    const McReport joint = run_pilot_estimation(cm);
    double paired = INFINITY;
    for (std::size_t t = 0; t < pilot.per_trial_variance.size(); ++t)
        paired = std::min(paired, pilot.per_trial_variance[t] - joint.per_trial_variance[t]);
    out.lines.push_back(fmt("  all-known CM interior variance %.6f  analytic %.6f", joint.empirical_error_variance,
                            joint.analytic_error_variance));
    add(out, "spectra_cm_below_pilot", paired >= 0.0, paired);

    // Analytic dominance S_e,joint,CM <= S_e,pil for every admissible L.
    double worst = -INFINITY;
    for (int L = 1; L <= max_pilot_spacing(psd.max_doppler()); ++L)
        for (int i = 0; i <= 1000; ++i) {
            const double f = -0.5 + i / 1000.0;
            worst = std::max(worst, error_spectrum_joint_cm(psd, rho, f) - error_spectrum_pilot(psd, rho, L, f));
        }
    add(out, "spectra_dominance", worst <= 0.0, -worst);

    // Orthogonality: tr R_h = tr R_e + tr R_hhat on a finite block.
    const Eigen::MatrixXcd r_h = toeplitz_correlation(psd, 128).dense();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(128);
    for (Eigen::Index k = 0; k < 128; k += 8) x[k] = std::sqrt(mc.cfg.sigma_x_sq);
    const LmmseEstimator est(r_h, x, mc.cfg.sigma_n_sq);
    const double tr_h = r_h.trace().real();
    const double rel = std::abs(tr_h - est.error_correlation().trace().real() -
                                est.estimate_correlation().trace().real()) / tr_h;
    add(out, "spectra_orthogonality", rel <= 1e-8, 1e-8 - rel);
}

void szego_suite(VerifyReport& out) {
    const FadingPsd psd = FadingPsd::raised_cosine(0.1, 0.5);
    const ChannelConfig cfg = ChannelConfig::from_snr(psd, snr_from_db(6.0), 4);
    const double target = joint_processing_penalty(cfg);
    out.lines.push_back("[szego] raised cosine f_d=0.1 beta=0.5 6 dB L=4");
    out.lines.push_back(fmt("  integral target %.9f nats/symbol", target));

    const Eigen::MatrixXcd full = toeplitz_correlation(psd, 1024).dense();
    std::vector<double> rel;
    for (Eigen::Index n : {128, 256, 512, 1024}) {
        const double gap = logdet_rate_gap_stable(full.topLeftCorner(n, n), PowerProfile::pilots(n, cfg.L, cfg.sigma_x_sq),
                                                  PowerProfile::uniform(n, cfg.sigma_x_sq), cfg.sigma_n_sq);
        rel.push_back(gap / target - 1.0);
        out.lines.push_back(fmt("  N=%4.0f  gap %.9f  relative error %+.5f", static_cast<double>(n), gap, rel.back()));
    }

    int inversions = 0;
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < rel.size(); ++i) {
        const double increase = std::abs(rel[i]) - std::abs(rel[i - 1]);
        if (increase > 0.0) {
            ++inversions;
            worst_increase = std::max(worst_increase, increase);
        }
    }
    const double allowed = 0.005;
    add(out, "szego_monotone", inversions <= 1 && worst_increase <= allowed,
        inversions <= 1 ? allowed - worst_increase : -worst_increase);
    add(out, "szego_n1024_within_5pct", std::abs(rel.back()) <= 0.05, 0.05 - std::abs(rel.back()));
}

void concavity_suite(const VerifyOptions& opt, VerifyReport& out) {
    const FadingPsd psd = FadingPsd::raised_cosine(0.1, 0.5);
    const double sigma_x_sq = snr_from_db(6.0);
    const double sigma_n_sq = 1.0;
    const double tol = 1e-9;
    CounterRng rng(opt.seed);

    const Eigen::MatrixXcd r64 = toeplitz_correlation(psd, 64).dense();
    int violations = 0;
    double margin = INFINITY;
    for (int probe = 0; probe < 1000; ++probe) {
        PowerProfile z1{Eigen::VectorXd(64)};
        PowerProfile z2{Eigen::VectorXd(64)};
        for (Eigen::Index k = 0; k < 64; ++k) {
            z1.z[k] = 2.0 * sigma_x_sq * rng.uniform();
            z2.z[k] = 2.0 * sigma_x_sq * rng.uniform();
        }
        const double theta = rng.uniform();
        const ConcavityReport r = concavity_probe(r64, z1, z2, {theta}, sigma_n_sq, tol);
        violations += r.violations;
        margin = std::min({margin, r.min_margin + tol, tol - r.max_curvature});
    }
    out.lines.push_back("[concavity] raised cosine f_d=0.1 beta=0.5, sigma_x^2 = 6 dB, seed=" +
                        std::to_string(opt.seed));
    out.lines.push_back("  1000 probes at N=64: " + std::to_string(violations) + " violations");
    add(out, "concavity_probes", violations == 0, margin);

    const Eigen::MatrixXcd r32 = toeplitz_correlation(psd, 32).dense();
    const int batches = 500;
    const int per_batch = 16;
    // Ensemble mean of i.i.d. {0, 2 sigma_x^2} draws: 4 standard errors.
    const double slack = 4.0 / std::sqrt(32.0 * per_batch);
    int passed = 0;
    int monotone = 0;
    double worst = INFINITY;
    for (int b = 0; b < batches; ++b) {
        std::vector<PowerProfile> profiles(per_batch, PowerProfile{Eigen::VectorXd(32)});
        for (auto& p : profiles)
            for (Eigen::Index k = 0; k < 32; ++k) p.z[k] = rng.uniform() < 0.5 ? 0.0 : 2.0 * sigma_x_sq;
        const CmMinimalityReport r = cm_minimality_check(r32, profiles, sigma_x_sq, sigma_n_sq, tol, slack);
        passed += r.passed;
        monotone += r.monotone_margin >= -tol;
        worst = std::min(worst, std::min(r.jensen_margin, r.cm_margin));
    }
    const double rate = static_cast<double>(passed) / batches;
    out.lines.push_back(fmt("  CM minimality: %.0f of %.0f batches pass (monotone step alone %.0f)",
                            static_cast<double>(passed), static_cast<double>(batches),
                            static_cast<double>(monotone)));
    out.lines.push_back(fmt("  smallest Jensen/CM margin %.6g", worst));
    add(out, "concavity_cm_minimality", rate >= 0.99, rate - 0.99);
}

}  // namespace

std::string_view suite_name(Suite suite) {
    switch (suite) {
        case Suite::Spectra: return "spectra";
        case Suite::Szego: return "szego";
        case Suite::Concavity: return "concavity";
        case Suite::All: return "all";
    }
    return "?";
}

Suite suite_from_name(std::string_view name) {
    for (Suite s : {Suite::Spectra, Suite::Szego, Suite::Concavity, Suite::All})
        if (suite_name(s) == name) return s;
    throw std::invalid_argument("unknown suite '" + std::string(name) + "' (spectra, szego, concavity, all)");
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
    VerifyReport report;
    const Suite s = options.suite;
    if (s == Suite::Spectra || s == Suite::All) spectra_suite(options, report);
    if (s == Suite::Szego || s == Suite::All) szego_suite(report);
    if (s == Suite::Concavity || s == Suite::All) concavity_suite(options, report);
    return report;
}

void write_report(std::ostream& os, const VerifyReport& report) {
    for (const auto& line : report.lines) os << line << '\n';
    os << '\n';
    for (const auto& c : report.checks) {
        char margin[32];
        std::snprintf(margin, sizeof margin, "%.9g", c.margin);
        os << c.name << ',' << (c.passed ? "pass" : "fail") << ',' << margin << '\n';
    }
}

}  // namespace fadingrate
