#include "fadingrate/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fadingrate/estimator.hpp"
#include "fft.hpp"

namespace fadingrate {

struct FadingGenerator::Plan {
    detail::Dft inverse;
};

FadingGenerator::FadingGenerator(const FadingPsd& model, std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("FadingGenerator: N must be >= 2");
    std::size_t m = 1;
    while (m < 4 * n) m <<= 1;

    const double floor = -1e-9 * model.fading_variance();
    std::vector<double> eig(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lam = model.periodized(static_cast<double>(k) / static_cast<double>(m));
        if (lam < floor) throw std::domain_error("FadingGenerator: negative circulant eigenvalue");
        if (lam < 0.0) {
            lam = 0.0;
            ++clipped_;
        }
        eig[k] = lam;
    }

    amplitudes_.resize(m);
    circulant_column_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        amplitudes_[k] = std::sqrt(eig[k] / static_cast<double>(m));
        circulant_column_[k] = eig[k] / static_cast<double>(m);
    }
    plan_ = std::make_unique<Plan>(Plan{detail::Dft(m, detail::Dft::Direction::Backward)});
    plan_->inverse.execute(circulant_column_);
    circulant_column_.resize(n);
}

FadingGenerator::~FadingGenerator() = default;
FadingGenerator::FadingGenerator(FadingGenerator&&) noexcept = default;
FadingGenerator& FadingGenerator::operator=(FadingGenerator&&) noexcept = default;

cplx FadingGenerator::covariance(std::size_t lag) const {
    if (lag >= circulant_column_.size()) throw std::out_of_range("FadingGenerator::covariance: lag >= N");
    return circulant_column_[lag];
}

Eigen::VectorXcd FadingGenerator::draw(CounterRng& rng) const {
    std::vector<cplx> spectrum(amplitudes_.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        spectrum[k] = amplitudes_[k] * rng.proper_gaussian(1.0);
    plan_->inverse.execute(spectrum);
    Eigen::VectorXcd h(static_cast<Eigen::Index>(n_));
    for (std::size_t k = 0; k < n_; ++k) h[static_cast<Eigen::Index>(k)] = spectrum[k];
    return h;
}

Eigen::VectorXcd generate_fading(const FadingPsd& model, std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    return FadingGenerator(model, n).draw(rng);
}

double PsdEstimate::integral() const {
    if (density.empty()) return 0.0;
    double sum = 0.0;
    for (double d : density) sum += d;
    return sum / static_cast<double>(density.size());
}

PsdEstimate empirical_psd(const std::vector<Eigen::VectorXcd>& sequences, Window window,
                          double overlap, std::size_t segment_length) {
    if (sequences.empty()) throw std::invalid_argument("empirical_psd: no sequences");
    const auto len = static_cast<std::size_t>(sequences.front().size());
    for (const auto& s : sequences)
        if (static_cast<std::size_t>(s.size()) != len)
            throw std::invalid_argument("empirical_psd: sequences must have equal length");
    if (len < 64) throw std::invalid_argument("empirical_psd: sequences must have at least 64 samples");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("empirical_psd: overlap must be in [0, 1)");

    const std::size_t seg = std::min(len, segment_length ? segment_length : std::size_t{256});
    if (seg < 2) throw std::invalid_argument("empirical_psd: segment too short");
    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(seg * (1.0 - overlap))));

    std::vector<double> taper(seg, 1.0);
    if (window == Window::Hann)
        for (std::size_t k = 0; k < seg; ++k)
            taper[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / seg);
    double taper_power = 0.0;
    for (double w : taper) taper_power += w * w;

    detail::Dft dft(seg, detail::Dft::Direction::Forward);
    std::vector<double> accum(seg, 0.0);
    std::vector<cplx> buf(seg);
    std::size_t segments = 0;
    for (const auto& s : sequences) {
        for (std::size_t start = 0; start + seg <= len; start += step) {
            for (std::size_t k = 0; k < seg; ++k) buf[k] = taper[k] * s[static_cast<Eigen::Index>(start + k)];
            dft.execute(buf);
            for (std::size_t k = 0; k < seg; ++k) accum[k] += std::norm(buf[k]);
            ++segments;
        }
    }

    PsdEstimate out;
    out.frequency.resize(seg);
    out.density.resize(seg);
    const std::size_t half = seg / 2;
    for (std::size_t i = 0; i < seg; ++i) {
        // ascending order: bins seg - half .. seg - 1 are the negative frequencies
        const std::size_t k = (i + seg - half) % seg;
        const double f = (k < seg - half ? static_cast<double>(k) : static_cast<double>(k) - seg) / seg;
        out.frequency[i] = f;
        out.density[i] = accum[k] / (taper_power * static_cast<double>(segments));
    }
    return out;
}

void McConfig::validate() const {
    cfg.validate();
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
    if (N < 4 * static_cast<std::size_t>(cfg.L)) throw std::invalid_argument("McConfig: N must be >= 4 L");
    if (N < 2) throw std::invalid_argument("McConfig: N must be >= 2");
    if (!(interior_fraction > 0.0 && interior_fraction <= 1.0))
        throw std::invalid_argument("McConfig: interior_fraction must be in (0, 1]");
    if (!(variance_tolerance >= 0.0) || !(psd_tolerance >= 0.0))
        throw std::invalid_argument("McConfig: tolerances must be >= 0");
}

bool McReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

McReport run_pilot_estimation(const McConfig& mc) {
    mc.validate();
    const ChannelConfig& cfg = mc.cfg;
    const int spacing = mc.knowledge == SymbolKnowledge::AllKnownCM ? 1 : cfg.L;
    const auto n = static_cast<Eigen::Index>(mc.N);

    const Eigen::MatrixXcd r_h = toeplitz_correlation(cfg.psd, mc.N).dense();
    const double amplitude = std::sqrt(cfg.sigma_x_sq);
    Eigen::VectorXcd symbols = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index k = 0; k < n; k += spacing) symbols[k] = amplitude;

    const LmmseEstimator estimator(r_h, symbols, cfg.sigma_n_sq);
    const FadingGenerator generator(cfg.psd, mc.N);

    const auto interior_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(mc.interior_fraction * static_cast<double>(mc.N))));
    const auto first = static_cast<Eigen::Index>((mc.N - interior_len) / 2);
    const auto len = static_cast<Eigen::Index>(interior_len);
    const auto max_lag = static_cast<Eigen::Index>(std::min<std::size_t>(mc.max_lag, interior_len - 1));

    McReport report;
    report.per_trial_variance.reserve(static_cast<std::size_t>(mc.trials));
    std::vector<Eigen::VectorXcd> interiors;
    interiors.reserve(static_cast<std::size_t>(mc.trials));
    std::vector<cplx> lag_sums(static_cast<std::size_t>(max_lag) + 1, 0.0);
    double interior_sum = 0.0;
    double full_sum = 0.0;

    for (int t = 0; t < mc.trials; ++t) {
        CounterRng rng(mc.seed + static_cast<std::uint64_t>(t));
        const Eigen::VectorXcd h = generator.draw(rng);
        Eigen::VectorXcd y(n);
        for (Eigen::Index k = 0; k < n; ++k) y[k] = symbols[k] * h[k] + rng.proper_gaussian(cfg.sigma_n_sq);
        const Eigen::VectorXcd e = h - estimator.estimate(y);
        const Eigen::VectorXcd inner = e.segment(first, len);

        const double inner_power = inner.squaredNorm();
        interior_sum += inner_power;
        full_sum += e.squaredNorm();
        report.per_trial_variance.push_back(inner_power / static_cast<double>(len));
        for (Eigen::Index lag = 0; lag <= max_lag; ++lag)
            lag_sums[static_cast<std::size_t>(lag)] +=
                inner.segment(lag, len - lag).dot(inner.segment(0, len - lag));  // sum e_k^* e_{k+l}... conj'd below
        interiors.push_back(inner);
    }

    const double trials = static_cast<double>(mc.trials);
    report.empirical_error_variance = interior_sum / (trials * static_cast<double>(len));
    report.full_block_error_variance = full_sum / (trials * static_cast<double>(n));
    report.analytic_error_variance = pilot_error_variance(cfg.with_spacing(spacing));
    for (Eigen::Index lag = 0; lag <= max_lag; ++lag) {
        // Eigen's dot conjugates its first argument: sum conj(e_{k+l}) e_k.
        const cplx s = lag_sums[static_cast<std::size_t>(lag)];
        report.empirical_error_autocorr.push_back(std::conj(s) / (trials * static_cast<double>(len - lag)));
    }

    const double rel_var = report.empirical_error_variance / report.analytic_error_variance - 1.0;
    report.checks.push_back({"error_variance", std::abs(rel_var) <= mc.variance_tolerance,
                             mc.variance_tolerance - std::abs(rel_var)});

    if (interior_len >= 64) {
        report.empirical_error_psd = empirical_psd(interiors, Window::Hann, 0.5, mc.psd_segment);
        double emp = 0.0;
        double ana = 0.0;
        int bins = 0;
        const auto& est = report.empirical_error_psd;
        for (std::size_t i = 0; i < est.frequency.size(); ++i) {
            if (std::abs(est.frequency[i]) > cfg.psd.max_doppler()) continue;
            emp += est.density[i];
            ana += error_spectrum_pilot(cfg.psd, cfg.rho, spacing, est.frequency[i]);
            ++bins;
        }
        if (bins > 0) {
            report.inband_empirical_psd = emp / bins;
            report.inband_analytic_psd = ana / bins;
            const double rel_psd = report.inband_empirical_psd / report.inband_analytic_psd - 1.0;
            report.checks.push_back({"inband_error_psd", std::abs(rel_psd) <= mc.psd_tolerance,
                                     mc.psd_tolerance - std::abs(rel_psd)});
        }
    }

    report.szego_target = joint_processing_penalty(cfg.with_spacing(spacing));
    if (mc.logdet_block > 0) {
        const auto nb = static_cast<Eigen::Index>(std::min(mc.N, mc.logdet_block));
        const Eigen::MatrixXcd block = r_h.topLeftCorner(nb, nb);
        report.logdet_gap_finite = logdet_rate_gap_stable(block, PowerProfile::pilots(nb, spacing, cfg.sigma_x_sq),
                                                          PowerProfile::uniform(nb, cfg.sigma_x_sq),
                                                          cfg.sigma_n_sq);
    }
    return report;
}

}  // namespace fadingrate
