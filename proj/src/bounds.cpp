#include "fadingrate/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fadingrate {

namespace {

constexpr double kNyquistSlack = 1e-12;

double prelog(int L) { return static_cast<double>(L - 1) / static_cast<double>(L); }

void check_rate_inputs(double rho, double max_doppler) {
    if (!std::isfinite(rho) || rho < 0.0) throw std::invalid_argument("SNR must be >= 0");
    if (!(max_doppler > 0.0 && max_doppler < 0.5))
        throw std::invalid_argument("max Doppler must satisfy 0 < f_d < 1/2");
}

}  // namespace

bool satisfies_nyquist(int pilot_spacing, double max_doppler) {
    return pilot_spacing >= 1 && 2.0 * max_doppler * pilot_spacing <= 1.0 + kNyquistSlack;
}

int max_pilot_spacing(double max_doppler) {
    if (!(max_doppler > 0.0 && max_doppler < 0.5))
        throw std::invalid_argument("max Doppler must satisfy 0 < f_d < 1/2");
    int L = static_cast<int>(std::floor(1.0 / (2.0 * max_doppler)));
    if (satisfies_nyquist(L + 1, max_doppler)) ++L;  // guard against 1/(2 f_d) rounding low
    return L;
}

ChannelConfig ChannelConfig::from_snr(const FadingPsd& psd, double rho, int L, double sigma_n_sq) {
    ChannelConfig cfg;
    cfg.psd = psd;
    cfg.rho = rho;
    cfg.sigma_h_sq = psd.fading_variance();
    cfg.sigma_n_sq = sigma_n_sq;
    cfg.sigma_x_sq = rho * sigma_n_sq / cfg.sigma_h_sq;
    cfg.L = L;
    cfg.validate();
    return cfg;
}

ChannelConfig ChannelConfig::from_powers(const FadingPsd& psd, double sigma_x_sq,
                                         double sigma_n_sq, int L) {
    if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("ChannelConfig: noise variance must be > 0");
    return from_snr(psd, sigma_x_sq * psd.fading_variance() / sigma_n_sq, L, sigma_n_sq);
}

ChannelConfig ChannelConfig::with_spacing(int spacing) const {
    ChannelConfig cfg = *this;
    cfg.L = spacing;
    cfg.validate();
    return cfg;
}

void ChannelConfig::validate() const {
    if (!std::isfinite(rho) || rho < 0.0) throw std::invalid_argument("ChannelConfig: rho must be >= 0");
    if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("ChannelConfig: noise variance must be > 0");
    if (!(sigma_x_sq >= 0.0)) throw std::invalid_argument("ChannelConfig: symbol power must be >= 0");
    if (sigma_h_sq != psd.fading_variance())
        throw std::invalid_argument("ChannelConfig: sigma_h^2 disagrees with the PSD");
    const double implied = sigma_x_sq * sigma_h_sq / sigma_n_sq;
    if (std::abs(implied - rho) > 1e-12 * std::max(1.0, rho))
        throw std::invalid_argument("ChannelConfig: rho != sigma_x^2 sigma_h^2 / sigma_n^2");
    if (L < 1) throw std::invalid_argument("ChannelConfig: pilot spacing must be >= 1");
    if (!satisfies_nyquist(L, psd.max_doppler()))
        throw std::invalid_argument("ChannelConfig: pilot spacing L = " + std::to_string(L) +
                                    " violates 2 f_d L <= 1");
}

double snr_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

std::string_view bound_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::SepLower: return "sep_lower";
        case BoundKind::SepUpper: return "sep_upper";
        case BoundKind::JointLower: return "joint_lower";
        case BoundKind::IidPgLower: return "iid_pg_lower";
        case BoundKind::IidPgUpper: return "iid_pg_upper";
        case BoundKind::Coherent: return "coherent";
    }
    return "unknown";
}

BoundKind bound_from_name(std::string_view name) {
    for (BoundKind k : {BoundKind::SepLower, BoundKind::SepUpper, BoundKind::JointLower,
                        BoundKind::IidPgLower, BoundKind::IidPgUpper, BoundKind::Coherent})
        if (bound_name(k) == name) return k;
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

double pilot_error_variance(const ChannelConfig& cfg) {
    const double gain = cfg.rho / cfg.L / cfg.sigma_h_sq;
    const auto breaks = cfg.psd.breakpoints();
    IntegralSpec spec;
    spec.abs_tol = 1e-14 * cfg.sigma_h_sq;
    return freq_integral(
        [&](double f) {
            const double s = cfg.psd(f);
            return s / (gain * s + 1.0);
        },
        breaks, spec);
}

double joint_processing_penalty(const ChannelConfig& cfg) {
    if (cfg.L == 1 || cfg.rho == 0.0) return 0.0;
    const double full = cfg.rho / cfg.sigma_h_sq;
    const double pilot = full / cfg.L;
    const auto breaks = cfg.psd.breakpoints();
    IntegralSpec spec;
    spec.abs_tol = 1e-15;
    return freq_integral(
        [&](double f) {
            const double s = cfg.psd(f);
            return std::log1p(full * s) - std::log1p(pilot * s);
        },
        breaks, spec);
}

RateBound sep_lower(const ChannelConfig& cfg) {
    const double ratio = pilot_error_variance(cfg) / cfg.sigma_h_sq;
    const double effective = cfg.rho * (1.0 - ratio) / (1.0 + cfg.rho * ratio);
    return {BoundKind::SepLower, prelog(cfg.L) * exp_log_moment(std::max(effective, 0.0)), cfg};
}

RateBound sep_upper(const ChannelConfig& cfg) {
    const double ratio = pilot_error_variance(cfg) / cfg.sigma_h_sq;
    const double effective = cfg.rho * (1.0 - ratio) / (1.0 + cfg.rho * ratio);
    const double noise_gain = cfg.rho * ratio;
    // log(1 + g) - E[log(1 + g Z)] >= 0 by Jensen.
    const double correction = std::log1p(noise_gain) - exp_log_moment(noise_gain);
    return {BoundKind::SepUpper,
            prelog(cfg.L) * (exp_log_moment(std::max(effective, 0.0)) + correction), cfg};
}

RateBound joint_lower(const ChannelConfig& cfg) {
    return {BoundKind::JointLower,
            prelog(cfg.L) * exp_log_moment(cfg.rho) - joint_processing_penalty(cfg), cfg};
}

RateBound joint_lower_rect(double rho, double max_doppler, int L) {
    check_rate_inputs(rho, max_doppler);
    if (!satisfies_nyquist(L, max_doppler))
        throw std::invalid_argument("joint_lower_rect: pilot spacing violates 2 f_d L <= 1");
    const double band = 2.0 * max_doppler;
    const double penalty = band * (std::log1p(rho / band) - std::log1p(rho / (band * L)));
    return {BoundKind::JointLower, prelog(L) * exp_log_moment(rho) - penalty,
            ChannelConfig::from_snr(FadingPsd::rectangular(max_doppler), rho, L)};
}

RateBound iid_pg_lower(double rho, double max_doppler) {
    check_rate_inputs(rho, max_doppler);
    const double band = 2.0 * max_doppler;
    const double value = exp_log_moment(rho) - band * std::log1p(rho / band);
    return {BoundKind::IidPgLower, std::max(value, 0.0),
            ChannelConfig::from_snr(FadingPsd::rectangular(max_doppler), rho, 1)};
}

RateBound iid_pg_upper(double rho, double max_doppler) {
    check_rate_inputs(rho, max_doppler);
    const double band = 2.0 * max_doppler;
    const double first = std::log1p(rho) - band * exp_log_moment(rho / band);
    return {BoundKind::IidPgUpper, std::min(first, exp_log_moment(rho)),
            ChannelConfig::from_snr(FadingPsd::rectangular(max_doppler), rho, 1)};
}

RateBound coherent(double rho) {
    if (!std::isfinite(rho) || rho < 0.0) throw std::invalid_argument("SNR must be >= 0");
    ChannelConfig cfg;
    cfg.rho = rho;
    cfg.sigma_x_sq = rho;
    return {BoundKind::Coherent, exp_log_moment(rho), cfg};
}

PilotSpacing optimal_pilot_spacing(double rho, double max_doppler) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::domain_error("optimal_pilot_spacing: rho must be > 0");
    PilotSpacing out;
    out.optimal = max_pilot_spacing(max_doppler);
    const double cap = exp_log_moment(rho);
    out.factor = cap * rho / (rho - cap);
    out.continuous = out.factor / (2.0 * max_doppler);
    if (!(out.factor > 1.0))
        throw std::logic_error("optimal_pilot_spacing: stationary-point factor is not above one");
    return out;
}

int sep_optimal_spacing(const FadingPsd& psd, double rho, double sigma_n_sq) {
    const int upper = max_pilot_spacing(psd.max_doppler());
    const ChannelConfig base = ChannelConfig::from_snr(psd, rho, 1, sigma_n_sq);
    int best = 1;
    double best_value = sep_lower(base).nats;
    for (int L = 2; L <= upper; ++L) {
        const double v = sep_lower(base.with_spacing(L)).nats;
        if (v > best_value) {
            best = L;
            best_value = v;
        }
    }
    return best;
}

}  // namespace fadingrate
