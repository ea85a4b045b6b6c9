#pragma once

#include <string_view>

#include "fadingrate/psd.hpp"
#include "fadingrate/quadrature.hpp"

namespace fadingrate {

/// True when pilots every L symbols sample a process band-limited to f_d at
/// least at the Nyquist rate, 2 f_d L <= 1. Spacing exactly at the Nyquist
/// rate is admitted so that floor(1/(2 f_d)) is always a valid spacing.
bool satisfies_nyquist(int pilot_spacing, double max_doppler);

/// Largest admissible pilot spacing, floor(1/(2 f_d)).
int max_pilot_spacing(double max_doppler);

/// Scalar system parameters of the pilot-aided flat-fading link.
/// rho = sigma_x^2 sigma_h^2 / sigma_n^2; pilots carry power sigma_x^2.
struct ChannelConfig {
    double rho = 0.0;
    double sigma_h_sq = 1.0;
    double sigma_n_sq = 1.0;
    double sigma_x_sq = 0.0;
    int L = 1;
    FadingPsd psd = FadingPsd::rectangular(0.05);

    /// Derives sigma_x^2 from rho. sigma_h^2 is taken from the PSD.
    /// Throws std::invalid_argument on rho < 0, sigma_n_sq <= 0, L < 1 or a
    /// spacing that violates the Nyquist constraint.
    static ChannelConfig from_snr(const FadingPsd& psd, double rho, int L, double sigma_n_sq = 1.0);
    static ChannelConfig from_powers(const FadingPsd& psd, double sigma_x_sq, double sigma_n_sq,
                                     int L);

    ChannelConfig with_spacing(int L) const;
    void validate() const;
};

double snr_from_db(double snr_db);

enum class BoundKind { SepLower, SepUpper, JointLower, IidPgLower, IidPgUpper, Coherent };

/// Stable lower-case identifier used on the command line and in CSV rows.
std::string_view bound_name(BoundKind kind);
/// Throws std::invalid_argument for an unknown name.
BoundKind bound_from_name(std::string_view name);

struct RateBound {
    BoundKind kind;
    double nats = 0.0;
    ChannelConfig config;

    double bits() const { return from_nats(nats, LogBase::Two); }
    double value(LogBase base) const { return from_nats(nats, base); }
};

/// Asymptotic variance of the pilot-only LMMSE (Wiener) interpolation error,
/// int S_h / ((rho/L) S_h / sigma_h^2 + 1) df.
double pilot_error_variance(const ChannelConfig& cfg);

/// int log((rho S_h/sigma_h^2 + 1) / ((rho/L) S_h/sigma_h^2 + 1)) df in nats:
/// the asymptotic per-symbol log-det gap between pilot-only and all-known
/// constant-modulus estimation errors.
double joint_processing_penalty(const ChannelConfig& cfg);

RateBound sep_lower(const ChannelConfig& cfg);
RateBound sep_upper(const ChannelConfig& cfg);
/// Not clamped at zero; it goes negative for fast fading.
RateBound joint_lower(const ChannelConfig& cfg);
/// Closed form of joint_lower for the rectangular PSD. Throws
/// std::invalid_argument on a Nyquist violation.
RateBound joint_lower_rect(double rho, double max_doppler, int L);
RateBound iid_pg_lower(double rho, double max_doppler);
RateBound iid_pg_upper(double rho, double max_doppler);
RateBound coherent(double rho);

struct PilotSpacing {
    int optimal = 1;          // floor(1/(2 f_d))
    double continuous = 0.0;  // stationary point of the rectangular joint bound
    double factor = 0.0;      // continuous * 2 f_d = C rho / (rho - C), C in nats
};

/// Throws std::domain_error for rho <= 0, and std::logic_error if the
/// stationary-point factor is not above one.
PilotSpacing optimal_pilot_spacing(double rho, double max_doppler);

/// Integer spacing in [1, floor(1/(2 f_d))] maximizing sep_lower; ties go to
/// the smaller spacing.
int sep_optimal_spacing(const FadingPsd& psd, double rho, double sigma_n_sq = 1.0);

}  // namespace fadingrate
