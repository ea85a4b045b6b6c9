#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fadingrate {

struct IntegralSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;

    /// Throws std::invalid_argument unless tolerances are positive and
    /// max_subdivisions >= 1.
    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;    // summed |Kronrod - Gauss| over the final panels
    int subdivisions = 0;  // number of panels in the final partition
    bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` on [a, b].
/// Panels are split at the interior `breakpoints` first (values outside
/// (a, b) are ignored), then refined by bisection of the worst panel.
/// Throws std::domain_error naming the abscissa if `f` returns a
/// non-finite value.
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         std::span<const double> breakpoints = {},
                         const IntegralSpec& spec = {});

/// Integral over one period of normalized frequency, [-1/2, 1/2].
/// `breakpoints` must lie in (-1/2, 1/2); discontinuities of the integrand
/// belong there.
double freq_integral(const std::function<double(double)>& f,
                     std::span<const double> breakpoints = {},
                     const IntegralSpec& spec = {});

/// Nodes and weights of an n-point rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for weight e^{-z} on [0, inf), computed by
/// Newton iteration on the three-term recurrence.
QuadratureRule gauss_laguerre(int n);

/// 64-point Gauss-Laguerre rule, computed once.
const QuadratureRule& gauss_laguerre_64();

/// E[ln(1 + a Z)] for Z ~ Exp(1), i.e. int_0^inf ln(1 + a z) e^{-z} dz, in
/// nats. Throws std::domain_error for a < 0 or non-finite a.
double exp_log_moment(double a);

enum class LogBase { Two, E };

/// Convert a value in nats to the requested base.
double from_nats(double nats, LogBase base);

/// Ergodic capacity of the Rayleigh channel with perfect receiver channel
/// knowledge at average SNR rho: E[log(1 + rho |h|^2 / sigma_h^2)].
double coherent_capacity(double rho, LogBase base = LogBase::Two);

}  // namespace fadingrate
