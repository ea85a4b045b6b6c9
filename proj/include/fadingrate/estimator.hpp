#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fadingrate/psd.hpp"

namespace fadingrate {

// ---------------------------------------------------------------------------
// Asymptotic spectra

/// Frequency response of the MMSE interpolation filter operating on pilots
/// at rate 1/L, written at symbol-rate frequency f. Uses the decimated
/// spectrum S_h(e^{j2 pi L f}) = S_h(f) / L, so the gain is
/// (S_h/L) / (S_h/L + sigma_n^2/sigma_x^2). Real and in [0, 1).
double wiener_filter_spectrum(const FadingPsd& model, double rho, int L, double f);

/// PSD of the pilot-only interpolation error, S_h / ((rho/L) S_h/sigma_h^2 + 1).
double error_spectrum_pilot(const FadingPsd& model, double rho, int L, double f);

/// PSD of the estimation error when every symbol is known with power
/// sigma_x^2; identical to error_spectrum_pilot at L = 1.
double error_spectrum_joint_cm(const FadingPsd& model, double rho, double f);

// ---------------------------------------------------------------------------
// Finite-block estimation

/// Per-symbol transmit powers z_k = |x_k|^2, the diagonal of X X^H.
struct PowerProfile {
    Eigen::VectorXd z;

    static PowerProfile uniform(Eigen::Index n, double power);
    /// Power `power` at positions offset, offset + L, ...; zero elsewhere.
    static PowerProfile pilots(Eigen::Index n, int L, double power, Eigen::Index offset = 0);

    Eigen::Index size() const { return z.size(); }
    double mean() const { return z.size() ? z.mean() : 0.0; }
    /// Throws std::invalid_argument on a negative entry or a mean above
    /// max_average_power + 1e-12.
    void validate(double max_average_power) const;
};

enum class ErrorKind { PilotOnly, JointGeneral, JointCM };

struct ErrorCorrelation {
    Eigen::MatrixXcd matrix;
    ErrorKind kind = ErrorKind::JointGeneral;
    double sigma_h_sq = 1.0;  // prior variance, sets the jitter scale for log-dets
};

/// LMMSE (equivalently MAP, everything being jointly Gaussian) estimator of
/// the fading vector from y = diag(x) h + n, in the inverse-free form
///   h_hat = R_h X^H (X R_h X^H + sigma_n^2 I)^{-1} y.
/// Symbols with x_k = 0 carry no channel information; their rows of the
/// system decouple exactly and are dropped, so a pilots-only block costs a
/// factorization of size N/L.
class LmmseEstimator {
public:
    /// Throws std::invalid_argument for a non-Hermitian R_h, mismatched sizes
    /// or sigma_n_sq <= 0, and std::runtime_error (with eigenvalue range) if
    /// the observation covariance cannot be factored.
    LmmseEstimator(const Eigen::MatrixXcd& r_h, const Eigen::VectorXcd& symbols, double sigma_n_sq);

    Eigen::Index size() const { return gain_.rows(); }
    /// Observations at zero-power positions are ignored.
    Eigen::VectorXcd estimate(const Eigen::VectorXcd& y) const;
    /// R_h - R_h X^H (X R_h X^H + sigma_n^2 I)^{-1} X R_h, Hermitian.
    Eigen::MatrixXcd error_correlation() const;
    /// Correlation of the estimate, R_h - R_e.
    Eigen::MatrixXcd estimate_correlation() const;

private:
    Eigen::MatrixXcd r_h_;
    std::vector<Eigen::Index> active_;
    Eigen::MatrixXcd gain_;      // N x |active|
    Eigen::MatrixXcd whitened_;  // L^{-1} (X_A R_{A,:}), |active| x N
};

Eigen::VectorXcd lmmse_estimate(const Eigen::MatrixXcd& r_h, const Eigen::VectorXcd& symbols,
                                const Eigen::VectorXcd& y, double sigma_n_sq);

/// Error correlation for symbols of magnitude sqrt(z_k). Uniform z yields
/// ErrorKind::JointCM, z with zeros and one common nonzero power yields
/// PilotOnly, anything else JointGeneral.
ErrorCorrelation error_correlation(const Eigen::MatrixXcd& r_h, const PowerProfile& profile,
                                   double sigma_n_sq);

// ---------------------------------------------------------------------------
// Log-determinants

struct LogDet {
    double value = 0.0;
    bool jittered = false;
    double jitter = 0.0;
};

/// log det of a Hermitian positive definite matrix from its Cholesky
/// pivots. If the factorization fails, `jitter` is added to the diagonal
/// once and the event is reported; a second failure throws
/// std::domain_error.
LogDet logdet_hermitian(const Eigen::MatrixXcd& m, double jitter);

struct LogDetGap {
    double nats_per_symbol = 0.0;
    bool jittered = false;
    std::string note;
};

/// (1/N)(log det R_e,pil - log det R_e,joint) by direct factorization of
/// both error matrices; jitter 1e-12 sigma_h^2 on failure, reported in the
/// result. Ill-conditioned for band-limited fading at large N; prefer
/// logdet_rate_gap_stable there.
LogDetGap logdet_rate_gap(const ErrorCorrelation& pilot, const ErrorCorrelation& joint);

/// g(Z) = log det(I + Z^{1/2} R_h Z^{1/2} / sigma_n^2)
///      = log det(R_h Z / sigma_n^2 + I).
/// All eigenvalues of the factored matrix are >= 1, so this is well
/// conditioned even when R_h is numerically singular.
double information_logdet(const Eigen::MatrixXcd& r_h, const PowerProfile& profile,
                          double sigma_n_sq);

/// Same gap as logdet_rate_gap via log det R_e = log det R_h - g(Z):
/// (1/N)(g(Z_joint) - g(Z_pilot)). R_h cancels.
double logdet_rate_gap_stable(const Eigen::MatrixXcd& r_h, const PowerProfile& pilot,
                              const PowerProfile& joint, double sigma_n_sq);

// ---------------------------------------------------------------------------
// Concavity and constant-modulus minimality

struct ConcavityPoint {
    double theta = 0.0;
    double mixed = 0.0;        // g(theta Z1 + (1 - theta) Z2)
    double chord = 0.0;        // theta g(Z1) + (1 - theta) g(Z2)
    double margin = 0.0;       // mixed - chord
    double curvature = 0.0;    // d^2 g / dt^2 along Z2 + t (Z1 - Z2) at t = theta
};

struct ConcavityReport {
    std::vector<ConcavityPoint> points;
    int violations = 0;        // margin < -tolerance or curvature > tolerance
    double min_margin = 0.0;
    double max_curvature = 0.0;
    double tolerance = 1e-9;
};

/// Checks g along the segment between two power profiles. The curvature is
/// -sum_k mu_k^2 / (1 + theta mu_k)^2 with mu_k the eigenvalues of
/// (I + R_h Z2/sigma_n^2)^{-1} R_h (Z1 - Z2)/sigma_n^2.
ConcavityReport concavity_probe(const Eigen::MatrixXcd& r_h, const PowerProfile& z1,
                                const PowerProfile& z2, const std::vector<double>& thetas,
                                double sigma_n_sq, double tolerance = 1e-9);

struct CmMinimalityReport {
    double mean_logdet = 0.0;      // mean over profiles of g(Z)
    double logdet_of_mean = 0.0;   // g(E[Z])
    double logdet_cm = 0.0;        // g(sigma_x^2 I)
    double jensen_margin = 0.0;    // g(E[Z]) - mean g(Z), >= 0 by concavity
    double monotone_margin = 0.0;  // g(sigma_x^2 I) - g(E[Z])
    double cm_margin = 0.0;        // g(sigma_x^2 I) - mean g(Z)
    /// (1/N) log det R_e,joint,CM - (1/N)(log det R_h - mean g(Z)); <= 0 when CM
    /// minimizes the error entropy.
    double entropy_margin = 0.0;
    bool passed = false;           // jensen_margin >= -tol and cm_margin >= -tol
};

/// Finite-N check that constant-modulus symbols maximize the averaged
/// information log-det (hence minimize the joint error entropy) under the
/// average power constraint E|x_k|^2 <= sigma_x^2. The constraint is on the
/// symbol distribution, so it is checked on the ensemble mean power, which
/// may exceed sigma_x^2 by the relative `power_slack` (sampling error of
/// i.i.d. draws). Throws std::invalid_argument on a negative power or a
/// violated constraint.
CmMinimalityReport cm_minimality_check(const Eigen::MatrixXcd& r_h,
                                       const std::vector<PowerProfile>& profiles,
                                       double sigma_x_sq, double sigma_n_sq,
                                       double tolerance = 1e-9, double power_slack = 0.0);

}  // namespace fadingrate
