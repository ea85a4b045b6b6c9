#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fadingrate {

using cplx = std::complex<double>;

enum class PsdKind { Rectangular, RaisedCosine };

/// Doppler power spectral density of a stationary Rayleigh fading process,
/// band-limited to [-f_d, f_d] in normalized frequency (cycles per symbol).
///
/// The raised-cosine model is flat at height A on |f| <= (1 - beta) f_d and
/// falls off with a half cosine to zero at |f| = f_d, with
/// A = sigma_h^2 / (2 f_d (1 - beta/2)) so that the PSD integrates to
/// sigma_h^2. Its autocorrelation is absolutely summable, unlike the
/// rectangular model's sinc.
class FadingPsd {
public:
    /// Throws std::invalid_argument unless 0 < f_d < 1/2 and sigma_h_sq > 0.
    static FadingPsd rectangular(double max_doppler, double sigma_h_sq = 1.0);
    /// As rectangular(), additionally requires 0 < rolloff <= 1.
    static FadingPsd raised_cosine(double max_doppler, double rolloff, double sigma_h_sq = 1.0);

    PsdKind kind() const { return kind_; }
    double max_doppler() const { return max_doppler_; }
    double fading_variance() const { return sigma_h_sq_; }
    double rolloff() const { return rolloff_; }

    /// S_h(f) for f in [-1/2, 1/2].
    double operator()(double f) const;

    /// S_h evaluated at f reduced modulo 1 into [-1/2, 1/2): the 1-periodic
    /// extension used on DFT grids.
    double periodized(double f) const;

    /// Frequencies in (-1/2, 1/2) where S_h or its derivative jumps.
    std::vector<double> breakpoints() const;

    /// Same model with the fading variance replaced.
    FadingPsd rescaled(double sigma_h_sq) const;

private:
    FadingPsd(PsdKind kind, double max_doppler, double rolloff, double sigma_h_sq);
    double shape(double abs_f) const;

    PsdKind kind_;
    double max_doppler_;
    double rolloff_;
    double sigma_h_sq_;
    double flat_level_;
};

/// S_h(f); throws std::domain_error for |f| > 1/2.
double psd_value(const FadingPsd& model, double f);

/// r_h(l) = E[h_{k+l} h_k^*] = int S_h(f) e^{j 2 pi f l} df.
/// Closed form (sinc) for the rectangular model, adaptive quadrature for the
/// raised cosine. Lag 0 returns sigma_h^2 exactly.
cplx autocorrelation(const FadingPsd& model, long lag);

/// Hermitian Toeplitz correlation R_h of a block of N consecutive fading
/// samples, stored by its first column r_h(0), ..., r_h(N-1).
struct CorrelationToeplitz {
    std::vector<cplx> first_row;

    std::size_t size() const { return first_row.size(); }
    /// Element (k, l) = r_h(k - l), with r_h(-m) = conj(r_h(m)).
    Eigen::MatrixXcd dense() const;
};

/// Throws std::invalid_argument for n < 1.
CorrelationToeplitz toeplitz_correlation(const FadingPsd& model, std::size_t n);

/// Circulant matrix with DFT eigenvectors whose eigenvalues are PSD samples
/// on the N-point grid; asymptotically equivalent to the Toeplitz R_h.
struct CirculantEquivalent {
    std::vector<cplx> first_column;  // c_0 .. c_{N-1}
    std::vector<double> eigenvalues; // S~_h(k/N), k = 0 .. N-1

    std::size_t size() const { return first_column.size(); }
    /// Element (k, l) = c_{(k - l) mod N}.
    Eigen::MatrixXcd dense() const;
    /// F diag(eigenvalues) F^H with the unitary DFT F.
    Eigen::MatrixXcd from_spectrum() const;
};

/// Throws std::invalid_argument for n < 2.
CirculantEquivalent circulant_equivalent(const FadingPsd& model, std::size_t n);

/// Weak (normalized Frobenius) norm of A - B: sqrt(Tr[(A-B)^H (A-B)] / N).
/// Throws std::invalid_argument for non-square or mismatched operands.
double weak_norm_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace fadingrate
