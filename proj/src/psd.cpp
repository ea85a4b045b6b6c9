#include "fadingrate/psd.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fadingrate/quadrature.hpp"
#include "fft.hpp"

namespace fadingrate {

using std::numbers::pi;

FadingPsd::FadingPsd(PsdKind kind, double max_doppler, double rolloff, double sigma_h_sq)
    : kind_(kind), max_doppler_(max_doppler), rolloff_(rolloff), sigma_h_sq_(sigma_h_sq) {
    if (!(max_doppler > 0.0 && max_doppler < 0.5))
        throw std::invalid_argument("FadingPsd: max Doppler must satisfy 0 < f_d < 1/2");
    if (!(sigma_h_sq > 0.0) || !std::isfinite(sigma_h_sq))
        throw std::invalid_argument("FadingPsd: fading variance must be positive");
    if (kind == PsdKind::RaisedCosine) {
        if (!(rolloff > 0.0 && rolloff <= 1.0))
            throw std::invalid_argument("FadingPsd: rolloff must satisfy 0 < beta <= 1");
        flat_level_ = sigma_h_sq / (2.0 * max_doppler * (1.0 - 0.5 * rolloff));
    } else {
        flat_level_ = sigma_h_sq / (2.0 * max_doppler);
    }
}

FadingPsd FadingPsd::rectangular(double max_doppler, double sigma_h_sq) {
    return FadingPsd(PsdKind::Rectangular, max_doppler, 0.0, sigma_h_sq);
}

FadingPsd FadingPsd::raised_cosine(double max_doppler, double rolloff, double sigma_h_sq) {
    return FadingPsd(PsdKind::RaisedCosine, max_doppler, rolloff, sigma_h_sq);
}

FadingPsd FadingPsd::rescaled(double sigma_h_sq) const {
    return FadingPsd(kind_, max_doppler_, rolloff_, sigma_h_sq);
}

double FadingPsd::shape(double abs_f) const {
    if (abs_f > max_doppler_) return 0.0;
    if (kind_ == PsdKind::Rectangular) return flat_level_;
    const double knee = (1.0 - rolloff_) * max_doppler_;
    if (abs_f <= knee) return flat_level_;
    const double width = rolloff_ * max_doppler_;
    return 0.5 * flat_level_ * (1.0 + std::cos(pi * (abs_f - knee) / width));
}

double FadingPsd::operator()(double f) const {
    if (!(std::abs(f) <= 0.5)) throw std::domain_error("psd: |f| must not exceed 1/2");
    return shape(std::abs(f));
}

double FadingPsd::periodized(double f) const {
    const double reduced = f - std::floor(f + 0.5);
    return shape(std::abs(reduced));
}

std::vector<double> FadingPsd::breakpoints() const {
    std::vector<double> pts{-max_doppler_, max_doppler_};
    if (kind_ == PsdKind::RaisedCosine) {
        const double knee = (1.0 - rolloff_) * max_doppler_;
        if (knee > 0.0) {
            pts.push_back(-knee);
            pts.push_back(knee);
        } else {
            pts.push_back(0.0);
        }
    }
    return pts;
}

double psd_value(const FadingPsd& model, double f) { return model(f); }

cplx autocorrelation(const FadingPsd& model, long lag) {
    const double var = model.fading_variance();
    if (lag == 0) return var;
    const double fd = model.max_doppler();
    const double l = static_cast<double>(lag);
    if (model.kind() == PsdKind::Rectangular) {
        const double x = 2.0 * pi * fd * l;
        return var * std::sin(x) / x;
    }
    // Real, even PSD: r(l) = 2 int_0^{f_d} S(f) cos(2 pi f l) df.
    const double knee = (1.0 - model.rolloff()) * fd;
    const double breaks[] = {knee};
    IntegralSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-14 * var;
    const double half = integrate([&](double f) { return model(f) * std::cos(2.0 * pi * f * l); },
                                  0.0, fd, breaks, spec)
                            .value;
    return 2.0 * half;
}

Eigen::MatrixXcd CorrelationToeplitz::dense() const {
    const auto n = static_cast<Eigen::Index>(first_row.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k)
            m(k, l) = k >= l ? first_row[k - l] : std::conj(first_row[l - k]);
    return m;
}

CorrelationToeplitz toeplitz_correlation(const FadingPsd& model, std::size_t n) {
    if (n < 1) throw std::invalid_argument("toeplitz_correlation: N must be >= 1");
    CorrelationToeplitz out;
    out.first_row.resize(n);
    for (std::size_t l = 0; l < n; ++l) out.first_row[l] = autocorrelation(model, static_cast<long>(l));
    return out;
}

Eigen::MatrixXcd CirculantEquivalent::dense() const {
    const auto n = static_cast<Eigen::Index>(first_column.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k) m(k, l) = first_column[(k - l + n) % n];
    return m;
}

Eigen::MatrixXcd CirculantEquivalent::from_spectrum() const {
    const auto n = static_cast<Eigen::Index>(eigenvalues.size());
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k)
            f(k, l) = scale * std::polar(1.0, 2.0 * pi * static_cast<double>((k * l) % n) / n);
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(), n);
    return f * lam.asDiagonal() * f.adjoint();
}

CirculantEquivalent circulant_equivalent(const FadingPsd& model, std::size_t n) {
    if (n < 2) throw std::invalid_argument("circulant_equivalent: N must be >= 2");
    CirculantEquivalent out;
    out.eigenvalues.resize(n);
    out.first_column.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = model.periodized(static_cast<double>(k) / static_cast<double>(n));
        out.first_column[k] = out.eigenvalues[k];
    }
    detail::Dft(n, detail::Dft::Direction::Backward).execute(out.first_column);
    for (auto& c : out.first_column) c /= static_cast<double>(n);
    return out;
}

double weak_norm_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw std::invalid_argument("weak_norm_gap: matrices must be square");
    if (a.rows() != b.rows()) throw std::invalid_argument("weak_norm_gap: dimension mismatch");
    if (a.rows() == 0) return 0.0;
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.rows()));
}

}  // namespace fadingrate
