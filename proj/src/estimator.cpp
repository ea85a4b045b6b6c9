#include "fadingrate/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace fadingrate {

namespace {

double noise_to_signal(const FadingPsd& model, double rho) {
    // sigma_n^2 / sigma_x^2 = sigma_h^2 / rho
    return model.fading_variance() / rho;
}

void require_hermitian(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

double wiener_filter_spectrum(const FadingPsd& model, double rho, int L, double f) {
    const double decimated = model(f) / L;
    if (decimated == 0.0) return 0.0;
    if (rho == 0.0) return 0.0;
    return decimated / (decimated + noise_to_signal(model, rho));
}

double error_spectrum_pilot(const FadingPsd& model, double rho, int L, double f) {
    const double s = model(f);
    return s / ((rho / L) * s / model.fading_variance() + 1.0);
}

double error_spectrum_joint_cm(const FadingPsd& model, double rho, double f) {
    return error_spectrum_pilot(model, rho, 1, f);
}

PowerProfile PowerProfile::uniform(Eigen::Index n, double power) {
    return {Eigen::VectorXd::Constant(n, power)};
}

PowerProfile PowerProfile::pilots(Eigen::Index n, int L, double power, Eigen::Index offset) {
    if (L < 1) throw std::invalid_argument("PowerProfile::pilots: L must be >= 1");
    PowerProfile p{Eigen::VectorXd::Zero(n)};
    for (Eigen::Index k = offset; k < n; k += L) p.z[k] = power;
    return p;
}

void PowerProfile::validate(double max_average_power) const {
    if ((z.array() < 0.0).any()) throw std::invalid_argument("PowerProfile: negative power");
    if (!z.allFinite()) throw std::invalid_argument("PowerProfile: non-finite power");
    if (mean() > max_average_power + 1e-12)
        throw std::invalid_argument("PowerProfile: average power constraint violated");
}

LmmseEstimator::LmmseEstimator(const Eigen::MatrixXcd& r_h, const Eigen::VectorXcd& symbols,
                               double sigma_n_sq)
    : r_h_(r_h) {
    require_hermitian(r_h, "LmmseEstimator");
    if (symbols.size() != r_h.rows()) throw std::invalid_argument("LmmseEstimator: size mismatch");
    if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("LmmseEstimator: noise variance must be > 0");

    const Eigen::Index n = r_h.rows();
    for (Eigen::Index k = 0; k < n; ++k)
        if (symbols[k] != 0.0) active_.push_back(k);
    const auto a = static_cast<Eigen::Index>(active_.size());

    // B = R_h X^H restricted to the active columns (N x A).
    Eigen::MatrixXcd b(n, a);
    for (Eigen::Index j = 0; j < a; ++j) b.col(j) = r_h.col(active_[j]) * std::conj(symbols[active_[j]]);
    // K = X R_h X^H + sigma_n^2 I on the active set.
    Eigen::MatrixXcd k(a, a);
    for (Eigen::Index i = 0; i < a; ++i)
        for (Eigen::Index j = 0; j < a; ++j)
            k(i, j) = symbols[active_[i]] * b(active_[i], j);
    k = hermitian_part(k);
    k.diagonal().array() += sigma_n_sq;

    Eigen::LLT<Eigen::MatrixXcd> llt(k);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k, Eigen::EigenvaluesOnly);
        std::ostringstream msg;
        msg << "LmmseEstimator: observation covariance is not positive definite (eigenvalues in ["
            << eig.eigenvalues().minCoeff() << ", " << eig.eigenvalues().maxCoeff() << "])";
        throw std::runtime_error(msg.str());
    }
    const Eigen::MatrixXcd bh = b.adjoint();
    gain_ = llt.solve(bh).adjoint();
    whitened_ = llt.matrixL().solve(bh);
}

Eigen::VectorXcd LmmseEstimator::estimate(const Eigen::VectorXcd& y) const {
    if (y.size() != size()) throw std::invalid_argument("LmmseEstimator::estimate: size mismatch");
    Eigen::VectorXcd ya(static_cast<Eigen::Index>(active_.size()));
    for (std::size_t j = 0; j < active_.size(); ++j) ya[static_cast<Eigen::Index>(j)] = y[active_[j]];
    return gain_ * ya;
}

Eigen::MatrixXcd LmmseEstimator::estimate_correlation() const {
    return hermitian_part(whitened_.adjoint() * whitened_);
}

Eigen::MatrixXcd LmmseEstimator::error_correlation() const {
    return hermitian_part(r_h_ - whitened_.adjoint() * whitened_);
}

Eigen::VectorXcd lmmse_estimate(const Eigen::MatrixXcd& r_h, const Eigen::VectorXcd& symbols,
                                const Eigen::VectorXcd& y, double sigma_n_sq) {
    return LmmseEstimator(r_h, symbols, sigma_n_sq).estimate(y);
}

ErrorCorrelation error_correlation(const Eigen::MatrixXcd& r_h, const PowerProfile& profile,
                                   double sigma_n_sq) {
    if ((profile.z.array() < 0.0).any()) throw std::invalid_argument("error_correlation: negative power");
    const Eigen::VectorXcd symbols = profile.z.array().sqrt().cast<cplx>();
    LmmseEstimator est(r_h, symbols, sigma_n_sq);

    ErrorCorrelation out;
    out.matrix = est.error_correlation();
    out.sigma_h_sq = r_h.rows() ? r_h.diagonal().real().maxCoeff() : 1.0;
    const double zmax = profile.z.size() ? profile.z.maxCoeff() : 0.0;
    const bool all_equal = profile.z.size() && (profile.z.array() == zmax).all();
    const bool zero_or_common = (profile.z.array() == 0.0 || profile.z.array() == zmax).all();
    if (all_equal && zmax > 0.0)
        out.kind = ErrorKind::JointCM;
    else if (zero_or_common)
        out.kind = ErrorKind::PilotOnly;
    else
        out.kind = ErrorKind::JointGeneral;
    return out;
}

LogDet logdet_hermitian(const Eigen::MatrixXcd& m, double jitter) {
    auto attempt = [](const Eigen::MatrixXcd& a, double& out) {
        Eigen::LLT<Eigen::MatrixXcd> llt(a);
        if (llt.info() != Eigen::Success) return false;
        const auto diag = llt.matrixLLT().diagonal().real();
        if ((diag.array() <= 0.0).any()) return false;
        out = 2.0 * diag.array().log().sum();
        return std::isfinite(out);
    };
    LogDet result;
    if (attempt(hermitian_part(m), result.value)) return result;
    if (jitter > 0.0) {
        Eigen::MatrixXcd shifted = hermitian_part(m);
        shifted.diagonal().array() += jitter;
        if (attempt(shifted, result.value)) {
            result.jittered = true;
            result.jitter = jitter;
            return result;
        }
    }
    throw std::domain_error("logdet_hermitian: matrix is not positive definite");
}

LogDetGap logdet_rate_gap(const ErrorCorrelation& pilot, const ErrorCorrelation& joint) {
    if (pilot.matrix.rows() != joint.matrix.rows() || pilot.matrix.rows() == 0)
        throw std::invalid_argument("logdet_rate_gap: matrices must have the same nonzero size");
    const LogDet a = logdet_hermitian(pilot.matrix, 1e-12 * pilot.sigma_h_sq);
    const LogDet b = logdet_hermitian(joint.matrix, 1e-12 * joint.sigma_h_sq);
    LogDetGap gap;
    gap.nats_per_symbol = (a.value - b.value) / static_cast<double>(pilot.matrix.rows());
    gap.jittered = a.jittered || b.jittered;
    if (a.jittered) gap.note += "jitter " + std::to_string(a.jitter) + " added to pilot-only matrix; ";
    if (b.jittered) gap.note += "jitter " + std::to_string(b.jitter) + " added to joint matrix; ";
    return gap;
}

double information_logdet(const Eigen::MatrixXcd& r_h, const PowerProfile& profile,
                          double sigma_n_sq) {
    if (profile.size() != r_h.rows()) throw std::invalid_argument("information_logdet: size mismatch");
    if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("information_logdet: noise variance must be > 0");
    const Eigen::VectorXd s = profile.z.array().sqrt() / std::sqrt(sigma_n_sq);
    Eigen::MatrixXcd m = s.asDiagonal() * r_h * s.asDiagonal();
    m.diagonal().array() += 1.0;
    return logdet_hermitian(m, 0.0).value;
}

double logdet_rate_gap_stable(const Eigen::MatrixXcd& r_h, const PowerProfile& pilot,
                              const PowerProfile& joint, double sigma_n_sq) {
    return (information_logdet(r_h, joint, sigma_n_sq) - information_logdet(r_h, pilot, sigma_n_sq)) /
           static_cast<double>(r_h.rows());
}

ConcavityReport concavity_probe(const Eigen::MatrixXcd& r_h, const PowerProfile& z1,
                                const PowerProfile& z2, const std::vector<double>& thetas,
                                double sigma_n_sq, double tolerance) {
    if (z1.size() != r_h.rows() || z2.size() != r_h.rows())
        throw std::invalid_argument("concavity_probe: size mismatch");
    const Eigen::Index n = r_h.rows();
    const double g1 = information_logdet(r_h, z1, sigma_n_sq);
    const double g2 = information_logdet(r_h, z2, sigma_n_sq);

    // Eigenvalues of (I + R Z2/s)^{-1} R (Z1 - Z2)/s parameterize g on the line.
    Eigen::MatrixXcd base = r_h * z2.z.asDiagonal() / sigma_n_sq;
    base.diagonal().array() += 1.0;
    const Eigen::VectorXd d = z1.z - z2.z;
    const Eigen::MatrixXcd dir = r_h * d.asDiagonal() / sigma_n_sq;
    const Eigen::MatrixXcd pencil = base.partialPivLu().solve(dir);
    const Eigen::VectorXcd mu = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(pencil, false).eigenvalues();

    ConcavityReport report;
    report.tolerance = tolerance;
    report.min_margin = std::numeric_limits<double>::infinity();
    report.max_curvature = -std::numeric_limits<double>::infinity();
    for (double theta : thetas) {
        if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("concavity_probe: theta must be in [0, 1]");
        ConcavityPoint pt;
        pt.theta = theta;
        pt.mixed = information_logdet(r_h, PowerProfile{theta * z1.z + (1.0 - theta) * z2.z}, sigma_n_sq);
        pt.chord = theta * g1 + (1.0 - theta) * g2;
        pt.margin = pt.mixed - pt.chord;
        cplx curv = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx q = mu[k] / (1.0 + theta * mu[k]);
            curv -= q * q;
        }
        pt.curvature = curv.real();
        if (pt.margin < -tolerance || pt.curvature > tolerance) ++report.violations;
        report.min_margin = std::min(report.min_margin, pt.margin);
        report.max_curvature = std::max(report.max_curvature, pt.curvature);
        report.points.push_back(pt);
    }
    return report;
}

CmMinimalityReport cm_minimality_check(const Eigen::MatrixXcd& r_h,
                                       const std::vector<PowerProfile>& profiles,
                                       double sigma_x_sq, double sigma_n_sq, double tolerance,
                                       double power_slack) {
    if (profiles.empty()) throw std::invalid_argument("cm_minimality_check: no profiles");
    if (!(power_slack >= 0.0)) throw std::invalid_argument("cm_minimality_check: power_slack must be >= 0");
    const Eigen::Index n = r_h.rows();
    Eigen::VectorXd mean_z = Eigen::VectorXd::Zero(n);
    double sum_g = 0.0;
    for (const PowerProfile& p : profiles) {
        if (p.size() != n) throw std::invalid_argument("cm_minimality_check: size mismatch");
        p.validate(std::numeric_limits<double>::infinity());
        sum_g += information_logdet(r_h, p, sigma_n_sq);
        mean_z += p.z;
    }
    mean_z /= static_cast<double>(profiles.size());
    if (mean_z.mean() > sigma_x_sq * (1.0 + power_slack) + 1e-12)
        throw std::invalid_argument("cm_minimality_check: average power constraint violated");

    CmMinimalityReport r;
    r.mean_logdet = sum_g / static_cast<double>(profiles.size());
    r.logdet_of_mean = information_logdet(r_h, PowerProfile{mean_z}, sigma_n_sq);
    r.logdet_cm = information_logdet(r_h, PowerProfile::uniform(n, sigma_x_sq), sigma_n_sq);
    r.jensen_margin = r.logdet_of_mean - r.mean_logdet;
    r.monotone_margin = r.logdet_cm - r.logdet_of_mean;
    r.cm_margin = r.logdet_cm - r.mean_logdet;
    r.entropy_margin = -r.cm_margin / static_cast<double>(n);
    r.passed = r.jensen_margin >= -tolerance && r.cm_margin >= -tolerance;
    return r;
}

}  // namespace fadingrate
