#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fadingrate/bounds.hpp"
#include "fadingrate/psd.hpp"
#include "fadingrate/rng.hpp"

namespace fadingrate {

/// Stationary proper-Gaussian fading synthesis by circulant embedding: the
/// PSD is sampled on an M-point grid (M the smallest power of two >= 4N),
/// each bin gets an independent CN(0, S~_h(m/M)/M) coefficient and an
/// inverse DFT yields a process whose covariance is exactly the circulant
/// c_{k-l}; the first N samples are returned.
class FadingGenerator {
public:
    /// Throws std::invalid_argument for n < 2 and std::domain_error when a
    /// grid eigenvalue is below -1e-9 sigma_h^2 (smaller negatives are
    /// clipped and counted).
    FadingGenerator(const FadingPsd& model, std::size_t n);
    ~FadingGenerator();
    FadingGenerator(FadingGenerator&&) noexcept;
    FadingGenerator& operator=(FadingGenerator&&) noexcept;

    std::size_t size() const { return n_; }
    std::size_t grid_size() const { return amplitudes_.size(); }
    int clipped_eigenvalues() const { return clipped_; }
    /// Autocorrelation of the synthesized process at lag l (circulant).
    cplx covariance(std::size_t lag) const;

    Eigen::VectorXcd draw(CounterRng& rng) const;

private:
    struct Plan;
    std::size_t n_;
    std::vector<double> amplitudes_;
    std::vector<cplx> circulant_column_;
    std::unique_ptr<Plan> plan_;
    int clipped_ = 0;
};

Eigen::VectorXcd generate_fading(const FadingPsd& model, std::size_t n, std::uint64_t seed);

enum class Window { Hann };

struct PsdEstimate {
    std::vector<double> frequency;  // ascending, in [-1/2, 1/2)
    std::vector<double> density;
    /// Riemann sum of the density over the grid.
    double integral() const;
};

/// Welch estimate: segments of `segment_length` (0 = min(length, 256)) with
/// fractional `overlap`, periodic Hann window, averaged periodograms. The
/// density is normalized so that its grid integral equals the windowed mean
/// power, which for stationary input estimates the variance. Throws
/// std::invalid_argument on empty input, unequal lengths or sequences
/// shorter than 64 samples.
PsdEstimate empirical_psd(const std::vector<Eigen::VectorXcd>& sequences, Window window = Window::Hann,
                          double overlap = 0.5, std::size_t segment_length = 0);

enum class SymbolKnowledge {
    PilotsOnly,  // every L-th symbol is a pilot of amplitude sigma_x
    AllKnownCM,  // every symbol known, amplitude sigma_x (L effectively 1)
};

struct McConfig {
    ChannelConfig cfg;
    std::size_t N = 2048;
    int trials = 200;
    std::uint64_t seed = 1;
    double interior_fraction = 0.5;
    SymbolKnowledge knowledge = SymbolKnowledge::PilotsOnly;
    std::size_t psd_segment = 256;
    std::size_t max_lag = 16;
    /// Block size for the finite-N log-det gap; 0 skips it.
    std::size_t logdet_block = 1024;
    double variance_tolerance = 0.03;
    double psd_tolerance = 0.05;

    /// Throws std::invalid_argument on trials < 1, N < 4L,
    /// interior_fraction outside (0, 1] or a negative tolerance.
    void validate() const;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double margin = 0.0;  // tolerance minus observed deviation; >= 0 passes
};

struct McReport {
    double empirical_error_variance = 0.0;  // interior, all trials
    double full_block_error_variance = 0.0;
    double analytic_error_variance = 0.0;
    std::vector<double> per_trial_variance;  // interior variance of each trial
    PsdEstimate empirical_error_psd;
    double inband_empirical_psd = 0.0;  // mean over bins with |f| <= f_d
    double inband_analytic_psd = 0.0;
    std::vector<cplx> empirical_error_autocorr;  // lags 0..max_lag
    double logdet_gap_finite = 0.0;             // nats/symbol
    double szego_target = 0.0;                  // nats/symbol
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

/// Simulates pilot-aided LMMSE estimation over independent blocks and
/// compares the interior error statistics with the asymptotic spectra.
/// Trial t draws fading then noise from CounterRng(seed + t), so two
/// configurations differing only in `knowledge` see identical channels.
McReport run_pilot_estimation(const McConfig& mc);

}  // namespace fadingrate
