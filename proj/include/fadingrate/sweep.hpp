#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fadingrate/bounds.hpp"

namespace fadingrate {

/// Accepts rect, rectangular, rc, raised_cosine.
PsdKind psd_kind_from_name(std::string_view name);

enum class PilotMode { FixedL, SepOptimal, JointOptimal };

std::string_view pilot_mode_name(PilotMode mode);
/// Accepts fixed, sep_optimal, joint_optimal.
PilotMode pilot_mode_from_name(std::string_view name);

struct FdGrid {
    double min = 1e-3;
    double max = 0.25;
    int points = 40;
    bool log = true;
};

struct SweepSpec {
    PsdKind psd = PsdKind::Rectangular;
    double rolloff = 0.5;  // raised cosine only
    FdGrid grid;
    std::vector<double> fd_list;  // non-empty replaces the grid
    std::vector<double> snr_db = {0.0, 6.0, 12.0};
    std::vector<BoundKind> metrics = {BoundKind::SepLower,   BoundKind::SepUpper,   BoundKind::JointLower,
                                      BoundKind::IidPgLower, BoundKind::IidPgUpper, BoundKind::Coherent};
    PilotMode pilot_mode = PilotMode::SepOptimal;
    int L = 0;  // FixedL only
    std::uint64_t seed = 1;
    std::string out_path;  // empty: standard output

    /// Throws std::invalid_argument: f_d outside (0, 0.5), fewer than two
    /// grid points, min >= max, empty metric or SNR list, FixedL without
    /// L >= 1, rolloff outside [0, 1].
    void validate() const;
    /// Ascending f_d values of the sweep.
    std::vector<double> fd_values() const;
    FadingPsd model(double max_doppler) const;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Line-oriented `key = value` format, `#` starts a comment. Keys: psd,
/// rolloff, fd, fd_min, fd_max, fd_points, fd_log, snr_db, metrics,
/// pilot_mode, L, seed, out. Lists are comma separated. Unknown keys,
/// duplicates, malformed lines and invalid values throw ConfigError with the
/// offending line; cross-field validation is left to SweepSpec::validate.
/// `present` receives the keys that were set, in file order.
SweepSpec parse_config_text(std::string_view text, std::vector<std::string>* present = nullptr);
/// Throws std::runtime_error when the file cannot be read.
SweepSpec parse_config(const std::string& path, std::vector<std::string>* present = nullptr);

std::vector<double> parse_double_list(std::string_view text);
std::vector<BoundKind> parse_metric_list(std::string_view text);

struct SweepRow {
    double fd = 0.0;
    double snr_db = 0.0;
    int L = 1;
    BoundKind metric = BoundKind::SepLower;
    double bits = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (metric name, snr_db, fd)
    std::vector<std::string> warnings;
};

/// Pilot spacing used at one grid point; 0 when FixedL violates Nyquist.
int sweep_spacing(const SweepSpec& spec, double fd, double rho);

/// Throws std::runtime_error if any bound evaluates to a non-finite value.
SweepResult run_sweep(const SweepSpec& spec);

/// %.9g
std::string format_number(double v);
inline constexpr std::string_view kCsvHeader = "fd,snr_db,L,metric,value_bits_per_use";
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace fadingrate
