#include "fadingrate/sweep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace fadingrate {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_double(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) throw std::invalid_argument("empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw std::invalid_argument("not a finite number: '" + s + "'");
    return v;
}

long parse_integer(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) throw std::invalid_argument("empty integer");
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

bool parse_bool(std::string_view text) {
    const auto s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("not a boolean: '" + std::string(s) + "'");
}

void check_fd(double fd) {
    if (!(fd > 0.0 && fd < 0.5)) throw std::invalid_argument("f_d must lie in (0, 0.5), got " + format_number(fd));
}

bool depends_on_spacing(BoundKind k) {
    return k == BoundKind::SepLower || k == BoundKind::SepUpper || k == BoundKind::JointLower;
}

}  // namespace

PsdKind psd_kind_from_name(std::string_view name) {
    const auto s = trim(name);
    if (s == "rect" || s == "rectangular") return PsdKind::Rectangular;
    if (s == "rc" || s == "raised_cosine") return PsdKind::RaisedCosine;
    throw std::invalid_argument("unknown psd '" + std::string(s) + "' (rect, raised_cosine)");
}

std::string_view pilot_mode_name(PilotMode mode) {
    switch (mode) {
        case PilotMode::FixedL: return "fixed";
        case PilotMode::SepOptimal: return "sep_optimal";
        case PilotMode::JointOptimal: return "joint_optimal";
    }
    return "?";
}

PilotMode pilot_mode_from_name(std::string_view name) {
    const auto s = trim(name);
    if (s == "fixed") return PilotMode::FixedL;
    if (s == "sep_optimal") return PilotMode::SepOptimal;
    if (s == "joint_optimal") return PilotMode::JointOptimal;
    throw std::invalid_argument("unknown pilot mode '" + std::string(s) + "' (fixed, sep_optimal, joint_optimal)");
}

void SweepSpec::validate() const {
    if (fd_list.empty()) {
        check_fd(grid.min);
        check_fd(grid.max);
        if (grid.points < 2) throw std::invalid_argument("fd grid needs at least 2 points");
        if (!(grid.min < grid.max)) throw std::invalid_argument("fd_min must be below fd_max");
    } else {
        for (double fd : fd_list) check_fd(fd);
    }
    if (snr_db.empty()) throw std::invalid_argument("snr_db list is empty");
    if (metrics.empty()) throw std::invalid_argument("metric list is empty");
    if (pilot_mode == PilotMode::FixedL && L < 1) throw std::invalid_argument("pilot_mode fixed needs L >= 1");
    if (psd == PsdKind::RaisedCosine && !(rolloff > 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("rolloff must lie in (0, 1]");
}

std::vector<double> SweepSpec::fd_values() const {
    std::vector<double> fds = fd_list;
    if (fds.empty()) {
        fds.resize(static_cast<std::size_t>(grid.points));
        const double n = grid.points - 1;
        for (int i = 0; i < grid.points; ++i) {
            const double t = i / n;
            fds[static_cast<std::size_t>(i)] =
                grid.log ? std::exp(std::log(grid.min) + t * (std::log(grid.max) - std::log(grid.min)))
                         : grid.min + t * (grid.max - grid.min);
        }
        fds.front() = grid.min;
        fds.back() = grid.max;
    }
    std::sort(fds.begin(), fds.end());
    fds.erase(std::unique(fds.begin(), fds.end()), fds.end());
    return fds;
}

FadingPsd SweepSpec::model(double max_doppler) const {
    return psd == PsdKind::Rectangular ? FadingPsd::rectangular(max_doppler)
                                       : FadingPsd::raised_cosine(max_doppler, rolloff);
}

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (auto item : split_commas(text)) out.push_back(parse_double(item));
    return out;
}

std::vector<BoundKind> parse_metric_list(std::string_view text) {
    std::vector<BoundKind> out;
    for (auto item : split_commas(text)) {
        const BoundKind k = bound_from_name(item);
        if (std::find(out.begin(), out.end(), k) != out.end())
            throw std::invalid_argument("metric listed twice: " + std::string(item));
        out.push_back(k);
    }
    return out;
}

SweepSpec parse_config_text(std::string_view text, std::vector<std::string>* present) {
    SweepSpec spec;
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
        if (const auto it = seen.find(key); it != seen.end())
            throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                           std::to_string(it->second) + ")");
        seen.emplace(key, line_no);

        try {
            if (key == "psd") {
                spec.psd = psd_kind_from_name(value);
            } else if (key == "rolloff") {
                spec.rolloff = parse_double(value);
                if (!(spec.rolloff > 0.0 && spec.rolloff <= 1.0))
                    throw std::invalid_argument("rolloff must lie in (0, 1]");
            } else if (key == "fd") {
                spec.fd_list = parse_double_list(value);
                for (double fd : spec.fd_list) check_fd(fd);
            } else if (key == "fd_min") {
                spec.grid.min = parse_double(value);
                check_fd(spec.grid.min);
            } else if (key == "fd_max") {
                spec.grid.max = parse_double(value);
                check_fd(spec.grid.max);
            } else if (key == "fd_points") {
                const long n = parse_integer(value);
                if (n < 2 || n > 100000) throw std::invalid_argument("fd_points must be in [2, 100000]");
                spec.grid.points = static_cast<int>(n);
            } else if (key == "fd_log") {
                spec.grid.log = parse_bool(value);
            } else if (key == "snr_db") {
                spec.snr_db = parse_double_list(value);
            } else if (key == "metrics") {
                spec.metrics = parse_metric_list(value);
            } else if (key == "pilot_mode") {
                spec.pilot_mode = pilot_mode_from_name(value);
            } else if (key == "L") {
                const long L = parse_integer(value);
                if (L < 1 || L > 1000000) throw std::invalid_argument("L must be in [1, 1000000]");
                spec.L = static_cast<int>(L);
            } else if (key == "seed") {
                const std::string s(value);
                char* end = nullptr;
                errno = 0;
                const unsigned long long seed = std::strtoull(s.c_str(), &end, 10);
                if (s.front() == '-' || end != s.c_str() + s.size() || errno == ERANGE)
                    throw std::invalid_argument("seed must be an unsigned 64-bit integer");
                spec.seed = seed;
            } else if (key == "out") {
                spec.out_path = std::string(value);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(line_no, e.what());
        }
        if (present) present->push_back(key);
    }
    return spec;
}

SweepSpec parse_config(const std::string& path, std::vector<std::string>* present) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), present);
}

int sweep_spacing(const SweepSpec& spec, double fd, double rho) {
    switch (spec.pilot_mode) {
        case PilotMode::FixedL: return satisfies_nyquist(spec.L, fd) ? spec.L : 0;
        case PilotMode::SepOptimal: return sep_optimal_spacing(spec.model(fd), rho);
        case PilotMode::JointOptimal: return max_pilot_spacing(fd);
    }
    return 0;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    const bool needs_spacing = std::any_of(spec.metrics.begin(), spec.metrics.end(), depends_on_spacing);

    for (double snr_db : spec.snr_db) {
        const double rho = snr_from_db(snr_db);
        for (double fd : spec.fd_values()) {
            const FadingPsd psd = spec.model(fd);
            int L = sweep_spacing(spec, fd, rho);
            const bool violated = L == 0;
            if (violated) {
                if (needs_spacing)
                    result.warnings.push_back("warning: L=" + std::to_string(spec.L) + " violates 2 f_d L <= 1 at fd=" +
                                              format_number(fd) + ", snr_db=" + format_number(snr_db) +
                                              "; spacing-dependent rows omitted");
                L = spec.L;
            }
            for (BoundKind metric : spec.metrics) {
                if (violated && depends_on_spacing(metric)) continue;
                double bits = 0.0;
                switch (metric) {
                    case BoundKind::SepLower: bits = sep_lower(ChannelConfig::from_snr(psd, rho, L)).bits(); break;
                    case BoundKind::SepUpper: bits = sep_upper(ChannelConfig::from_snr(psd, rho, L)).bits(); break;
                    case BoundKind::JointLower: bits = joint_lower(ChannelConfig::from_snr(psd, rho, L)).bits(); break;
                    case BoundKind::IidPgLower: bits = iid_pg_lower(rho, fd).bits(); break;
                    case BoundKind::IidPgUpper: bits = iid_pg_upper(rho, fd).bits(); break;
                    case BoundKind::Coherent: bits = coherent(rho).bits(); break;
                }
                if (!std::isfinite(bits))
                    throw std::runtime_error("non-finite " + std::string(bound_name(metric)) + " at fd=" +
                                             format_number(fd) + ", snr_db=" + format_number(snr_db));
                result.rows.push_back({fd, snr_db, L, metric, bits});
            }
        }
    }

    std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        const auto na = bound_name(a.metric);
        const auto nb = bound_name(b.metric);
        if (na != nb) return na < nb;
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        return a.fd < b.fd;
    });
    return result;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << format_number(r.fd) << ',' << format_number(r.snr_db) << ',' << r.L << ',' << bound_name(r.metric)
           << ',' << format_number(r.bits) << '\n';
}

}  // namespace fadingrate
