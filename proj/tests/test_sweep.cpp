#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fadingrate/sweep.hpp"

using namespace fadingrate;

TEST_CASE("parse_config: minimal file keeps documented defaults") {
    std::vector<std::string> keys;
    const SweepSpec s = parse_config_text("# fig 1\npsd = rect\nfd_min = 0.002\nfd_max = 0.2\nsnr_db = 6\n", &keys);
    CHECK(s.psd == PsdKind::Rectangular);
    CHECK(s.grid.min == 0.002);
    CHECK(s.grid.max == 0.2);
    CHECK(s.grid.points == 40);
    CHECK(s.grid.log);
    CHECK(s.snr_db == std::vector<double>{6.0});
    CHECK(s.metrics.size() == 6);
    CHECK(s.pilot_mode == PilotMode::SepOptimal);
    CHECK(keys == std::vector<std::string>{"psd", "fd_min", "fd_max", "snr_db"});
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("parse_config: every key") {
    const SweepSpec s = parse_config_text(
        "psd = raised_cosine\nrolloff = 0.3\nfd = 0.01, 0.02\nfd_points = 5\nfd_log = false\n"
        "snr_db = 0, 12\nmetrics = joint_lower , iid_pg_upper\npilot_mode = fixed\nL = 7\n"
        "seed = 18446744073709551615\nout = /tmp/x.csv   # trailing comment\n\n");
    CHECK(s.psd == PsdKind::RaisedCosine);
    CHECK(s.rolloff == 0.3);
    CHECK(s.fd_list == std::vector<double>{0.01, 0.02});
    CHECK(s.grid.points == 5);
    CHECK_FALSE(s.grid.log);
    CHECK(s.metrics == std::vector<BoundKind>{BoundKind::JointLower, BoundKind::IidPgUpper});
    CHECK(s.pilot_mode == PilotMode::FixedL);
    CHECK(s.L == 7);
    CHECK(s.seed == 18446744073709551615ull);
    CHECK(s.out_path == "/tmp/x.csv");
}

TEST_CASE("parse_config: rejections carry the offending line") {
    auto line_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("psd = rect\nfd_max = 0.6\n") == 2);
    CHECK(line_of("snr_db = 6\n\nsnr_db = 12\n") == 3);
    CHECK(line_of("# c\nbogus = 1\n") == 2);
    CHECK(line_of("fd_min 0.01\n") == 1);
    CHECK(line_of("psd =\n") == 1);
    CHECK(line_of("L = 2.5\n") == 1);
    CHECK(line_of("fd_points = 1\n") == 1);
    CHECK(line_of("metrics = sep_lower, nonsense\n") == 1);
    CHECK(line_of("snr_db = 6, nan\n") == 1);
    CHECK(line_of("pilot_mode = best\n") == 1);
    CHECK(line_of("seed = -1\n") == 1);
    try {
        parse_config_text("snr_db = 6\nsnr_db = 12\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("/nonexistent/dir/cfg.txt"), std::runtime_error);
}

TEST_CASE("SweepSpec validation and grid") {
    SweepSpec s;
    CHECK_NOTHROW(s.validate());
    const auto fds = s.fd_values();
    REQUIRE(fds.size() == 40);
    CHECK(fds.front() == 1e-3);
    CHECK(fds.back() == 0.25);
    CHECK(fds[1] / fds[0] == doctest::Approx(fds[39] / fds[38]));
    s.grid.log = false;
    CHECK(s.fd_values()[1] - s.fd_values()[0] == doctest::Approx(s.fd_values()[39] - s.fd_values()[38]));

    SweepSpec bad;
    bad.grid.max = 0.6;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.grid.points = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.metrics.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.pilot_mode = PilotMode::FixedL;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.grid.min = 0.3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("joint-optimal default-grid sweep: 360 rows, sorted, finite, ordered bounds") {
    SweepSpec s;
    s.metrics = {BoundKind::JointLower, BoundKind::IidPgLower, BoundKind::IidPgUpper};
    s.pilot_mode = PilotMode::JointOptimal;
    const SweepResult r = run_sweep(s);
    CHECK(r.rows.size() == 360);
    CHECK(r.warnings.empty());
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        const auto& a = r.rows[i - 1];
        const auto& b = r.rows[i];
        const auto key_a = std::make_tuple(bound_name(a.metric), a.snr_db, a.fd);
        const auto key_b = std::make_tuple(bound_name(b.metric), b.snr_db, b.fd);
        CHECK(key_a < key_b);
    }
    for (const auto& row : r.rows) {
        CHECK(std::isfinite(row.bits));
        CHECK(row.L == max_pilot_spacing(row.fd));
    }
    for (std::size_t i = 0; i < 120; ++i) {
        const auto& lo = r.rows[i];  // iid_pg_lower
        const auto& up = r.rows[120 + i];  // iid_pg_upper
        REQUIRE(lo.metric == BoundKind::IidPgLower);
        REQUIRE(up.metric == BoundKind::IidPgUpper);
        CHECK(lo.fd == up.fd);
        CHECK(up.bits >= lo.bits);
    }
}

TEST_CASE("joint-optimal row at 6 dB, f_d = 0.05") {
    SweepSpec s;
    s.fd_list = {0.05};
    s.snr_db = {6.0};
    s.metrics = {BoundKind::JointLower};
    s.pilot_mode = PilotMode::JointOptimal;
    const auto r = run_sweep(s);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].L == 10);
    // closed form: 0.9 C(rho) - 0.1 log2((rho/0.1 + 1)/(rho + 1))
    CHECK(r.rows[0].bits == doctest::Approx(1.43351).epsilon(1e-3 / 1.43351));
}

TEST_CASE("FixedL Nyquist violations drop only spacing-dependent rows, with a warning") {
    SweepSpec s;
    s.fd_list = {0.01, 0.05, 0.1};
    s.snr_db = {6.0};
    s.metrics = {BoundKind::SepLower, BoundKind::IidPgLower, BoundKind::Coherent};
    s.pilot_mode = PilotMode::FixedL;
    s.L = 8;
    const auto r = run_sweep(s);
    CHECK(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("fd=0.1") != std::string::npos);
    std::set<double> sep_fds;
    int iid = 0;
    for (const auto& row : r.rows) {
        if (row.metric == BoundKind::SepLower) sep_fds.insert(row.fd);
        iid += row.metric == BoundKind::IidPgLower;
        CHECK(row.L == 8);
    }
    CHECK(sep_fds == std::set<double>{0.01, 0.05});
    CHECK(iid == 3);
}

TEST_CASE("SepOptimal picks the sep_lower-maximizing spacing per point") {
    SweepSpec s;
    s.fd_list = {0.003, 0.02, 0.1};
    s.snr_db = {0.0, 12.0};
    s.metrics = {BoundKind::SepLower};
    const auto r = run_sweep(s);
    for (const auto& row : r.rows) {
        const auto psd = FadingPsd::rectangular(row.fd);
        CHECK(row.L == sep_optimal_spacing(psd, snr_from_db(row.snr_db)));
    }
}

TEST_CASE("CSV serialization") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(1.43351206476379) == "1.43351206");
    CHECK(format_number(-0.0001234567891) == "-0.000123456789");

    SweepSpec s;
    s.fd_list = {0.05, 0.01};
    s.snr_db = {6.0};
    s.metrics = {BoundKind::Coherent, BoundKind::IidPgLower};
    std::ostringstream a, b;
    write_csv(a, run_sweep(s).rows);
    write_csv(b, run_sweep(s).rows);
    CHECK(a.str() == b.str());
    const std::string text = a.str();
    CHECK(text.rfind("fd,snr_db,L,metric,value_bits_per_use\n", 0) == 0);
    CHECK(text.find("0.01,6,") != std::string::npos);
    CHECK(text.find("coherent") < text.find("iid_pg_lower"));
}
