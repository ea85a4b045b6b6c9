#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fadingrate/bounds.hpp"
#include "fadingrate/estimator.hpp"
#include "oracles.hpp"

using namespace fadingrate;

namespace {

const double kRho6 = 3.9811;  // 6 dB as written in the examples
const auto kRect05 = FadingPsd::rectangular(0.05);

ChannelConfig rect(double rho, double fd, int L) { return ChannelConfig::from_snr(FadingPsd::rectangular(fd), rho, L); }

}  // namespace

TEST_CASE("Nyquist constraint admits equality") {
    CHECK(satisfies_nyquist(10, 0.05));
    CHECK_FALSE(satisfies_nyquist(11, 0.05));
    CHECK(satisfies_nyquist(1, 0.49));
    CHECK_FALSE(satisfies_nyquist(2, 0.26));
    CHECK(max_pilot_spacing(0.05) == 10);
    CHECK(max_pilot_spacing(0.013) == 38);
    CHECK(max_pilot_spacing(0.25) == 2);
    CHECK(max_pilot_spacing(0.001) == 500);
    for (double fd = 0.001; fd < 0.5; fd *= 1.07) {
        CHECK(satisfies_nyquist(max_pilot_spacing(fd), fd));
        CHECK_FALSE(satisfies_nyquist(max_pilot_spacing(fd) + 1, fd));
    }
}

TEST_CASE("ChannelConfig enforces its invariants") {
    const auto c = ChannelConfig::from_snr(kRect05, kRho6, 8, 2.0);
    CHECK(c.rho == kRho6);
    CHECK(oracle::rel_err(c.sigma_x_sq * c.sigma_h_sq / c.sigma_n_sq, c.rho) < 1e-12);
    CHECK_THROWS_AS(ChannelConfig::from_snr(kRect05, kRho6, 11), std::invalid_argument);
    CHECK_THROWS_AS(ChannelConfig::from_snr(kRect05, kRho6, 0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelConfig::from_snr(kRect05, -1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ChannelConfig::from_snr(kRect05, 1.0, 2, 0.0), std::invalid_argument);
    auto broken = c;
    broken.rho *= 1.001;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    CHECK_THROWS_AS(c.with_spacing(12), std::invalid_argument);
    const auto p = ChannelConfig::from_powers(FadingPsd::rectangular(0.05, 2.0), 3.0, 0.5, 4);
    CHECK(p.rho == doctest::Approx(12.0));
    CHECK(snr_from_db(6.0) == doctest::Approx(3.98107170553497));
    CHECK(snr_from_db(0.0) == 1.0);
}

TEST_CASE("bound names round-trip") {
    for (auto k : {BoundKind::SepLower, BoundKind::SepUpper, BoundKind::JointLower, BoundKind::IidPgLower,
                   BoundKind::IidPgUpper, BoundKind::Coherent})
        CHECK(bound_from_name(bound_name(k)) == k);
    CHECK_THROWS_AS(bound_from_name("joint"), std::invalid_argument);
}

TEST_CASE("pilot_error_variance examples") {
    CHECK(pilot_error_variance(rect(0.0, 0.05, 8)) == doctest::Approx(1.0).epsilon(1e-14));
    const double v = pilot_error_variance(rect(kRho6, 0.05, 8));
    CHECK(oracle::rel_err(v, 1.0 / (1.0 + kRho6 / (2 * 0.05 * 8))) < 1e-9);
    CHECK(v == doctest::Approx(0.16729).epsilon(1e-4));

    for (const auto& psd : {kRect05, FadingPsd::raised_cosine(0.1, 0.5)}) {
        const auto c = ChannelConfig::from_snr(psd, kRho6, 1);
        const double joint = freq_integral([&](double f) { return error_spectrum_joint_cm(psd, kRho6, f); },
                                           psd.breakpoints());
        CHECK(oracle::rel_err(pilot_error_variance(c), joint) < 1e-10);
    }
    const double scaled = pilot_error_variance(ChannelConfig::from_snr(FadingPsd::rectangular(0.05, 2.0), kRho6, 8));
    CHECK(oracle::rel_err(scaled, 2.0 * v) < 1e-10);
}

TEST_CASE("sep_lower examples") {
    const auto c = rect(kRho6, 0.05, 8);
    const double s2 = pilot_error_variance(c);
    const double rho_eff = kRho6 * (1 - s2) / (1 + kRho6 * s2);
    CHECK(rho_eff == doctest::Approx(1.98960544841940).epsilon(1e-12));
    const double expected = 7.0 / 8.0 * oracle::exp_log_moment(rho_eff) / std::numbers::ln2;
    CHECK(oracle::rel_err(sep_lower(c).bits(), expected) < 1e-9);
    CHECK(sep_lower(c).bits() == doctest::Approx(1.16150455250825).epsilon(1e-10));
    CHECK(sep_lower(c).kind == BoundKind::SepLower);
    CHECK(sep_lower(c).config.L == 8);
    CHECK(sep_lower(rect(0.0, 0.05, 8)).bits() == 0.0);

    // near-perfect estimation
    const auto slow = rect(kRho6, 1e-7, 2);
    CHECK(pilot_error_variance(slow) < 1e-6);
    CHECK(sep_lower(slow).bits() == doctest::Approx(0.5 * coherent_capacity(kRho6)).epsilon(1e-5));
}

TEST_CASE("sep_upper examples") {
    const auto c = rect(kRho6, 0.05, 8);
    const double s2 = pilot_error_variance(c);
    const double correction =
        7.0 / 8.0 * (std::log(1 + kRho6 * s2) - oracle::exp_log_moment(kRho6 * s2)) / std::numbers::ln2;
    CHECK(correction == doctest::Approx(0.0789121821292749).epsilon(1e-10));
    CHECK(oracle::rel_err(sep_upper(c).bits() - sep_lower(c).bits(), correction) < 1e-9);
    CHECK(sep_upper(c).bits() == doctest::Approx(1.24041673463753).epsilon(1e-10));
    CHECK(sep_upper(rect(0.0, 0.05, 8)).bits() == 0.0);
    const auto slow = rect(kRho6, 1e-9, 2);
    CHECK(sep_upper(slow).bits() - sep_lower(slow).bits() < 1e-7);
}

TEST_CASE("joint_lower examples") {
    // (9/10) C - 0.1 log2(40.811 / 4.9811) with C = 1.92995 bits
    const double expected = 0.9 * oracle::exp_log_moment(kRho6) / std::numbers::ln2 -
                            0.1 * std::log2((kRho6 / 0.1 + 1) / (kRho6 / 1.0 + 1));
    const auto c = rect(kRho6, 0.05, 10);
    CHECK(oracle::rel_err(joint_lower(c).bits(), expected) < 1e-9);
    CHECK(joint_lower(c).bits() == doctest::Approx(1.43351206476379).epsilon(1e-10));
    CHECK(joint_lower_rect(kRho6, 0.05, 10).bits() == doctest::Approx(1.43351206476379).epsilon(1e-10));
    CHECK(joint_lower(rect(kRho6, 0.05, 1)).bits() == 0.0);
    CHECK(joint_lower_rect(kRho6, 0.05, 1).bits() == 0.0);
    CHECK(joint_lower(rect(0.0, 0.05, 4)).bits() == 0.0);
    CHECK_THROWS_AS(joint_lower_rect(kRho6, 0.05, 11), std::invalid_argument);
}

TEST_CASE("joint_lower_rect equals the general evaluation on random admissible triples") {
    std::mt19937_64 gen(20240521);
    std::uniform_real_distribution<double> log_fd(std::log(1e-3), std::log(0.45));
    std::uniform_real_distribution<double> snr_db(-10.0, 30.0);
    for (int i = 0; i < 20; ++i) {
        const double fd = std::exp(log_fd(gen));
        const double rho = snr_from_db(snr_db(gen));
        const int L = 1 + static_cast<int>(gen() % static_cast<unsigned>(max_pilot_spacing(fd)));
        const double general = joint_lower(rect(rho, fd, L)).nats;
        const double closed = joint_lower_rect(rho, fd, L).nats;
        CAPTURE(fd);
        CAPTURE(rho);
        CAPTURE(L);
        if (L == 1)
            CHECK(general == closed);
        else
            CHECK(oracle::rel_err(general, closed) < 1e-9);
    }
}

TEST_CASE("optimal pilot spacing") {
    CHECK(optimal_pilot_spacing(kRho6, 0.05).optimal == 10);
    CHECK(optimal_pilot_spacing(kRho6, 0.013).optimal == 38);
    CHECK_THROWS_AS(optimal_pilot_spacing(0.0, 0.05), std::domain_error);
    for (double rho : {1.0, kRho6, 15.849}) {
        for (double fd : {0.005, 0.01, 0.05}) {
            const auto opt = optimal_pilot_spacing(rho, fd);
            int best = 1;
            double best_v = -INFINITY;
            for (int L = 1; L <= max_pilot_spacing(fd); ++L) {
                const double v = joint_lower_rect(rho, fd, L).nats;
                if (v > best_v) {
                    best_v = v;
                    best = L;
                }
            }
            CHECK(best == opt.optimal);
            CHECK(opt.factor > 1.0);
            CHECK(opt.continuous == doctest::Approx(opt.factor / (2 * fd)));
            const double c = coherent_capacity(rho, LogBase::E);
            CHECK(opt.factor == doctest::Approx(c * rho / (rho - c)));
        }
    }
}

TEST_CASE("iid PG bounds") {
    CHECK(iid_pg_lower(0.0, 0.05).bits() == 0.0);
    CHECK(iid_pg_upper(0.0, 0.05).bits() == 0.0);
    const double lower = coherent_capacity(kRho6) - 0.1 * std::log2(1 + kRho6 / 0.1);
    CHECK(oracle::rel_err(iid_pg_lower(kRho6, 0.05).bits(), lower) < 1e-9);
    CHECK(iid_pg_lower(kRho6, 0.05).bits() == doctest::Approx(1.39486054317890).epsilon(1e-10));
    CHECK(iid_pg_lower(1.0, 0.45).bits() == 0.0);

    const double branch1 = std::log2(1 + kRho6) - 0.1 * oracle::exp_log_moment(kRho6 / 0.1) / std::numbers::ln2;
    const double upper = std::min(branch1, coherent_capacity(kRho6));
    CHECK(oracle::rel_err(iid_pg_upper(kRho6, 0.05).bits(), upper) < 1e-9);
    CHECK(iid_pg_upper(kRho6, 0.05).bits() == doctest::Approx(1.85313496823757).epsilon(1e-10));
    CHECK(iid_pg_upper(kRho6, 1e-9).bits() == doctest::Approx(coherent_capacity(kRho6)).epsilon(1e-12));
    CHECK(iid_pg_lower(kRho6, 0.05).config.L == 1);
}

TEST_CASE("ordering, ceiling and small-SNR invariants on sampled grids") {
    for (double snr_db : {-10.0, 0.0, 6.0, 12.0, 20.0, 30.0}) {
        const double rho = snr_from_db(snr_db);
        const double ceiling = coherent(rho).bits();
        for (double fd : {0.001, 0.004, 0.02, 0.05, 0.1, 0.2, 0.3, 0.45}) {
            for (const auto& psd : {FadingPsd::rectangular(fd), FadingPsd::raised_cosine(fd, 0.5)}) {
                for (int L : {1, 2, 3, max_pilot_spacing(fd)}) {
                    if (!satisfies_nyquist(L, fd)) continue;
                    const auto c = ChannelConfig::from_snr(psd, rho, L);
                    const double lo = sep_lower(c).bits();
                    const double up = sep_upper(c).bits();
                    CHECK(lo >= 0.0);
                    CHECK(up >= lo);
                    CHECK(up <= ceiling + 1e-9);
                    CHECK(joint_lower(c).bits() <= ceiling + 1e-9);
                }
            }
            const double il = iid_pg_lower(rho, fd).bits();
            const double iu = iid_pg_upper(rho, fd).bits();
            CHECK(il >= 0.0);
            CHECK(iu >= il);
            CHECK(iu <= ceiling + 1e-9);
        }
    }
    const double tiny = 1e-8;
    for (double fd : {0.01, 0.1}) {
        const auto c = rect(tiny, fd, 2);
        for (double v : {sep_lower(c).bits(), sep_upper(c).bits(), joint_lower(c).bits(), iid_pg_lower(tiny, fd).bits(),
                         iid_pg_upper(tiny, fd).bits(), coherent(tiny).bits()})
            CHECK(std::abs(v) < 1e-6);
    }
}

TEST_CASE("joint_lower_rect increases in L below the continuous optimum") {
    for (double rho : {1.0, kRho6, 15.849}) {
        for (double fd : {0.002, 0.01, 0.05, 0.1}) {
            const auto opt = optimal_pilot_spacing(rho, fd);
            double prev = -INFINITY;
            for (int L = 1; L <= max_pilot_spacing(fd) && L < opt.continuous; ++L) {
                const double v = joint_lower_rect(rho, fd, L).nats;
                CHECK(v > prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("joint bound at L_opt dominates the joint bound at the separate-optimal spacing") {
    for (double snr_db : {0.0, 6.0, 12.0}) {
        const double rho = snr_from_db(snr_db);
        for (double fd = 1e-3; fd <= 0.25; fd *= 1.5) {
            const auto psd = FadingPsd::rectangular(fd);
            const int l_sep = sep_optimal_spacing(psd, rho);
            const int l_opt = max_pilot_spacing(fd);
            CHECK(l_sep >= 1);
            CHECK(l_sep <= l_opt);
            CHECK(joint_lower(ChannelConfig::from_snr(psd, rho, l_opt)).nats >=
                  joint_lower(ChannelConfig::from_snr(psd, rho, l_sep)).nats - 1e-12);
        }
    }
}

TEST_CASE("sep_optimal_spacing breaks ties toward smaller spacing") {
    // rho = 0: every spacing gives 0, the smallest wins.
    CHECK(sep_optimal_spacing(kRect05, 0.0) == 1);
    const int l = sep_optimal_spacing(kRect05, kRho6);
    const auto base = ChannelConfig::from_snr(kRect05, kRho6, 1);
    for (int L = 1; L <= 10; ++L) CHECK(sep_lower(base.with_spacing(L)).nats <= sep_lower(base.with_spacing(l)).nats);
}
