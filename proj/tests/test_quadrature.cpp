#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fadingrate/quadrature.hpp"
#include "oracles.hpp"

using namespace fadingrate;

TEST_CASE("oracle self-check against high-precision values") {
    CHECK(oracle::exp_log_moment(1.0) == doctest::Approx(0.596347362323194).epsilon(1e-14));
    CHECK(oracle::exp_log_moment(3.9811) == doctest::Approx(1.33773881807032).epsilon(1e-14));
    CHECK(oracle::exp_log_moment(39.811) == doctest::Approx(3.21155471748608).epsilon(1e-14));
    CHECK(oracle::exp_log_moment(0.66597) == doctest::Approx(0.447914231517807).epsilon(1e-14));
}

TEST_CASE("exp_log_moment examples") {
    CHECK(exp_log_moment(0.0) == 0.0);
    CHECK(exp_log_moment(1.0) == doctest::Approx(0.596347).epsilon(1e-6));
    CHECK(oracle::rel_err(exp_log_moment(1.0), oracle::exp_log_moment(1.0)) < 1e-9);
    // 6 dB: the oracle gives 1.337739, not 1.34267.
    CHECK(oracle::rel_err(exp_log_moment(3.9811), 1.33773881807032) < 1e-9);
}

TEST_CASE("exp_log_moment rejects negative and non-finite gains") {
    CHECK_THROWS_AS(exp_log_moment(-1e-3), std::domain_error);
    CHECK_THROWS_AS(exp_log_moment(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(exp_log_moment(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("exp_log_moment matches e^{1/a} E1(1/a) on a 64-point log grid and is increasing") {
    double prev = 0.0;
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double a = std::pow(10.0, -3.0 + 6.0 * i / 63.0);
        const double v = exp_log_moment(a);
        worst = std::max(worst, oracle::rel_err(v, oracle::exp_log_moment(a)));
        CHECK(v > prev);
        prev = v;
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("both evaluation paths agree with the oracle around the switch-over gain") {
    for (double a : {0.05, 0.2, 0.4, 0.49, 0.5, 0.51, 0.6, 0.8, 2.0}) {
        CAPTURE(a);
        CHECK(oracle::rel_err(exp_log_moment(a), oracle::exp_log_moment(a)) < 1e-11);
    }
}

TEST_CASE("coherent_capacity") {
    CHECK(coherent_capacity(0.0) == 0.0);
    CHECK(coherent_capacity(1.0) == doctest::Approx(0.86034).epsilon(1e-5));
    CHECK(coherent_capacity(3.9811) == doctest::Approx(1.92994915883472).epsilon(1e-10));
    CHECK(coherent_capacity(3.9811, LogBase::E) == doctest::Approx(1.33773881807032).epsilon(1e-10));
    CHECK_THROWS_AS(coherent_capacity(-1.0), std::domain_error);

    // concave and increasing on a uniform grid
    std::array<double, 200> c{};
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coherent_capacity(0.1 * static_cast<double>(i));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
    for (std::size_t i = 1; i + 1 < c.size(); ++i) CHECK(c[i + 1] - 2 * c[i] + c[i - 1] <= 1e-9);
}

TEST_CASE("freq_integral examples") {
    CHECK(freq_integral([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));

    const std::array<double, 2> edges{-0.05, 0.05};
    const double box = freq_integral([](double f) { return std::abs(f) <= 0.05 ? 1.0 : 0.0; }, edges);
    CHECK(box == doctest::Approx(0.1).epsilon(1e-13));

    const double rho = 3.9811, fd = 0.05;
    for (int L : {1, 2, 4, 10}) {
        auto s = [&](double f) { return std::abs(f) <= fd ? 1.0 / (2 * fd) : 0.0; };
        const double q = freq_integral([&](double f) { return std::log((rho * s(f) + 1) / (rho * s(f) / L + 1)); },
                                       edges);
        const double closed = 2 * fd * std::log((rho / (2 * fd) + 1) / (rho / (2 * fd * L) + 1));
        if (L == 1)
            CHECK(std::abs(q) < 1e-15);
        else
            CHECK(oracle::rel_err(q, closed) < 1e-9);
    }
}

TEST_CASE("freq_integral is exact for polynomials within the panel degree") {
    for (int deg = 0; deg <= 20; deg += 2) {
        const double v = freq_integral([deg](double f) { return std::pow(f, deg); });
        const double exact = 2.0 * std::pow(0.5, deg + 1) / (deg + 1);
        CHECK(oracle::rel_err(v, exact) < 1e-13);
    }
    CHECK(std::abs(freq_integral([](double f) { return f * f * f; })) < 1e-16);
}

TEST_CASE("non-finite integrand names the abscissa") {
    const std::array<double, 1> br{0.1};
    try {
        freq_integral([](double f) { return f > 0.1 ? std::numeric_limits<double>::infinity() : 0.0; }, br);
        FAIL("expected domain_error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("x = ") != std::string::npos);
    }
    CHECK_THROWS_AS(freq_integral([](double) { return 1.0; }, std::array<double, 1>{0.7}), std::invalid_argument);
}

TEST_CASE("integrate handles breakpoints and reports convergence") {
    const std::array<double, 3> br{-5.0, 1.0, 7.0};  // outside ones ignored
    const auto r = integrate([](double x) { return std::abs(x - 1.0); }, 0.0, 3.0, br);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(r.subdivisions >= 2);

    const auto smooth = integrate([](double x) { return std::exp(-x) * std::sin(5 * x); }, 0.0, 10.0);
    const double exact = (5.0 - std::exp(-10.0) * (std::sin(50.0) + 5 * std::cos(50.0))) / 26.0;
    CHECK(oracle::rel_err(smooth.value, exact) < 1e-10);

    IntegralSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Gauss-Laguerre rules integrate low moments of e^{-z} exactly") {
    for (int n : {4, 16, 64}) {
        const QuadratureRule rule = n == 64 ? gauss_laguerre_64() : gauss_laguerre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        double factorial = 1.0;
        for (int k = 0; k < std::min(2 * n, 12); ++k) {
            if (k > 0) factorial *= k;
            double m = 0.0;
            for (int i = 0; i < n; ++i) m += rule.weights[i] * std::pow(rule.nodes[i], k);
            CAPTURE(n);
            CAPTURE(k);
            CHECK(oracle::rel_err(m, factorial) < 1e-11);
        }
    }
    CHECK_THROWS_AS(gauss_laguerre(0), std::invalid_argument);
}
