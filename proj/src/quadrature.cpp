#include "fadingrate/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace fadingrate {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

double checked(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrand is not finite at x = " << x;
        throw std::domain_error(msg.str());
    }
    return v;
}

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

void IntegralSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("IntegralSpec: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("IntegralSpec: max_subdivisions must be >= 1");
}

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         std::span<const double> breakpoints, const IntegralSpec& spec) {
    spec.validate();
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 0, true};
        IntegralResult r = integrate(f, b, a, breakpoints, spec);
        r.value = -r.value;
        return r;
    }

    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = kronrod15(f, edges[i], edges[i + 1]);
        total += p.value;
        total_err += p.error;
        panels.push(p);
    }

    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (total_err > tolerance() && static_cast<int>(panels.size()) < spec.max_subdivisions) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel at machine resolution
        panels.pop();
        const Panel left = kronrod15(f, worst.a, mid);
        const Panel right = kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from the final partition to shed accumulated update rounding.
    IntegralResult result;
    result.subdivisions = static_cast<int>(panels.size());
    std::vector<Panel> final_panels;
    final_panels.reserve(panels.size());
    while (!panels.empty()) {
        final_panels.push_back(panels.top());
        panels.pop();
    }
    std::sort(final_panels.begin(), final_panels.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    for (const Panel& p : final_panels) {
        result.value += p.value;
        result.error += p.error;
    }
    result.converged = result.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(result.value));
    return result;
}

double freq_integral(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     const IntegralSpec& spec) {
    for (double p : breakpoints)
        if (!(p > -0.5 && p < 0.5))
            throw std::invalid_argument("freq_integral: breakpoints must lie in (-1/2, 1/2)");
    return integrate(f, -0.5, 0.5, breakpoints, spec).value;
}

QuadratureRule gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double dn = n;
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * dn);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * dn);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double p1 = 0.0;
        double p2 = 0.0;
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
            }
            pp = (dn * p1 - dn * p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
        }
        // Final evaluation at the converged node.
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
        }
        pp = (dn * p1 - dn * p2) / z;
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (pp * dn * p2);
    }
    return rule;
}

const QuadratureRule& gauss_laguerre_64() {
    static const QuadratureRule rule = gauss_laguerre(64);
    return rule;
}

namespace {

// Below this gain the 64-point Laguerre rule resolves ln(1 + a z) to better
// than 1e-12 relative; above it the log singularity at z = -1/a is too close
// to the origin and the adaptive rule takes over.
constexpr double kLaguerreMaxGain = 0.5;

}  // namespace

double exp_log_moment(double a) {
    if (!std::isfinite(a) || a < 0.0) throw std::domain_error("exp_log_moment: gain must be >= 0");
    if (a == 0.0) return 0.0;

    if (a <= kLaguerreMaxGain) {
        const QuadratureRule& rule = gauss_laguerre_64();
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * std::log1p(a * rule.nodes[i]);
        return sum;
    }

    // e^{-Z} ln(1 + a Z) < 1e-20 beyond Z.
    const double upper = 50.0 + 10.0 * std::log1p(a);
    const std::array<double, 4> breaks = {1.0 / a, 1.0, 5.0, 20.0};
    IntegralSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-300;
    return integrate([a](double z) { return std::log1p(a * z) * std::exp(-z); }, 0.0, upper,
                     breaks, spec)
        .value;
}

double from_nats(double nats, LogBase base) {
    return base == LogBase::Two ? nats / std::numbers::ln2 : nats;
}

double coherent_capacity(double rho, LogBase base) {
    if (!std::isfinite(rho) || rho < 0.0)
        throw std::domain_error("coherent_capacity: SNR must be >= 0");
    return from_nats(exp_log_moment(rho), base);
}

}  // namespace fadingrate
