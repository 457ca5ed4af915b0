#include "wedge/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wedge/errors.hpp"
#include "wedge/parallel.hpp"

namespace wedge {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }
double negative_part(double v) { return v < 0.0 ? v : 0.0; }

// Fixed 30-point Gauss-Legendre on each panel; callers place breakpoints on
// every length scale of the integrand, so no panel needs adaptivity.
template <class F>
double integrate_panels(const F& f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k + 1] > breaks[k])) { continue; }
        total += boost::math::quadrature::gauss<double, 30>::integrate(f, breaks[k], breaks[k + 1]);
    }
    return total;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

}  // namespace

OracleValue axis_integral_oracle(const AxisIntegralParams& p) {
    if (!(p.varrho1 > 0.0) || !(p.varrho2 > 0.0)) { throw ValidationError("varrho1 and varrho2 must be positive"); }
    if (p.a < 0.0 || p.b < 0.0 || p.c < 0.0) { throw ValidationError("a, b and c must be non-negative"); }
    if (!(p.eps > 0.0)) { throw ValidationError("eps must be positive"); }
    const double r1 = p.varrho1;
    const double r2 = p.varrho2;
    const double phi = p.phi(r1);
    // x1 = phi(varrho1) is admitted when the integrand has no singular factor.
    const bool regular = p.b == 0.0 && p.c == 0.0;
    if (!(p.x1 > phi) && !(regular && p.x1 == phi)) { throw ValidationError("x1 must exceed phi(varrho1)"); }

    auto integrand = [&](double z) {
        const double u = z - phi;
        const double az = std::abs(z);
        const double g = (z - p.y1) / r2;
        const double singular = regular ? 1.0 : std::pow((r1 + az) / u, p.b) * std::pow(r2 / u, p.c);
        return std::pow((r1 + az) / (r1 + r2 + az), -p.a) * singular * std::exp(-g * g) / r2;
    };
    const double upper = std::max(p.x1, p.y1) + 12.0 * r2;
    std::vector<double> breaks{p.x1, upper};
    // Geometric panels resolve the near-singular factor (z - phi)^{-(b+c)}.
    if (p.x1 > phi) {
        for (double u = 2.0 * (p.x1 - phi); phi + u < upper; u *= 2.0) { breaks.push_back(phi + u); }
    }
    for (int k = -24; k <= 24; ++k) {
        const double z = p.y1 + 0.5 * k * r2;
        if (z > p.x1 && z < upper) { breaks.push_back(z); }
    }
    // With y1 behind x1 the Gaussian decays from x1 on the scale r2^2 / (2 (x1 - y1)).
    if (p.y1 < p.x1) {
        for (double w = 0.25 * r2 * r2 / (p.x1 - p.y1); p.x1 + w < upper; w *= 2.0) { breaks.push_back(p.x1 + w); }
    }
    // The factors in r1 + |zeta| vary on the scale r1 around zeta = 0.
    for (double w = r1; w < 2.0 * std::max(std::abs(p.x1), std::abs(upper)); w *= 2.0) {
        for (const double z : {-w, w}) {
            if (z > p.x1 && z < upper) { breaks.push_back(z); }
        }
    }
    if (0.0 > p.x1 && 0.0 < upper) { breaks.push_back(0.0); }
    OracleValue out;
    out.lhs = integrate_panels(integrand, breaks);
    if (!std::isfinite(out.lhs)) { throw NumericalError("axis integral quadrature did not converge"); }

    const double ax = std::abs(p.x1);
    const double lead = std::pow((p.x1 - phi) / (r1 + ax), negative_part(1.0 - p.b - p.c - p.eps));
    double tail = 0.0;
    if (p.c > 1.0) {
        tail = std::pow((r1 + ax) / (r1 + r2 + ax), -p.a) * std::pow((r1 + ax) / r2, 1.0 - p.c);
    } else {
        tail = std::pow((r1 + ax) / (r1 + r2 + ax), -positive_part(p.a + p.c + p.eps - 1.0)) *
               std::pow((r1 + r2 + ax) / r2, std::min(p.b, 1.0 - p.c));
    }
    out.rhs = lead * tail;
    out.ratio = out.lhs / out.rhs;
    return out;
}

namespace {

// e^{-z} times the angular integral of e^{z cos(angle)} over S^{d-1}:
// (2 pi)^{d/2} z^{1-d/2} I_{d/2-1}(z) e^{-z}.
double scaled_angular(int d, double z) {
    const double nu = 0.5 * d - 1.0;
    const double pref = std::pow(2.0 * std::numbers::pi, 0.5 * d);
    if (z < 1e-8) { return pref / (std::pow(2.0, nu) * boost::math::tgamma(nu + 1.0)) * std::exp(-z); }
    if (d == 1) { return 1.0 + std::exp(-2.0 * z); }
    if (d == 3) { return -2.0 * std::numbers::pi * std::expm1(-2.0 * z) / z; }
    if (z > 600.0) {
        const double mu = 4.0 * nu * nu;
        const double series = 1.0 - (mu - 1.0) / (8.0 * z) + (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * z * z);
        return pref * std::pow(z, -nu) * series / std::sqrt(2.0 * std::numbers::pi * z);
    }
    return pref * std::pow(z, -nu) * boost::math::cyl_bessel_i(nu, z) * std::exp(-z);
}

}  // namespace

OracleValue convolution_oracle(const ConvolutionParams& p) {
    const int d = p.d;
    if (d < 1) { throw ValidationError("dimension must be positive"); }
    if (p.x.size() != d || p.y.size() != d) { throw ValidationError("x and y must have dimension d"); }
    if (!(p.varrho1 > 0.0) || !(p.varrho2 > 0.0)) { throw ValidationError("varrho1 and varrho2 must be positive"); }
    if (p.inner_cutoff < 0.0) { throw ValidationError("inner cutoff must be non-negative"); }
    const bool admissible = p.a > -d && p.b > -d && p.a + p.b > -d;
    if (!admissible && !(p.inner_cutoff > 0.0)) {
        throw ValidationError("need a, b > -d and a + b > -d (or a positive inner cutoff)");
    }
    const double r1 = p.varrho1;
    const double r2 = p.varrho2;
    const double rho = r1 * r2 / (r1 + r2);
    const Vector centre = (r2 * p.x + r1 * p.y) / (r1 + r2);
    const double cn = centre.norm();
    const double sx = std::sqrt(r1);
    const double sy = std::sqrt(r2);
    const double sr = std::sqrt(rho);
    const double K = std::exp(-(p.x - p.y).squaredNorm() / (r1 + r2));

    auto radial = [&](double r) {
        if (r <= 0.0) { return 0.0; }
        const double g = (r - cn) / sr;
        // Logs keep r^{a+b+d-1} representable when the factors separately overflow.
        const double log_w = p.a * std::log(r / (r + sx)) + p.b * std::log(r / (r + sy)) + (d - 1) * std::log(r);
        return std::exp(log_w - g * g) * scaled_angular(d, 2.0 * r * cn / rho);
    };

    const double upper = cn + 14.0 * sr;
    const double start = p.inner_cutoff;
    const double smallest = std::min({sx, sy, sr});
    std::vector<double> breaks{upper};
    for (const double s : {sx, sy, sr}) {
        if (s > start && s < upper) { breaks.push_back(s); }
    }
    for (int k = -14; k <= 14; ++k) {
        const double r = cn + 0.5 * k * sr;
        if (r > start && r < upper) { breaks.push_back(r); }
    }
    double total = 0.0;
    double first = 1e-3 * smallest;
    if (start > 0.0) {
        first = start;
    } else {
        // Near 0 the integrand behaves like r^{a+b+d-1}: halving panels until the
        // power has decayed below double precision.
        const double power = p.a + p.b + d;
        const int halvings = std::min(4000, static_cast<int>(std::ceil(40.0 / (power * std::log(2.0)))));
        double hi = first;
        for (int k = 0; k < halvings; ++k) {
            total += boost::math::quadrature::gauss<double, 30>::integrate(radial, 0.5 * hi, hi);
            hi *= 0.5;
        }
    }
    for (double r = first; r < upper; r *= 2.0) { breaks.push_back(r); }
    breaks.push_back(first);
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double r) { return r < first; }), breaks.end());
    total += integrate_panels(radial, breaks);

    OracleValue out;
    out.lhs = K * total;
    if (!std::isfinite(out.lhs)) { throw NumericalError("convolution quadrature did not converge"); }
    const double am = negative_part(p.a);
    const double bm = negative_part(p.b);
    out.rhs = std::pow(r1, 0.5 * (d + bm)) * std::pow(r2, 0.5 * (d + am)) * std::pow(r1 + r2, -0.5 * (d + am + bm)) * K;
    out.ratio = out.lhs / out.rhs;
    return out;
}

SweepConstant sweep_constant(std::span<const double> ratios) {
    SweepConstant out;
    const std::size_t half = (ratios.size() + 1) / 2;
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        out.C_full = std::max(out.C_full, ratios[k]);
        if (k < half) { out.C_half = std::max(out.C_half, ratios[k]); }
    }
    out.drift = out.C_full > 0.0 ? (out.C_full - out.C_half) / out.C_full : 0.0;
    return out;
}

std::vector<AxisSweepRow> axis_integral_sweep(std::size_t n, std::uint64_t seed, double slope,
                                     std::optional<std::array<double, 3>> exponents) {
    std::vector<AxisSweepRow> rows(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> exps(0.0, 2.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    for (auto& row : rows) {
        auto& q = row.params;
        q.a = exps(rng);
        q.b = exps(rng);
        q.c = exps(rng);
        if (exponents) {
            q.a = (*exponents)[0];
            q.b = (*exponents)[1];
            q.c = (*exponents)[2];
        }
        q.varrho1 = log_uniform(rng, 1e-2, 1e2);
        q.varrho2 = log_uniform(rng, 1e-2, 1e2);
        q.phi.slope = slope;
        q.x1 = q.phi(q.varrho1) + log_uniform(rng, 1e-2, 1e2);
        const double offset = log_uniform(rng, 1e-2, 1e2);
        q.y1 = q.x1 + (sign(rng) < 0.0 ? -offset : offset);
    }
    parallel_for(rows.size(), [&](std::size_t k) { rows[k].value = axis_integral_oracle(rows[k].params); });
    return rows;
}

std::vector<ConvolutionSweepRow> convolution_sweep(int d, double a, double b, std::size_t n, std::uint64_t seed) {
    std::vector<ConvolutionSweepRow> rows(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto point = [&] {
        Vector v(d);
        for (int i = 0; i < d; ++i) { v[i] = normal(rng); }
        return Vector(v.normalized() * log_uniform(rng, 1e-2, 1e1));
    };
    for (auto& row : rows) {
        auto& q = row.params;
        q.d = d;
        q.a = a;
        q.b = b;
        q.varrho1 = log_uniform(rng, 1e-2, 1e2);
        q.varrho2 = log_uniform(rng, 1e-2, 1e2);
        q.x = point();
        q.y = point();
    }
    parallel_for(rows.size(), [&](std::size_t k) { rows[k].value = convolution_oracle(rows[k].params); });
    return rows;
}

}  // namespace wedge
