#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "wedge/bounds.hpp"
#include "wedge/errors.hpp"

using namespace wedge;

namespace {

constexpr double kPi = std::numbers::pi;

struct Pair {
    Vector x{2};
    Vector y{2};
    double t = 0.0;
    double s = 0.0;
};

// Random points of the quarter plane, away from the edges.
std::vector<Pair> quarter_pairs(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.05, kPi / 2 - 0.05);
    std::uniform_real_distribution<double> logr(std::log(0.05), std::log(2.0));
    std::vector<Pair> out(count);
    for (auto& p : out) {
        const double rx = std::exp(logr(rng)), tx = angle(rng);
        const double ry = std::exp(logr(rng)), ty = angle(rng);
        p.x << rx * std::cos(tx), rx * std::sin(tx);
        p.y << ry * std::cos(ty), ry * std::sin(ty);
        p.s = 0.1;
        p.t = p.s + std::exp(logr(rng)) * 0.3;
    }
    return out;
}

// Quarter-plane geometry written out directly.
struct Local {
    double R;  // |x| / (|x| + sqrt tau)
    double r;  // dist(x, edges) / |x|
    double norm;
};
Local local(const Vector& x, double tau) {
    const double norm = x.norm();
    return {norm / (norm + std::sqrt(tau)), std::min(x[0], x[1]) / norm, norm};
}

// Squared distance with the bisector component removed.
double across_axis2(const Vector& x, const Vector& y) {
    const double dx = (x[1] - x[0]) - (y[1] - y[0]);
    return dx * dx / 2.0;
}

double pos(double a) { return std::max(a, 0.0); }
double neg(double a) { return std::min(a, 0.0); }

double eval(const BoundEnvelope& env, const Pair& p, const WedgeDomain& domain) {
    return envelope_eval(env, as_span(p.x), as_span(p.y), p.t, p.s, domain);
}

}  // namespace

TEST_SUITE("bounds") {
    TEST_CASE("a pure Gaussian envelope") {
        const auto domain = make_sector(kPi / 2);
        BoundEnvelope env;
        env.terms = {EnvelopeTerm{}};
        env.sigma = 0.3;
        env.C = 2.5;
        for (const auto& p : quarter_pairs(20, 3)) {
            const double tau = p.t - p.s;
            CHECK(eval(env, p, domain) == doctest::Approx(2.5 * std::exp(-0.3 * (p.x - p.y).squaredNorm() / tau)));
        }
    }

    TEST_CASE("envelope preconditions") {
        const auto domain = make_sector(kPi / 2);
        BoundEnvelope env;
        env.terms = {EnvelopeTerm{}};
        Vector x(2), y(2), out(2), short_vec(1);
        x << 0.3, 0.4;
        y << 0.5, 0.2;
        out << -0.3, 0.4;
        CHECK_THROWS_AS(envelope_eval(env, as_span(x), as_span(y), 1.0, 1.0, domain), ValidationError);
        CHECK_THROWS_AS(envelope_eval(env, as_span(out), as_span(y), 1.0, 0.0, domain), ValidationError);
        CHECK_THROWS_AS(envelope_eval(env, as_span(short_vec), as_span(y), 1.0, 0.0, domain), ValidationError);
        env.terms.clear();
        CHECK_THROWS_AS(envelope_eval(env, as_span(x), as_span(y), 1.0, 0.0, domain), ValidationError);
    }

    TEST_CASE("whole-space presets") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.alpha = 1;
        q.beta = 2;
        q.sigma = 0.2;
        for (const auto& p : quarter_pairs(3, 5)) {
            const double tau = p.t - p.s;
            const double g = std::exp(-0.2 * (p.x - p.y).squaredNorm() / tau);
            CHECK(eval(make_preset(Preset::whole_space, q), p, domain) == doctest::Approx(std::pow(tau, -2.5) * g));
            CHECK(eval(make_preset(Preset::whole_space_ds, q), p, domain) == doctest::Approx(std::pow(tau, -3.5) * g));
        }
    }

    TEST_CASE("dirichlet presets against direct formulas") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.alpha = 2;
        q.beta = 1;
        q.lambda_plus = 2.0;
        q.lambda_minus = 2.0;
        q.eps = 0.1;
        q.sigma = 0.125;
        for (const auto& p : quarter_pairs(3, 11)) {
            const double tau = p.t - p.s;
            const auto gx = local(p.x, tau), gy = local(p.y, tau);
            const double g = std::exp(-0.125 * (p.x - p.y).squaredNorm() / tau);
            const double plain = std::pow(gx.R, 2.0 - 2) * std::pow(gy.R, 2.0 - 1) * std::pow(gx.r, -pos(2 - 2 + 0.1)) *
                                 std::pow(gy.r, -pos(1 - 2 + 0.1)) * std::pow(tau, -(2 + 2 + 1) / 2.0) * g;
            CHECK(eval(make_preset(Preset::dirichlet, q), p, domain) == doctest::Approx(plain).epsilon(1e-12));
            const double ds = std::pow(gx.R, 0.0) * std::pow(gx.r, -0.1) * std::pow(gy.R, 2.0 - 1 - 2) *
                              std::pow(gy.r, -(1 + 0.1)) * std::pow(tau, -(2 + 2 + 1 + 2) / 2.0) * g;
            CHECK(eval(make_preset(Preset::dirichlet_ds, q), p, domain) == doctest::Approx(ds).epsilon(1e-12));
        }
    }

    TEST_CASE("oblique presets against direct formulas") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.alpha = 3;
        q.beta = 2;
        q.lambda_plus = 1.2;
        q.lambda_minus = 1.7;
        q.eps = 0.2;
        q.sigma = 0.1;
        for (const auto& p : quarter_pairs(3, 13)) {
            const double tau = p.t - p.s;
            const auto gx = local(p.x, tau), gy = local(p.y, tau);
            const double g = std::exp(-0.1 * across_axis2(p.x, p.y) / tau);
            const double common_x = std::pow(gx.R, neg(1.2 - 3 + 1)) * std::pow(gx.r, -pos(3 - 3 + 0.2)) *
                                    std::pow(1 - gx.R, -std::min(1.0, pos(3 - 2 + 0.2)));
            const double plain = common_x * std::pow(gy.R, 1.7 - 2 - 1) * std::pow(gy.r, -pos(2 - 1 + 0.2)) *
                                 std::pow(tau, -(2 + 3 + 2) / 2.0) * g;
            CHECK(eval(make_preset(Preset::oblique, q), p, domain) == doctest::Approx(plain).epsilon(1e-12));
            const double ds = common_x * std::pow(gy.R, 1.7 - 2 - 3) * std::pow(gy.r, -(2 + 1 + 0.2)) *
                              std::pow(tau, -(2 + 3 + 2 + 2) / 2.0) * g;
            CHECK(eval(make_preset(Preset::oblique_ds, q), p, domain) == doctest::Approx(ds).epsilon(1e-12));
        }
    }

    TEST_CASE("oblique difference preset against direct formula") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.alpha = 2;
        q.beta = 1;
        q.lambda_plus = 1.5;
        q.lambda_minus = 0.8;
        q.eps = 0.05;
        q.sigma = 0.125;
        for (const auto& p : quarter_pairs(3, 17)) {
            const double tau = p.t - p.s;
            const auto gx = local(p.x, tau), gy = local(p.y, tau);
            const double e = 0.05;
            const double g = std::exp(-0.125 * (p.x - p.y).squaredNorm() / tau);
            const double lead = std::pow(gx.R, neg(1.5 - 2));
            const double first = lead * std::pow(tau, -(2 + 2 + 1) / 2.0 + 0.5 + e) * std::pow(gx.norm, -(1 + e)) *
                                 std::pow(gx.r, -(1 + 3 * e)) * std::pow(gy.norm, -e) * std::pow(gy.r, -e);
            const double second = lead * std::pow(gy.R, neg(0.8 - 1) - 1) * std::pow(tau, -(2 + 2 + 1) / 2.0 + 0.5 + 1) *
                                  std::pow(gx.norm, -1.0) * std::pow(gx.r, -(1 + 2 * e)) * std::pow(gy.norm, -2.0) *
                                  std::pow(gy.r, -3.0);
            CHECK(eval(make_preset(Preset::oblique_difference, q), p, domain) ==
                  doctest::Approx((first + second) * g).epsilon(1e-12));
        }
        q.alpha = 1;
        CHECK_THROWS_AS(make_preset(Preset::oblique_difference, q), ValidationError);
    }

    TEST_CASE("operator hypothesis presets") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.lambda1 = 0.5;
        q.lambda2 = 0.7;
        q.mu = 0.3;
        q.r = 1.5;
        q.eps1 = 0.2;
        q.eps2 = 0.4;
        q.kappa = 0.5;
        q.delta = 0.25;
        for (const auto& p : quarter_pairs(3, 19)) {
            const double tau = p.t - p.s;
            const auto gx = local(p.x, tau), gy = local(p.y, tau);
            const double base = std::pow(gx.R, 2.0) * std::pow(gy.R, 0.7) * std::pow(gx.norm, 0.3 - 1.5) *
                                std::pow(gy.norm, -0.3) * std::pow(gx.r, -0.2) * std::pow(gy.r, -0.4) *
                                std::pow(tau, -(2 + 2 - 1.5) / 2.0) * std::exp(-0.125 * (p.x - p.y).squaredNorm() / tau);
            CHECK(eval(make_preset(Preset::operator_hypothesis, q), p, domain) == doctest::Approx(base).epsilon(1e-12));
            CHECK(eval(make_preset(Preset::operator_hypothesis_delta, q), p, domain) ==
                  doctest::Approx(base * 0.5 / std::sqrt(tau)).epsilon(1e-12));
        }
        q.r = 2.5;
        CHECK_THROWS_AS(make_preset(Preset::operator_hypothesis, q), ValidationError);
    }

    TEST_CASE("weight commutator splits into monomials") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.sigma = 0.25;
        for (double mu : {-1.6, -0.5, 0.4, 1.8}) {
            q.mu = mu;
            const auto env = make_preset(Preset::weight_commutator, q);
            CHECK(env.sigma == doctest::Approx(0.125));
            const double r = std::min(std::abs(mu), 1.0);
            for (const auto& p : quarter_pairs(2, 23)) {
                const double tau = p.t - p.s;
                const double ratio = p.x.norm() / p.y.norm();
                double phi = 1.0;
                if (mu > 1) {
                    phi = std::pow(ratio, mu) + ratio;
                } else if (mu > 0) {
                    phi = std::pow(ratio, mu);
                } else if (mu < -1) {
                    phi = std::pow(ratio, mu + 1) + 1.0;
                }
                const double expected = std::pow(p.x.norm(), -r) * phi * std::pow(tau, -(2 + 2 - r) / 2.0) *
                                        std::exp(-0.125 * (p.x - p.y).squaredNorm() / tau);
                CHECK(eval(env, p, domain) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("preset names round trip") {
        for (const Preset p : all_presets()) { CHECK(preset_from_string(to_string(p)) == p); }
        CHECK(all_presets().size() == 12);
        CHECK_THROWS_AS(preset_from_string("nope"), ValidationError);
    }

    TEST_CASE("fitted constant is monotone in the cloud") {
        const auto domain = make_sector(kPi / 2);
        const auto env = make_preset(Preset::whole_space, PresetParams{});
        std::mt19937_64 rng(29);
        std::lognormal_distribution<double> noise(0.0, 0.5);
        std::vector<KernelSample> cloud;
        double last = 0.0;
        for (const auto& p : quarter_pairs(60, 31)) {
            KernelSample s;
            s.x = p.x;
            s.y = p.y;
            s.t = p.t;
            s.s = p.s;
            s.value = noise(rng) * eval(env, p, domain);
            cloud.push_back(s);
            const auto fit = fit_constant(cloud, env, domain);
            CHECK(fit.C_emp >= last);
            CHECK(fit.C_half <= fit.C_emp);
            last = fit.C_emp;
        }
        const auto fit = fit_constant(cloud, env, domain);
        CHECK(std::abs(cloud[fit.worst].value) / eval(env, quarter_pairs(60, 31)[fit.worst], domain) ==
              doctest::Approx(fit.C_emp));
        std::size_t above = 0;
        for (std::size_t k = 0; k < cloud.size(); ++k) {
            if (std::abs(cloud[k].value) > eval(env, quarter_pairs(60, 31)[k], domain)) { ++above; }
        }
        CHECK(fit.violations.size() == above);
    }

    TEST_CASE("exact envelope gives its own constant") {
        const auto domain = make_sector(kPi / 2);
        PresetParams q;
        q.alpha = 1;
        q.lambda_plus = 2;
        q.lambda_minus = 2;
        auto env = make_preset(Preset::dirichlet, q);
        env.C = 0.37;
        std::vector<KernelSample> cloud;
        for (const auto& p : quarter_pairs(40, 37)) {
            KernelSample s;
            s.x = p.x;
            s.y = p.y;
            s.t = p.t;
            s.s = p.s;
            s.value = -eval(env, p, domain);
            cloud.push_back(s);
        }
        const auto fit = fit_constant(cloud, env, domain);
        CHECK(fit.C_emp == doctest::Approx(0.37).epsilon(1e-12));
        CHECK(fit.stable);
        CHECK_FALSE(fit.failed);
        CHECK(fit.drift == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("vertex drift admits nested clouds") {
        const auto domain = make_sector(kPi / 2);
        const auto env = make_preset(Preset::whole_space, PresetParams{});
        std::vector<KernelSample> cloud;
        for (const auto& p : quarter_pairs(80, 41)) {
            KernelSample s;
            s.x = p.x;
            s.y = p.y;
            s.t = p.t;
            s.s = p.s;
            s.value = eval(env, p, domain) / p.x.norm();
            cloud.push_back(s);
        }
        const auto drift = vertex_drift(cloud, env, domain, {0.4, 0.2, 0.1});
        REQUIRE(drift.C_emp.size() == 3);
        CHECK(drift.counts[0] <= drift.counts[1]);
        CHECK(drift.counts[1] <= drift.counts[2]);
        CHECK(drift.C_emp[0] <= drift.C_emp[1]);
        CHECK(drift.growth() > 1.0);
        CHECK(default_vertex_cutoffs().size() == 5);
    }
}
