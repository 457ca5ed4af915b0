#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "wedge/appendix.hpp"
#include "wedge/errors.hpp"

using namespace wedge;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) { out[k++] = x; }
    return out;
}

// Double-exponential quadrature of the axis integral, independent of the panels.
double axis_reference(const AxisIntegralParams& p) {
    const double phi = p.phi(p.varrho1);
    auto f = [&](double u) {
        const double z = p.x1 + u;
        const double az = std::abs(z);
        const double g = (z - p.y1) / p.varrho2;
        return std::pow((p.varrho1 + az) / (p.varrho1 + p.varrho2 + az), -p.a) *
               std::pow((p.varrho1 + az) / (z - phi), p.b) * std::pow(p.varrho2 / (z - phi), p.c) * std::exp(-g * g) /
               p.varrho2;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

double convolution_reference_1d(const ConvolutionParams& p) {
    const double s1 = std::sqrt(p.varrho1), s2 = std::sqrt(p.varrho2);
    auto f = [&](double z) {
        const double az = std::abs(z);
        return std::exp(-(p.x[0] - z) * (p.x[0] - z) / p.varrho1 - (z - p.y[0]) * (z - p.y[0]) / p.varrho2) *
               std::pow(az / (az + s1), p.a) * std::pow(az / (az + s2), p.b);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double inf = std::numeric_limits<double>::infinity();
    return integrator.integrate(f, -inf, 0.0) + integrator.integrate(f, 0.0, inf);
}

}  // namespace

TEST_SUITE("appendix") {
    TEST_CASE("axis integral: plain Gaussian half line") {
        AxisIntegralParams p;
        p.varrho2 = 0.7;
        p.x1 = 0.3;
        p.y1 = 0.3;
        const auto v = axis_integral_oracle(p);
        CHECK(v.lhs == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-12));
        CHECK(v.ratio == doctest::Approx(v.lhs / v.rhs));
    }

    TEST_CASE("axis integral agrees with double-exponential quadrature") {
        for (const auto& abc : {std::array{0.0, 0.0, 0.0}, std::array{0.5, 0.3, 0.4}, std::array{1.5, 0.0, 1.3},
                                std::array{0.2, 1.1, 0.0}}) {
            for (double gap : {1e-2, 0.3, 4.0}) {
                AxisIntegralParams p;
                p.a = abc[0];
                p.b = abc[1];
                p.c = abc[2];
                p.varrho1 = 0.5;
                p.varrho2 = 1.3;
                p.phi.slope = 0.8;
                p.x1 = p.phi(p.varrho1) + gap;
                p.y1 = p.x1 + 0.6;
                CHECK(axis_integral_oracle(p).lhs == doctest::Approx(axis_reference(p)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("axis integral decreases as x1 moves away") {
        AxisIntegralParams p;
        p.a = 0.4;
        p.b = 0.7;
        p.c = 0.2;
        p.phi.slope = 1.0;
        p.y1 = 0.0;
        double last = INFINITY;
        for (double x1 : {1.05, 1.2, 1.6, 2.5}) {
            p.x1 = x1;
            const double lhs = axis_integral_oracle(p).lhs;
            CHECK(lhs < last);
            last = lhs;
        }
    }

    TEST_CASE("axis integral preconditions") {
        AxisIntegralParams p;
        p.phi.slope = 1.0;
        p.x1 = 1.0;
        CHECK_NOTHROW(axis_integral_oracle(p));
        p.b = 0.5;
        CHECK_THROWS_AS(axis_integral_oracle(p), ValidationError);
        p.x1 = 2.0;
        p.varrho1 = 0.0;
        CHECK_THROWS_AS(axis_integral_oracle(p), ValidationError);
        p.varrho1 = 1.0;
        p.a = -0.1;
        CHECK_THROWS_AS(axis_integral_oracle(p), ValidationError);
        p.a = 0.0;
        p.eps = 0.0;
        CHECK_THROWS_AS(axis_integral_oracle(p), ValidationError);
    }

    TEST_CASE("convolution of unweighted Gaussians is closed form") {
        for (int d : {1, 2, 3, 5}) {
            ConvolutionParams p;
            p.d = d;
            p.varrho1 = 0.4;
            p.varrho2 = 2.5;
            p.x = Vector::Zero(d);
            p.y = Vector::Zero(d);
            CHECK(convolution_oracle(p).lhs == doctest::Approx(std::pow(kPi, 0.5 * d) *
                                                          std::pow(0.4 * 2.5 / 2.9, 0.5 * d)).epsilon(1e-8));
            p.x[0] = 0.7;
            p.y[d - 1] = -0.9;
            const double gap = (p.x - p.y).squaredNorm();
            const double expected = std::pow(kPi * 0.4 * 2.5 / 2.9, 0.5 * d) * std::exp(-gap / 2.9);
            CHECK(convolution_oracle(p).lhs == doctest::Approx(expected).epsilon(1e-8));
        }
        ConvolutionParams unit;
        unit.d = 3;
        unit.x = Vector::Zero(3);
        unit.y = Vector::Zero(3);
        unit.varrho1 = 2.0;
        unit.varrho2 = 2.0;
        CHECK(convolution_oracle(unit).lhs == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-8));
    }

    TEST_CASE("weighted convolution in one dimension") {
        for (const auto& ab : {std::array{0.5, -0.3}, std::array{-0.4, -0.4}, std::array{1.5, 2.0}}) {
            ConvolutionParams p;
            p.d = 1;
            p.a = ab[0];
            p.b = ab[1];
            p.varrho1 = 0.6;
            p.varrho2 = 1.7;
            p.x = vec({0.4});
            p.y = vec({-1.1});
            CHECK(convolution_oracle(p).lhs == doctest::Approx(convolution_reference_1d(p)).epsilon(1e-8));
        }
    }

    TEST_CASE("convolution is symmetric under swapping the factors") {
        ConvolutionParams p;
        p.d = 2;
        p.a = 0.7;
        p.b = -0.5;
        p.varrho1 = 0.3;
        p.varrho2 = 4.0;
        p.x = vec({0.5, -0.2});
        p.y = vec({-1.0, 2.0});
        ConvolutionParams q = p;
        std::swap(q.a, q.b);
        std::swap(q.varrho1, q.varrho2);
        std::swap(q.x, q.y);
        const auto v = convolution_oracle(p), w = convolution_oracle(q);
        CHECK(v.lhs == doctest::Approx(w.lhs).epsilon(1e-10));
        CHECK(v.rhs == doctest::Approx(w.rhs).epsilon(1e-12));
    }

    TEST_CASE("convolution preconditions") {
        ConvolutionParams p;
        p.d = 2;
        p.x = Vector::Zero(2);
        p.y = Vector::Zero(1);
        CHECK_THROWS_AS(convolution_oracle(p), ValidationError);
        p.y = Vector::Zero(2);
        p.a = -2.5;
        CHECK_THROWS_AS(convolution_oracle(p), ValidationError);
        p.inner_cutoff = 0.1;
        CHECK_NOTHROW(convolution_oracle(p));
        p.d = 0;
        CHECK_THROWS_AS(convolution_oracle(p), ValidationError);
    }

    TEST_CASE("sweeps are nested and deterministic") {
        const auto small = axis_integral_sweep(10, 5, 1.0, std::array{0.5, 0.5, 0.5});
        const auto large = axis_integral_sweep(20, 5, 1.0, std::array{0.5, 0.5, 0.5});
        for (std::size_t k = 0; k < small.size(); ++k) { CHECK(small[k].value.ratio == large[k].value.ratio); }
        const auto conv = convolution_sweep(2, 0.3, 0.4, 8, 9);
        CHECK(conv.size() == 8);
        CHECK(convolution_sweep(2, 0.3, 0.4, 8, 9)[7].value.lhs == conv[7].value.lhs);
        const std::vector<double> ratios{1.0, 2.0, 0.5, 4.0};
        const auto c = sweep_constant(ratios);
        CHECK(c.C_full == 4.0);
        CHECK(c.C_half == 2.0);
        CHECK(c.drift == doctest::Approx(0.5));
    }
}
