#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wedge/errors.hpp"
#include "wedge/kernel.hpp"
#include "wedge/quadrature.hpp"

using namespace wedge;

namespace {

constexpr double kPi = std::numbers::pi;

double g(const CoefficientPath& p, const Vector& x, const Vector& y, double t, double s) {
    return gamma(p, as_span(x), as_span(y), t, s);
}

CoefficientPath two_piece() {
    Matrix a(2, 2);
    a << 1.5, 0.3, 0.3, 0.7;
    return {{-INFINITY, 0.4, INFINITY}, {Matrix::Identity(2, 2), a}};
}

}  // namespace

TEST_SUITE("kernel") {
    TEST_CASE("peak values") {
        const Vector o = Vector::Zero(2);
        CHECK(g(CoefficientPath::identity(2), o, o, 1.0, 0.0) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-15));
        CHECK(g(CoefficientPath::constant(2.0 * Matrix::Identity(2, 2)), o, o, 1.0, 0.0) ==
              doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-15));
        CHECK(g(CoefficientPath::identity(2), o, o, 0.0, 1.0) == 0.0);
        CHECK(g(CoefficientPath::identity(2), o, o, 1.0, 1.0) == 0.0);
    }

    TEST_CASE("one-dimensional second derivative at the peak") {
        const Vector o = Vector::Zero(1);
        const double v = gamma_deriv(CoefficientPath::identity(1), {2}, {0}, false, as_span(o), as_span(o), 1.0, 0.0);
        CHECK(v == doctest::Approx(-0.5 / std::sqrt(4.0 * kPi)).epsilon(1e-14));
    }

    TEST_CASE("gradient vanishes at x = y") {
        const auto p = two_piece();
        const Vector x{{0.3, -0.2}};
        CHECK(gamma_deriv(p, {1, 0}, {0, 0}, false, as_span(x), as_span(x), 1.0, 0.0) == 0.0);
        CHECK(gamma_deriv(p, {0, 1}, {0, 0}, false, as_span(x), as_span(x), 1.0, 0.0) == 0.0);
    }

    TEST_CASE("plain derivative call equals gamma") {
        const auto p = two_piece();
        const Vector x{{0.3, -0.2}}, y{{-0.1, 0.4}};
        CHECK(gamma_deriv(p, {0, 0}, {0, 0}, false, as_span(x), as_span(y), 1.2, 0.1) == g(p, x, y, 1.2, 0.1));
    }

    TEST_CASE("s-derivative is undefined at a breakpoint") {
        const auto p = two_piece();
        const Vector x{{0.3, -0.2}}, y{{-0.1, 0.4}};
        CHECK_THROWS_AS(gamma_deriv(p, {0, 0}, {0, 0}, true, as_span(x), as_span(y), 1.0, 0.4), ValidationError);
        CHECK_NOTHROW(gamma_deriv(p, {0, 0}, {0, 0}, true, as_span(x), as_span(y), 1.0, 0.3));
    }

    TEST_CASE("translation invariance and parabolic scaling") {
        const auto p = CoefficientPath::constant(two_piece().at(1.0));
        const Vector x{{0.3, -0.2}}, y{{-0.1, 0.4}}, shift{{5.0, -3.0}};
        CHECK(g(p, x + shift, y + shift, 0.7, 0.2) == doctest::Approx(g(p, x, y, 0.7, 0.2)).epsilon(1e-13));
        const double lam = 2.5;
        CHECK(g(p, lam * x, lam * y, lam * lam * 0.7, lam * lam * 0.2) ==
              doctest::Approx(g(p, x, y, 0.7, 0.2) / (lam * lam)).epsilon(1e-13));
    }

    TEST_CASE("finite-difference oracle, first and second order") {
        const auto p = two_piece();
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        const double h = 1e-4;
        for (int trial = 0; trial < 25; ++trial) {
            const Vector x{{u(rng), u(rng)}}, y{{u(rng), u(rng)}};
            const double t = 1.0 + 0.5 * u(rng), s = 0.1;
            for (int i = 0; i < 2; ++i) {
                Vector e = Vector::Zero(2);
                e[i] = h;
                MultiIndex a{0, 0};
                a[i] = 1;
                const double fd = (g(p, x + e, y, t, s) - g(p, x - e, y, t, s)) / (2 * h);
                const double an = gamma_deriv(p, a, {0, 0}, false, as_span(x), as_span(y), t, s);
                CHECK(std::abs(fd - an) <= 1e-7 * (std::abs(an) + g(p, y, y, t, s)));
                const double fd2 = (g(p, x + e, y, t, s) - 2 * g(p, x, y, t, s) + g(p, x - e, y, t, s)) / (h * h);
                MultiIndex a2{0, 0};
                a2[i] = 2;
                const double an2 = gamma_deriv(p, a2, {0, 0}, false, as_span(x), as_span(y), t, s);
                CHECK(std::abs(fd2 - an2) <= 1e-5 * (std::abs(an2) + g(p, y, y, t, s)));
                const double fdy = (g(p, x, y + e, t, s) - g(p, x, y - e, t, s)) / (2 * h);
                CHECK(gamma_deriv(p, {0, 0}, a, false, as_span(x), as_span(y), t, s) ==
                      doctest::Approx(fdy).epsilon(1e-6).scale(g(p, y, y, t, s)));
            }
            const double fds = (g(p, x, y, t, s + h) - g(p, x, y, t, s - h)) / (2 * h);
            CHECK(gamma_deriv(p, {0, 0}, {0, 0}, true, as_span(x), as_span(y), t, s) ==
                  doctest::Approx(fds).epsilon(1e-6).scale(g(p, y, y, t, s)));
        }
    }

    TEST_CASE("block-diagonal coefficients factorize the kernel") {
        Matrix a = Matrix::Zero(3, 3);
        a.topLeftCorner(2, 2) << 1.4, 0.2, 0.2, 0.8;
        a(2, 2) = 1.7;
        const auto p = CoefficientPath::constant(a);
        const auto p2 = CoefficientPath::constant(a.topLeftCorner(2, 2));
        const auto p1 = CoefficientPath::constant(a.bottomRightCorner(1, 1));
        const Vector x{{0.3, -0.2, 0.5}}, y{{-0.1, 0.4, -0.3}};
        const double whole = g(p, x, y, 0.9, 0.0);
        const double product = g(p2, x.head(2), y.head(2), 0.9, 0.0) * g(p1, x.tail(1), y.tail(1), 0.9, 0.0);
        CHECK(std::abs(whole - product) < 1e-12 * whole);
    }

    TEST_CASE("unit mass under tensor quadrature") {
        const auto p = two_piece();
        const Vector x{{0.2, 0.1}};
        const QuadratureRule axis = composite_gauss_legendre(-16.0, 16.0, 16);
        const double mass = tensor_integrate({axis, axis}, [&](std::span<const double> y) {
            return gamma(p, as_span(x), y, 1.0, 0.0);
        });
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("Gaussian bound fit") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<SpaceTimePair> cloud;
        for (int k = 0; k < 400; ++k) {
            const double t = 0.05 + 0.5 * (u(rng) + 1.0);
            cloud.push_back({Vector{{u(rng), u(rng)}}, Vector{{u(rng), u(rng)}}, t, 0.0});
        }
        const auto id = verify_gaussian_bound(CoefficientPath::identity(2), {0, 0}, {0, 0}, false, cloud);
        CHECK(id.C_emp == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
        CHECK(id.sigma_emp == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(id.stable);
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = 2.0;
        d(1, 1) = 0.5;
        const auto aniso = verify_gaussian_bound(CoefficientPath::constant(d), {0, 0}, {0, 0}, false, cloud);
        CHECK(std::isfinite(aniso.C_emp));
        CHECK(aniso.sigma_emp >= 0.125 - 1e-12);
        const auto grad = verify_gaussian_bound(CoefficientPath::identity(2), {1, 0}, {0, 0}, false, cloud);
        CHECK(std::isfinite(grad.C_emp));
        CHECK(grad.sigma_emp > 0.0);
        CHECK(grad.sigma_emp < 0.3);
        CHECK_THROWS_AS(verify_gaussian_bound(CoefficientPath::identity(2), {0, 0}, {0, 0}, false, {}), ValidationError);
    }
}
