#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wedge/errors.hpp"
#include "wedge/norms.hpp"

using namespace wedge;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SectorMesh> mesh_for_norms() {
    return std::make_shared<const SectorMesh>(std::vector<double>{0.1, 0.2, 0.4, 0.7, 1.0}, kPi / 2, 6,
                                              std::vector<double>{0.0, 0.1, 0.3, 0.6});
}

GridFunction random_field(const std::shared_ptr<const SectorMesh>& mesh, std::uint64_t seed) {
    GridFunction u(mesh, Boundary::oblique);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (std::size_t k = 0; k < mesh->times().size(); ++k) {
        std::vector<double> level(mesh->node_count());
        for (double& v : level) { v = d(rng); }
        u.append(level);
    }
    return u;
}

// Intervals written out from their definitions.
MuInterval whole(double p, int m) { return {-m / p, m - m / p}; }
MuInterval oblique_ref(double p, int m, double lp, double lm) {
    return {-m / p + std::max(1.0 - lp, 0.0), m - m / p - std::max(1.0 - lm, 0.0)};
}

}  // namespace

TEST_SUITE("norms") {
    TEST_CASE("zero field has zero norm") {
        auto mesh = mesh_for_norms();
        GridFunction u(mesh, Boundary::oblique);
        for (std::size_t k = 0; k < mesh->times().size(); ++k) { u.append(std::vector<double>(mesh->node_count(), 0.0)); }
        CHECK(weighted_norm(u, {2, 3, 0.5, NormVariant::pq}, 0.5) == 0.0);
        CHECK(weighted_norm(u, {2, 3, 0.5, NormVariant::tilde_pq}, 0.5) == 0.0);
    }

    TEST_CASE("variants agree when p = q") {
        auto mesh = mesh_for_norms();
        const auto u = random_field(mesh, 7);
        for (double p : {1.5, 2.0, 3.5}) {
            for (double e : {-0.7, 0.0, 1.3}) {
                const double a = weighted_norm(u, {p, p, e, NormVariant::pq}, e);
                const double b = weighted_norm(u, {p, p, e, NormVariant::tilde_pq}, e);
                CHECK(a == doctest::Approx(b).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("single node: closed-form quadrature") {
        auto mesh = mesh_for_norms();
        GridFunction u(mesh, Boundary::oblique);
        const std::size_t node = mesh->index(2, 3);
        for (std::size_t k = 0; k < mesh->times().size(); ++k) {
            std::vector<double> level(mesh->node_count(), 0.0);
            if (k == 2) { level[node] = 2.0; }
            u.append(level);
        }
        // trapezoid weight of node (r = 0.4, interior angle): r * (0.7 - 0.2)/2 * dtheta
        const double w = 0.4 * 0.25 * (kPi / 2) / 6;
        const double dt = 0.2;  // step ending at level 2
        const double mu = 0.8, p = 2.0, q = 3.0;
        const double expected = std::pow(dt, 1.0 / q) * std::pow(w, 1.0 / p) * std::pow(0.4, mu) * 2.0;
        CHECK(weighted_norm(u, {p, q, mu, NormVariant::pq}, mu) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(weighted_norm(u, {p, q, mu, NormVariant::tilde_pq}, mu) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(mesh->area_weights()[node] == doctest::Approx(w).epsilon(1e-14));
    }

    TEST_CASE("norm exponents are validated") {
        CHECK_THROWS_AS(WeightedNormSpec({1.0, 2.0, 0.0, NormVariant::pq}).validate(), ValidationError);
        CHECK_THROWS_AS(WeightedNormSpec({2.0, INFINITY, 0.0, NormVariant::pq}).validate(), ValidationError);
    }

    TEST_CASE("interval examples") {
        CHECK(format_interval(mu_interval(IntervalKind::oblique, 2, 2, 1, 1)) == "(-1, 1)");
        const auto d = mu_interval(IntervalKind::dirichlet_2nd, 2, 2, 1, 1);
        CHECK(d.lo == doctest::Approx(0.0));
        CHECK(d.hi == doctest::Approx(2.0));
        CHECK(MuInterval{1.0, 1.0}.empty());
        CHECK_FALSE(mu_interval(IntervalKind::oblique, 2, 2, 0.05, 0.05).empty());
        CHECK_THROWS_AS(mu_interval(IntervalKind::oblique, 2, 2, 0.0, 1.0), ValidationError);
        CHECK(interval_kind_from_string("dirichlet_1st") == IntervalKind::dirichlet_1st);
        CHECK_THROWS_AS(interval_kind_from_string("neumann"), ValidationError);
    }

    TEST_CASE("interval properties") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            const int m = 2 + k % 3;
            const double p = 1.05 + 5 * u(rng), lp = 0.05 + 3 * u(rng), lm = 0.05 + 3 * u(rng);
            const auto ob = mu_interval(IntervalKind::oblique, p, m, lp, lm);
            const auto ws = mu_interval(IntervalKind::whole_space, p, m, lp, lm);
            const auto ref = oblique_ref(p, m, lp, lm);
            CHECK(ob.lo == doctest::Approx(ref.lo).epsilon(1e-14));
            CHECK(ob.hi == doctest::Approx(ref.hi).epsilon(1e-14));
            CHECK(ws.lo == doctest::Approx(whole(p, m).lo));
            CHECK(ws.hi == doctest::Approx(whole(p, m).hi));
            CHECK(ob.lo >= ws.lo);
            CHECK(ob.hi <= ws.hi);
            if (lp >= 1 && lm >= 1) {
                CHECK(ob.lo == ws.lo);
                CHECK(ob.hi == ws.hi);
            }
            for (auto kind : {IntervalKind::dirichlet_2nd, IntervalKind::dirichlet_1st, IntervalKind::oblique}) {
                const auto narrow = mu_interval(kind, p, m, lp, lm);
                const auto wide = mu_interval(kind, p, m, lp + 0.3, lm + 0.2);
                CHECK(wide.lo <= narrow.lo);
                CHECK(wide.hi >= narrow.hi);
            }
        }
    }

    TEST_CASE("cartesian derivatives of a quadratic") {
        MeshSpec ms;
        ms.r_min = 0.05;
        ms.h = 0.02;
        ms.r_max = 1.0;
        ms.n_theta = 64;
        const auto mesh = ms.build(2.0, CoefficientPath::identity(2));
        std::vector<double> u(mesh.node_count());
        for (std::size_t i = 0; i < mesh.nr(); ++i) {
            for (std::size_t j = 0; j < mesh.nt(); ++j) {
                const double x = mesh.x(i, j), y = mesh.y(i, j);
                u[mesh.index(i, j)] = 0.5 * x * x - x * y + 2 * y * y + 3 * x;
            }
        }
        const auto d = cartesian_derivatives(mesh, u);
        const std::size_t i = mesh.radial_cell(0.5), j = mesh.nt() / 2;
        const std::size_t k = mesh.index(i, j);
        const double x = mesh.x(i, j), y = mesh.y(i, j);
        CHECK(d.ux[k] == doctest::Approx(x - y + 3).epsilon(1e-3));
        CHECK(d.uy[k] == doctest::Approx(-x + 4 * y).epsilon(1e-3));
        CHECK(d.uxx[k] == doctest::Approx(1.0).epsilon(1e-2));
        CHECK(d.uxy[k] == doctest::Approx(-1.0).epsilon(1e-2));
        CHECK(d.uyy[k] == doctest::Approx(4.0).epsilon(1e-2));
    }

    TEST_CASE("coercive ratio is invariant under parabolic dilation") {
        for (auto data : {CoerciveData::gaussian_bump, CoerciveData::vertex_power}) {
            CoerciveSetup base;
            base.data = data;
            base.norm.mu = 0.4;
            base.mesh.t_end = 0.1;
            CoerciveSetup scaled = base;
            const double L = 2.0;
            scaled.length_scale = L;
            scaled.mesh.r_min *= L;
            scaled.mesh.h *= L;
            scaled.mesh.r_max *= L;
            scaled.mesh.t_end *= L * L;
            scaled.mesh.dt_min *= L * L;
            scaled.mesh.dt_max *= L * L;
            CHECK(coercive_ratio(scaled) == doctest::Approx(coercive_ratio(base)).epsilon(1e-8));
        }
    }

    TEST_CASE("refinement ladder and sweep plumbing") {
        const auto base = coercive_mesh();
        const auto two = refine(base, 2);
        CHECK(two.r_min == doctest::Approx(base.r_min / 1024));
        CHECK(two.h == doctest::Approx(base.h / 2));
        CHECK(two.n_theta == 2 * base.n_theta);
        CHECK(two.dt_min == doctest::Approx(base.dt_min / 4));
        CHECK(refine(base, 1).n_theta == 34);
        CHECK(sweep_mu(CoerciveSetup{}, {}, 2).empty());
        CHECK(sweep_to_csv({}) == "mu,level,ratio,flag\n");
        CHECK_THROWS_AS(refine(base, -1), ValidationError);
    }
}
