#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wedge/errors.hpp"
#include "wedge/green.hpp"
#include "wedge/kernel.hpp"
#include "wedge/solver.hpp"

using namespace wedge;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SectorMesh> small_mesh(double theta0, const CoefficientPath& path, double t_end = 0.05) {
    MeshSpec m;
    m.r_min = 0.01;
    m.h = 0.05;
    m.r_max = 1.5;
    m.n_theta = 24;
    m.t_end = t_end;
    m.dt_min = m.dt_max = 0.005;
    return std::make_shared<const SectorMesh>(m.build(theta0, path));
}

// Max |a:D^2 u - exact| over interior nodes with r in [0.3, 1], for u = x^2 + 3xy - 2y^2 + x.
double stencil_error(double h, int n_theta) {
    const double theta0 = 2.0;
    MeshSpec m;
    m.r_min = 0.01;
    m.h = h;
    m.r_max = 1.5;
    m.n_theta = n_theta;
    m.t_end = 0.01;
    m.dt_min = m.dt_max = 0.01;
    Matrix a(2, 2);
    a << 1.3, 0.4, 0.4, 0.9;
    ProblemSpec spec;
    spec.path = CoefficientPath::constant(a);
    auto mesh = std::make_shared<const SectorMesh>(m.build(theta0, spec.path));
    WedgeSolver solver(spec, mesh);
    std::vector<double> u(mesh->node_count());
    for (std::size_t i = 0; i < mesh->nr(); ++i) {
        for (std::size_t j = 0; j < mesh->nt(); ++j) {
            const double x = mesh->x(i, j), y = mesh->y(i, j);
            u[mesh->index(i, j)] = x * x + 3 * x * y - 2 * y * y + x;
        }
    }
    const double exact = 2 * a(0, 0) + 2 * 3 * a(0, 1) - 4 * a(1, 1);
    const auto lu = solver.apply_operator(a, u);
    double worst = 0.0;
    for (std::size_t i = 0; i < mesh->nr(); ++i) {
        if (mesh->r(i) < 0.3 || mesh->r(i) > 1.0) { continue; }
        for (std::size_t j = 1; j + 1 < mesh->nt(); ++j) { worst = std::max(worst, std::abs(lu[mesh->index(i, j)] - exact)); }
    }
    return worst;
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("zero data gives the zero solution") {
        for (auto bc : {Boundary::dirichlet, Boundary::oblique}) {
            ProblemSpec spec;
            spec.bc = bc;
            const auto u = solve(spec, small_mesh(kPi / 2, spec.path));
            for (std::size_t k = 0; k < u.levels(); ++k) {
                for (double v : u.level(k)) { CHECK(v == 0.0); }
            }
        }
    }

    TEST_CASE("stencil is second order on quadratics, mixed term included") {
        const double coarse = stencil_error(0.04, 32);
        const double fine = stencil_error(0.02, 64);
        CHECK(coarse < 0.05);
        CHECK(fine < coarse / 3.0);
    }

    TEST_CASE("breakpoints must be time levels") {
        ProblemSpec spec;
        spec.path = CoefficientPath({-INFINITY, 0.0123, INFINITY}, {Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)});
        auto mesh = small_mesh(kPi / 2, CoefficientPath::identity(2));
        CHECK_THROWS_AS(solve(spec, mesh), ValidationError);
        CHECK_NOTHROW(solve(spec, small_mesh(kPi / 2, spec.path)));
    }

    TEST_CASE("Dirichlet solution: zero edges, symmetry, maximum principle") {
        ProblemSpec spec;
        spec.bc = Boundary::dirichlet;
        auto mesh = small_mesh(kPi / 2, spec.path, 0.1);
        const double c = std::cos(kPi / 4) * 0.5;
        std::vector<double> init(mesh->node_count(), 0.0);
        for (std::size_t i = 0; i < mesh->nr(); ++i) {
            for (std::size_t j = 1; j + 1 < mesh->nt(); ++j) {
                const double dx = mesh->x(i, j) - c, dy = mesh->y(i, j) - c;
                init[mesh->index(i, j)] = std::exp(-(dx * dx + dy * dy) / 0.02);
            }
        }
        spec.initial = init;
        const auto u = solve(spec, mesh);
        double peak0 = 0.0;
        for (double v : u.level(0)) { peak0 = std::max(peak0, v); }
        for (std::size_t k = 0; k < u.levels(); ++k) {
            for (std::size_t i = 0; i < mesh->nr(); ++i) {
                CHECK(u(k, i, 0) == 0.0);
                CHECK(u(k, i, mesh->nt() - 1) == 0.0);
                for (std::size_t j = 0; j < mesh->nt(); ++j) {
                    CHECK(u(k, i, j) <= peak0 * (1 + 1e-3));
                    CHECK(u(k, i, j) >= -1e-3 * peak0);
                    CHECK(std::abs(u(k, i, j) - u(k, i, mesh->nt() - 1 - j)) <= 1e-10 * peak0);
                }
            }
        }
    }

    TEST_CASE("grid CSV layout") {
        ProblemSpec spec;
        auto mesh = small_mesh(kPi / 2, spec.path);
        const auto u = solve(spec, mesh);
        const auto csv = grid_to_csv(u, 5);
        CHECK(csv.rfind("r,theta,t,value\n", 0) == 0);
        const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
        CHECK(lines == 1 + mesh->node_count() * ((u.levels() + 4) / 5));
    }
}

TEST_SUITE("green") {
    TEST_CASE("half-plane images, mass, positivity and domain monotonicity") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 1.5;
        a(1, 1) = 0.7;
        const CoefficientPath path({-INFINITY, 0.1, INFINITY}, {Matrix::Identity(2, 2), a});
        const Vector y{{0.0, 0.5}};
        MeshSpec ms;
        for (auto bc : {Boundary::dirichlet, Boundary::oblique}) {
            ProblemSpec spec;
            spec.bc = bc;
            spec.path = path;
            const auto table = green(spec, y, 0.0, NAN, ms, kPi);
            const auto d = compare_with(
                table, [&](double x1, double x2, double t) { return half_plane_images(path, bc, x1, x2, y, t, 0.0); },
                ComparisonRegion::standard(table.epsilon));
            CHECK(d.relative_l2 < 0.02);
            CHECK(d.points > 1000);
            const auto& m = table.mesh();
            for (std::size_t k = 0; k < table.u.levels(); k += 20) {
                double mass = 0.0, peak = 0.0, low = 0.0;
                const auto level = table.u.level(k);
                for (std::size_t q = 0; q < level.size(); ++q) {
                    mass += m.area_weights()[q] * level[q];
                    peak = std::max(peak, level[q]);
                    low = std::min(low, level[q]);
                }
                CHECK(mass <= 1.0 + 1e-3);
                CHECK(low >= -1e-3 * peak);
                if (bc == Boundary::dirichlet && k > 0) {
                    const double t = m.times()[k];
                    for (std::size_t i = 0; i < m.nr(); i += 7) {
                        for (std::size_t j = 1; j + 1 < m.nt(); j += 5) {
                            const Vector x{{m.x(i, j), m.y(i, j)}};
                            // Peak discretization error reaches ~3% on the early levels.
                            CHECK(table.u(k, i, j) <= 1.05 * gamma(path, as_span(x), as_span(y), t, 0.0) + 1e-3 * peak);
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("preconditions") {
        ProblemSpec spec;
        MeshSpec ms;
        CHECK_THROWS_AS(green(spec, Vector{{0.5, 0.05}}, 0.0, NAN, ms, kPi / 2), ValidationError);
        CHECK_THROWS_AS(green(spec, Vector{{0.5, 0.5}}, 0.0, 1e-4, ms, kPi / 2), ValidationError);
    }
}
