#include "wedge/green.hpp"

#include <cmath>
#include <numbers>

#include "wedge/errors.hpp"
#include "wedge/kernel.hpp"

namespace wedge {

double GreenTable::value(double x1, double x2, double t) const {
    const double r = std::hypot(x1, x2);
    double theta = std::atan2(x2, x1);
    if (theta < 0.0) { theta += 2.0 * std::numbers::pi; }
    const SectorMesh& m = u.mesh();
    if (theta > m.theta0() || r > m.r(m.nr() - 1)) { return 0.0; }
    return u.interpolate(r, theta, t);
}

GreenTable green(const ProblemSpec& spec, const Vector& y, double s, double epsilon, const MeshSpec& mesh_spec,
                 double theta0) {
    if (y.size() != 2) { throw ValidationError("source point must be planar"); }
    const auto domain = make_sector(theta0);
    const double dist = domain.distance(std::span<const double>(y.data(), 2));
    const double ry = y.norm();

    auto radii = graded_radii(mesh_spec.r_min, mesh_spec.q, mesh_spec.h, mesh_spec.r_max);
    const SectorMesh probe(radii, theta0, mesh_spec.n_theta, {s});
    const double cell = probe.local_cell(ry);
    if (std::isnan(epsilon)) { epsilon = 4.0 * cell; }
    if (epsilon < 3.0 * cell) { throw ValidationError("mollifier unresolved: width below three local cells"); }
    if (!(dist > 2.0 * epsilon)) { throw ValidationError("source point closer than two mollifier widths to the boundary"); }

    const double delta = 0.25 * epsilon * epsilon;
    const double t_end = s + (mesh_spec.t_end - mesh_spec.t_start);
    if (!(t_end > s + delta)) { throw ValidationError("time window shorter than the mollifier age"); }
    auto mesh = std::make_shared<const SectorMesh>(
        radii, theta0, mesh_spec.n_theta,
        time_levels(s + delta, t_end, mesh_spec.dt_min, mesh_spec.dt_max, mesh_spec.block_steps, spec.path));

    ProblemSpec local = spec;
    local.f0 = nullptr;
    local.flux = nullptr;
    local.initial.assign(mesh->node_count(), 0.0);
    const FrozenGaussian bump(integrate(spec.path, s, s + delta));
    double mass = 0.0;
    const auto& w = mesh->area_weights();
    for (std::size_t i = 0; i < mesh->nr(); ++i) {
        for (std::size_t j = 0; j < mesh->nt(); ++j) {
            const std::array<double, 2> z{mesh->x(i, j) - y[0], mesh->y(i, j) - y[1]};
            const double v = bump.value(z);
            local.initial[mesh->index(i, j)] = v;
            mass += w[mesh->index(i, j)] * v;
        }
    }
    if (!(mass > 0.0)) { throw NumericalError("mollified source has zero discrete mass"); }
    for (double& v : local.initial) { v /= mass; }

    GreenTable table{solve(local, mesh), y, s, epsilon, delta};
    return table;
}

bool ComparisonRegion::contains(double r, double age) const {
    if (!(age > min_age) || !(age > 0.0)) { return false; }
    const double R = r / (r + std::sqrt(age));
    return R >= R_lo && R <= R_hi;
}

Discrepancy compare_with(const GreenTable& table, const std::function<double(double, double, double)>& reference,
                         const ComparisonRegion& region) {
    const SectorMesh& m = table.mesh();
    const auto& times = m.times();
    const auto& w = m.area_weights();
    double num = 0.0;
    double den = 0.0;
    double sup_err = 0.0;
    double sup_ref = 0.0;
    Discrepancy d;
    for (std::size_t k = 1; k < table.u.levels(); ++k) {
        const double age = times[k] - table.s;
        const double wt = times[k] - times[k - 1];
        for (std::size_t i = 0; i < m.nr(); ++i) {
            if (!region.contains(m.r(i), age)) { continue; }
            for (std::size_t j = 0; j < m.nt(); ++j) {
                const double a = table.u(k, i, j);
                const double b = reference(m.x(i, j), m.y(i, j), times[k]);
                const double weight = wt * w[m.index(i, j)];
                num += weight * (a - b) * (a - b);
                den += weight * b * b;
                sup_err = std::max(sup_err, std::abs(a - b));
                sup_ref = std::max(sup_ref, std::abs(b));
                ++d.points;
            }
        }
    }
    if (d.points == 0) { throw ValidationError("comparison region contains no mesh points"); }
    if (!(den > 0.0)) { throw NumericalError("reference vanishes on the comparison region"); }
    d.relative_l2 = std::sqrt(num / den);
    d.relative_sup = sup_err / sup_ref;
    return d;
}

double half_plane_images(const CoefficientPath& path, Boundary bc, double x1, double x2, const Vector& y, double t,
                         double s) {
    const std::array<double, 2> x{x1, x2};
    const std::array<double, 2> yy{y[0], y[1]};
    const std::array<double, 2> ys{y[0], -y[1]};
    const double sign = bc == Boundary::dirichlet ? -1.0 : 1.0;
    return gamma(path, x, yy, t, s) + sign * gamma(path, x, ys, t, s);
}

}  // namespace wedge
