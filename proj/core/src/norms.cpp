#include "wedge/norms.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "wedge/errors.hpp"
#include "wedge/parallel.hpp"

namespace wedge {

void WeightedNormSpec::validate() const {
    if (!(p > 1.0 && std::isfinite(p) && q > 1.0 && std::isfinite(q))) {
        throw ValidationError("norm exponents p and q must be finite and > 1");
    }
}

NormAccumulator::NormAccumulator(const SectorMesh& mesh, WeightedNormSpec spec, double weight_exponent)
    : mesh_(&mesh), spec_(spec) {
    spec_.validate();
    const auto& area = mesh.area_weights();
    weight_.resize(mesh.node_count());
    radial_.resize(mesh.node_count());
    for (std::size_t i = 0; i < mesh.nr(); ++i) {
        const double w = std::pow(mesh.r(i), weight_exponent);
        for (std::size_t j = 0; j < mesh.nt(); ++j) {
            radial_[mesh.index(i, j)] = w;
            weight_[mesh.index(i, j)] = area[mesh.index(i, j)];
        }
    }
    if (spec_.variant == NormVariant::tilde_pq) { per_node_.assign(mesh.node_count(), 0.0); }
}

void NormAccumulator::add_level(double dt, std::span<const double> values) {
    if (values.size() != weight_.size()) { throw ValidationError("level size does not match mesh"); }
    if (spec_.variant == NormVariant::pq) {
        double space = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            space += weight_[k] * std::pow(radial_[k] * std::abs(values[k]), spec_.p);
        }
        total_ += dt * std::pow(space, spec_.q / spec_.p);
    } else {
        for (std::size_t k = 0; k < values.size(); ++k) {
            per_node_[k] += dt * std::pow(radial_[k] * std::abs(values[k]), spec_.q);
        }
    }
}

double NormAccumulator::result() const {
    if (spec_.variant == NormVariant::pq) { return std::pow(total_, 1.0 / spec_.q); }
    double space = 0.0;
    for (std::size_t k = 0; k < per_node_.size(); ++k) { space += weight_[k] * std::pow(per_node_[k], spec_.p / spec_.q); }
    return std::pow(space, 1.0 / spec_.p);
}

double weighted_norm(const GridFunction& u, const WeightedNormSpec& spec, double weight_exponent) {
    const SectorMesh& m = u.mesh();
    NormAccumulator acc(m, spec, weight_exponent);
    for (std::size_t k = 1; k < u.levels(); ++k) { acc.add_level(m.times()[k] - m.times()[k - 1], u.level(k)); }
    return acc.result();
}

const char* to_string(IntervalKind kind) {
    switch (kind) {
        case IntervalKind::whole_space: return "whole_space";
        case IntervalKind::dirichlet_2nd: return "dirichlet_2nd";
        case IntervalKind::dirichlet_1st: return "dirichlet_1st";
        case IntervalKind::oblique: return "oblique";
    }
    return "unknown";
}

IntervalKind interval_kind_from_string(const std::string& text) {
    if (text == "whole_space") { return IntervalKind::whole_space; }
    if (text == "dirichlet_2nd") { return IntervalKind::dirichlet_2nd; }
    if (text == "dirichlet_1st") { return IntervalKind::dirichlet_1st; }
    if (text == "oblique") { return IntervalKind::oblique; }
    throw ValidationError("interval kind must be whole_space, dirichlet_2nd, dirichlet_1st or oblique");
}

MuInterval mu_interval(IntervalKind kind, double p, int m, double lambda_plus, double lambda_minus) {
    if (!(p > 1.0) || !std::isfinite(p)) { throw ValidationError("p must be finite and > 1"); }
    if (m < 2) { throw ValidationError("m must be at least 2"); }
    if (!(lambda_plus > 0.0) || !(lambda_minus > 0.0)) { throw ValidationError("critical exponents must be positive"); }
    const double md = m;
    const double base = md / p;
    switch (kind) {
        case IntervalKind::whole_space: return {-base, md - base};
        case IntervalKind::dirichlet_2nd: return {2.0 - base - lambda_plus, md - base + lambda_minus};
        case IntervalKind::dirichlet_1st: return {1.0 - base - lambda_plus, md - 1.0 - base + lambda_minus};
        case IntervalKind::oblique:
            return {-base + std::max(1.0 - lambda_plus, 0.0), md - base - std::max(1.0 - lambda_minus, 0.0)};
    }
    throw ValidationError("unknown interval kind");
}

std::string format_interval(const MuInterval& interval) {
    char buffer[96];
    std::snprintf(buffer, sizeof(buffer), "(%.6g, %.6g)", interval.lo + 0.0, interval.hi + 0.0);
    return buffer;
}

Derivatives cartesian_derivatives(const SectorMesh& m, std::span<const double> u) {
    if (u.size() != m.node_count()) { throw ValidationError("field size does not match mesh"); }
    Derivatives d;
    for (auto* v : {&d.ux, &d.uy, &d.uxx, &d.uxy, &d.uyy}) { v->assign(m.node_count(), 0.0); }
    const double dt = m.dtheta();
    for (std::size_t i = 1; i + 1 < m.nr(); ++i) {
        const double r = m.r(i);
        const double hm = r - m.r(i - 1);
        const double hp = m.r(i + 1) - r;
        const std::array<double, 3> d1{-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
        const std::array<double, 3> d2{2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
        for (std::size_t j = 1; j + 1 < m.nt(); ++j) {
            auto at = [&](int a, int b) { return u[m.index(i + a, j + b)]; };
            double ur = 0.0;
            double urr = 0.0;
            double urt = 0.0;
            for (int a = -1; a <= 1; ++a) {
                ur += d1[a + 1] * at(a, 0);
                urr += d2[a + 1] * at(a, 0);
                urt += d1[a + 1] * (at(a, 1) - at(a, -1)) / (2.0 * dt);
            }
            const double ut = (at(0, 1) - at(0, -1)) / (2.0 * dt);
            const double utt = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (dt * dt);
            const double c = std::cos(m.theta(j));
            const double s = std::sin(m.theta(j));
            const std::size_t k = m.index(i, j);
            d.ux[k] = c * ur - s * ut / r;
            d.uy[k] = s * ur + c * ut / r;
            d.uxx[k] = c * c * urr - 2.0 * s * c * urt / r + s * s * utt / (r * r) + s * s * ur / r + 2.0 * s * c * ut / (r * r);
            d.uyy[k] = s * s * urr + 2.0 * s * c * urt / r + c * c * utt / (r * r) + c * c * ur / r - 2.0 * s * c * ut / (r * r);
            d.uxy[k] = s * c * urr + (c * c - s * s) * urt / r - s * c * utt / (r * r) - s * c * ur / r -
                       (c * c - s * s) * ut / (r * r);
        }
    }
    return d;
}

namespace {

double time_bump(double t, double t_start, double window) {
    const double support = window / 3.0;
    const double a = t - t_start;
    if (a <= 0.0 || a >= support) { return 0.0; }
    const double v = std::sin(std::numbers::pi * a / support);
    return v * v;
}

// Smooth cutoff equal to 1 on r < rho/2 and 0 on r > rho.
double vertex_cutoff(double r, double rho) {
    if (r <= 0.5 * rho) { return 1.0; }
    if (r >= rho) { return 0.0; }
    const double v = std::cos(0.5 * std::numbers::pi * (2.0 * r / rho - 1.0));
    return v * v;
}

}  // namespace

double coercive_ratio(const CoerciveSetup& setup) {
    setup.norm.validate();
    const double theta0 = setup.theta0;
    const double L = setup.length_scale;
    const double t_start = setup.mesh.t_start;
    const double window = setup.mesh.t_end - setup.mesh.t_start;
    const double mu = setup.norm.mu;
    const double p = setup.norm.p;
    const bool oblique = setup.bc == Boundary::oblique;
    // Weight carried by the forcing term in the denominator.
    const double data_weight = oblique ? mu : mu + 1.0;

    std::function<double(double, double)> spatial;
    if (setup.data == CoerciveData::gaussian_bump) {
        const double xc = 0.6 * L * std::cos(0.5 * theta0);
        const double yc = 0.6 * L * std::sin(0.5 * theta0);
        const double w = 0.2 * L;
        spatial = [=](double x, double y) {
            return std::exp(-((x - xc) * (x - xc) + (y - yc) * (y - yc)) / (2.0 * w * w));
        };
    } else {
        const double exponent = -data_weight - 2.0 / p + setup.eps_prime;
        const double rho = setup.vertex_radius * L;
        spatial = [=](double x, double y) {
            const double r = std::hypot(x, y);
            return std::pow(r / L, exponent) * vertex_cutoff(r, rho);
        };
    }

    ProblemSpec spec;
    spec.bc = setup.bc;
    spec.path = setup.path;
    spec.f0 = [=](double x, double y, double t) { return spatial(x, y) * time_bump(t, t_start, window); };
    auto mesh = std::make_shared<const SectorMesh>(setup.mesh.build(theta0, setup.path));
    const SectorMesh& m = *mesh;

    NormAccumulator n_f(m, setup.norm, data_weight);
    NormAccumulator n_a(m, setup.norm, mu);
    NormAccumulator n_b(m, setup.norm, oblique ? mu : mu - 1.0);
    std::vector<double> previous(m.node_count(), 0.0);
    std::vector<double> a_field(m.node_count());
    std::vector<double> b_field(m.node_count());
    std::vector<double> f_field(m.node_count());
    WedgeSolver solver(spec, mesh);
    solver.run([&](std::size_t level, double t, std::span<const double> u) {
        if (level > 0) {
            const double dt = t - m.times()[level - 1];
            const auto d = cartesian_derivatives(m, u);
            for (std::size_t i = 0; i < m.nr(); ++i) {
                for (std::size_t j = 0; j < m.nt(); ++j) {
                    const std::size_t k = m.index(i, j);
                    f_field[k] = spec.f0(m.x(i, j), m.y(i, j), t);
                    if (oblique) {
                        a_field[k] = (u[k] - previous[k]) / dt;
                        b_field[k] = std::sqrt(d.uxx[k] * d.uxx[k] + 2.0 * d.uxy[k] * d.uxy[k] + d.uyy[k] * d.uyy[k]);
                    } else {
                        a_field[k] = std::hypot(d.ux[k], d.uy[k]);
                    }
                }
            }
            n_f.add_level(dt, f_field);
            n_a.add_level(dt, a_field);
            n_b.add_level(dt, oblique ? std::span<const double>(b_field) : u);
        }
        std::copy(u.begin(), u.end(), previous.begin());
    });
    const double denominator = n_f.result();
    if (!(denominator > 0.0)) { throw ValidationError("coercive ratio undefined: forcing norm is zero"); }
    return (n_a.result() + n_b.result()) / denominator;
}

MeshSpec coercive_mesh() {
    MeshSpec m;
    m.r_min = 3e-3;
    m.q = 0.9;
    m.h = 0.04;
    m.r_max = 2.0;
    m.n_theta = 24;
    m.t_start = 0.0;
    m.t_end = 0.3;
    m.dt_min = 0.005;
    m.dt_max = 0.005;
    m.block_steps = 50;
    return m;
}

MeshSpec refine(const MeshSpec& base, int level) {
    if (level < 0) { throw ValidationError("refinement level must be non-negative"); }
    MeshSpec m = base;
    const double root2 = std::sqrt(2.0);
    for (int l = 0; l < level; ++l) {
        m.r_min /= 32.0;
        m.h /= root2;
        m.dt_min *= 0.5;
        m.dt_max *= 0.5;
        m.block_steps *= 2;
    }
    m.n_theta = static_cast<int>(std::lround(base.n_theta * std::pow(root2, level)));
    return m;
}

std::vector<SweepRow> sweep_mu(const CoerciveSetup& setup, const std::vector<double>& mu_grid, int refinements) {
    if (refinements < 0) { throw ValidationError("refinements must be non-negative"); }
    const auto levels = static_cast<std::size_t>(refinements) + 1;
    std::vector<SweepRow> rows(mu_grid.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].mu = mu_grid[r];
        rows[r].ratios.assign(levels, 0.0);
    }
    parallel_for(mu_grid.size() * levels, [&](std::size_t cell) {
        const std::size_t r = cell / levels;
        const std::size_t l = cell % levels;
        CoerciveSetup local = setup;
        local.norm.mu = mu_grid[r];
        local.mesh = refine(setup.mesh, static_cast<int>(l));
        rows[r].ratios[l] = coercive_ratio(local);
    });
    for (auto& row : rows) {
        bool growing = row.ratios.size() > 1;
        bool stable = true;
        for (std::size_t l = 1; l < row.ratios.size(); ++l) {
            if (row.ratios[l] < 1.5 * row.ratios[l - 1]) { growing = false; }
            if (std::abs(row.ratios[l] / row.ratios[0] - 1.0) >= 0.1) { stable = false; }
        }
        row.flag = growing ? "growing" : (stable ? "stable" : "indeterminate");
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "mu,level,ratio,flag\n";
    char line[128];
    for (const auto& row : rows) {
        for (std::size_t l = 0; l < row.ratios.size(); ++l) {
            std::snprintf(line, sizeof(line), "%.6g,%zu,%.10g,%s\n", row.mu, l, row.ratios[l], row.flag.c_str());
            out += line;
        }
    }
    return out;
}

}  // namespace wedge
