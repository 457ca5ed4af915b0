#include "wedge/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Entry {
    std::size_t node;
    double weight;
};

// Three-point weights for first and second derivatives on a non-uniform grid.
struct RadialWeights {
    std::array<double, 3> d1;
    std::array<double, 3> d2;
};

RadialWeights radial_weights(const SectorMesh& mesh, std::size_t i) {
    const double hm = mesh.r(i) - mesh.r(i - 1);
    const double hp = mesh.r(i + 1) - mesh.r(i);
    RadialWeights w{};
    w.d1 = {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
    w.d2 = {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
    return w;
}

// Nine-point stencil of a^{ij} D_i D_j written in polar coordinates at interior node (i, j).
std::vector<Entry> interior_stencil(const SectorMesh& mesh, const Matrix& a, std::size_t i, std::size_t j) {
    const double r = mesh.r(i);
    const double c = std::cos(mesh.theta(j));
    const double s = std::sin(mesh.theta(j));
    const double a11 = a(0, 0);
    const double a12 = a(0, 1);
    const double a22 = a(1, 1);
    const double tangential = a11 * s * s - 2.0 * a12 * s * c + a22 * c * c;
    const double cross = -2.0 * a11 * s * c + 2.0 * a12 * (c * c - s * s) + 2.0 * a22 * s * c;
    const double c_rr = a11 * c * c + 2.0 * a12 * s * c + a22 * s * s;
    const double c_r = tangential / r;
    const double c_tt = tangential / (r * r);
    const double c_rt = cross / r;
    const double c_t = -cross / (r * r);

    const auto w = radial_weights(mesh, i);
    const double dt = mesh.dtheta();
    std::vector<Entry> out;
    out.reserve(13);
    for (int a_off = -1; a_off <= 1; ++a_off) {
        const std::size_t ii = i + a_off;
        out.push_back({mesh.index(ii, j), c_rr * w.d2[a_off + 1] + c_r * w.d1[a_off + 1]});
        out.push_back({mesh.index(ii, j + 1), c_rt * w.d1[a_off + 1] / (2.0 * dt)});
        out.push_back({mesh.index(ii, j - 1), -c_rt * w.d1[a_off + 1] / (2.0 * dt)});
    }
    out.push_back({mesh.index(i, j), -2.0 * c_tt / (dt * dt)});
    out.push_back({mesh.index(i, j + 1), c_tt / (dt * dt) + c_t / (2.0 * dt)});
    out.push_back({mesh.index(i, j - 1), c_tt / (dt * dt) - c_t / (2.0 * dt)});
    return out;
}

enum class RowKind { pinned, vertex, oblique_low, oblique_high, interior };

RowKind row_kind(const SectorMesh& mesh, Boundary bc, double vertex_exponent, std::size_t i, std::size_t j) {
    const std::size_t last_j = mesh.nt() - 1;
    if (i + 1 == mesh.nr()) { return RowKind::pinned; }
    const bool edge = (j == 0 || j == last_j);
    if (bc == Boundary::dirichlet && edge) { return RowKind::pinned; }
    if (i == 0) { return std::isinf(vertex_exponent) ? RowKind::pinned : RowKind::vertex; }
    if (j == 0) { return RowKind::oblique_low; }
    if (j == last_j) { return RowKind::oblique_high; }
    return RowKind::interior;
}

}  // namespace

const char* to_string(Boundary bc) { return bc == Boundary::dirichlet ? "dirichlet" : "oblique"; }

Boundary boundary_from_string(const std::string& text) {
    if (text == "dirichlet") { return Boundary::dirichlet; }
    if (text == "oblique") { return Boundary::oblique; }
    throw ValidationError("boundary condition must be 'dirichlet' or 'oblique', got '" + text + "'");
}

GridFunction::GridFunction(std::shared_ptr<const SectorMesh> mesh, Boundary bc) : mesh_(std::move(mesh)), bc_(bc) {
    if (!mesh_) { throw ValidationError("grid function needs a mesh"); }
}

void GridFunction::append(std::span<const double> level) {
    if (level.size() != mesh_->node_count()) { throw ValidationError("level size does not match mesh"); }
    values_.insert(values_.end(), level.begin(), level.end());
}

std::span<const double> GridFunction::level(std::size_t k) const {
    const std::size_t n = mesh_->node_count();
    return std::span<const double>(values_).subspan(k * n, n);
}

std::span<double> GridFunction::level(std::size_t k) {
    const std::size_t n = mesh_->node_count();
    return std::span<double>(values_).subspan(k * n, n);
}

double GridFunction::interpolate_level(std::size_t k, double r, double theta) const {
    const SectorMesh& m = *mesh_;
    r = std::clamp(r, m.r(0), m.r(m.nr() - 1));
    theta = std::clamp(theta, 0.0, m.theta0());
    const std::size_t i0 = std::min(m.radial_cell(r) > 0 ? m.radial_cell(r) - 1 : 0, m.nr() - 4);
    const auto jc = static_cast<std::size_t>(std::min(std::floor(theta / m.dtheta()), static_cast<double>(m.nt() - 2)));
    const std::size_t j0 = std::min(jc > 0 ? jc - 1 : 0, m.nt() - 4);

    std::array<double, 4> wr{};
    std::array<double, 4> wt{};
    for (std::size_t a = 0; a < 4; ++a) {
        double pr = 1.0;
        double pt = 1.0;
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) { continue; }
            pr *= (r - m.r(i0 + b)) / (m.r(i0 + a) - m.r(i0 + b));
            pt *= (theta - m.theta(j0 + b)) / (m.theta(j0 + a) - m.theta(j0 + b));
        }
        wr[a] = pr;
        wt[a] = pt;
    }
    const auto values = level(k);
    double total = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) { total += wr[a] * wt[b] * values[m.index(i0 + a, j0 + b)]; }
    }
    return total;
}

double GridFunction::interpolate(double r, double theta, double t) const {
    const auto& times = mesh_->times();
    const std::size_t count = levels();
    if (count == 0) { throw ValidationError("grid function is empty"); }
    if (t <= times.front() || count == 1) { return interpolate_level(0, r, theta); }
    if (t >= times[count - 1]) { return interpolate_level(count - 1, r, theta); }
    const auto it = std::upper_bound(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(count), t);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    const double w = (t - times[k]) / (times[k + 1] - times[k]);
    return (1.0 - w) * interpolate_level(k, r, theta) + w * interpolate_level(k + 1, r, theta);
}

struct WedgeSolver::Factorization {
    std::size_t piece = 0;
    double dt = 0.0;
    SparseMatrix matrix;
    std::vector<double> row_scale; // interior rows are divided by their diagonal
    Eigen::SparseLU<SparseMatrix> lu;
};

WedgeSolver::WedgeSolver(ProblemSpec spec, std::shared_ptr<const SectorMesh> mesh)
    : spec_(std::move(spec)), mesh_(std::move(mesh)) {
    if (!mesh_) { throw ValidationError("solver needs a mesh"); }
    if (spec_.path.dimension() != 2) { throw ValidationError("sector solves need a 2 x 2 coefficient path"); }
    const auto& times = mesh_->times();
    for (const double b : spec_.path.breakpoints_between(times.front(), times.back())) {
        if (!std::binary_search(times.begin(), times.end(), b)) {
            throw ValidationError("coefficient breakpoint " + format_double(b) + " is not a time level of the mesh");
        }
    }
    if (!spec_.initial.empty() && spec_.initial.size() != mesh_->node_count()) {
        throw ValidationError("initial data size does not match mesh");
    }
    vertex_exponent_ = spec_.vertex_exponent;
    if (std::isnan(vertex_exponent_)) {
        vertex_exponent_ = spec_.bc == Boundary::dirichlet ? std::numbers::pi / mesh_->theta0() : 0.0;
    }
    if (vertex_exponent_ < 0.0) { throw ValidationError("vertex exponent must be non-negative"); }
}

WedgeSolver::~WedgeSolver() = default;

const WedgeSolver::Factorization& WedgeSolver::factor(std::size_t piece, double dt) {
    for (const auto& f : cache_) {
        if (f->piece == piece && f->dt == dt) { return *f; }
    }
    const SectorMesh& m = *mesh_;
    const Matrix& a = spec_.path.pieces()[piece];
    const double s0 = std::sin(0.5 * m.theta0());
    const double c0 = std::cos(0.5 * m.theta0());
    const std::size_t last_j = m.nt() - 1;

    std::vector<Triplet> triplets;
    triplets.reserve(m.node_count() * 9);
    std::vector<double> row_scale(m.node_count(), 1.0);
    for (std::size_t i = 0; i < m.nr(); ++i) {
        for (std::size_t j = 0; j < m.nt(); ++j) {
            const auto row = static_cast<int>(m.index(i, j));
            switch (row_kind(m, spec_.bc, vertex_exponent_, i, j)) {
                case RowKind::pinned:
                    triplets.emplace_back(row, row, 1.0);
                    break;
                case RowKind::vertex:
                    triplets.emplace_back(row, row, 1.0);
                    triplets.emplace_back(row, static_cast<int>(m.index(1, j)),
                                          -std::pow(m.r(0) / m.r(1), vertex_exponent_));
                    break;
                case RowKind::oblique_low:
                case RowKind::oblique_high: {
                    // cos(theta0/2) u_r +- sin(theta0/2) u_theta / r = 0, one-sided in theta.
                    const bool low = (j == 0);
                    const auto w = radial_weights(m, i);
                    for (int off = -1; off <= 1; ++off) {
                        triplets.emplace_back(row, static_cast<int>(m.index(i + off, j)), c0 * w.d1[off + 1]);
                    }
                    const double scale = s0 / (2.0 * m.dtheta() * m.r(i));
                    const std::array<double, 3> one_sided{-3.0, 4.0, -1.0};
                    for (std::size_t k = 0; k < 3; ++k) {
                        const std::size_t jj = low ? k : last_j - k;
                        // Backward difference at the far edge flips the sign; so does the bc.
                        triplets.emplace_back(row, static_cast<int>(m.index(i, jj)), scale * one_sided[k]);
                    }
                    for (std::size_t t = triplets.size() - 6; t < triplets.size(); ++t) {
                        triplets[t] = Triplet(triplets[t].row(), triplets[t].col(), triplets[t].value() * m.r(i) * m.dtheta());
                    }
                    break;
                }
                case RowKind::interior: {
                    const auto stencil = interior_stencil(m, a, i, j);
                    double diagonal = 1.0;
                    for (const auto& e : stencil) {
                        if (e.node == static_cast<std::size_t>(row)) { diagonal -= dt * e.weight; }
                    }
                    const double scale = 1.0 / diagonal;
                    row_scale[static_cast<std::size_t>(row)] = scale;
                    triplets.emplace_back(row, row, scale);
                    for (const auto& e : stencil) {
                        triplets.emplace_back(row, static_cast<int>(e.node), -dt * e.weight * scale);
                    }
                    break;
                }
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(m.node_count());
    SparseMatrix matrix(n, n);
    matrix.setFromTriplets(triplets.begin(), triplets.end());
    matrix.makeCompressed();

    auto f = std::make_unique<Factorization>();
    f->piece = piece;
    f->dt = dt;
    f->matrix = std::move(matrix);
    f->row_scale = std::move(row_scale);
    f->lu.analyzePattern(f->matrix);
    f->lu.factorize(f->matrix);
    if (f->lu.info() != Eigen::Success) { throw NumericalError("sparse LU factorization failed: " + f->lu.lastErrorMessage()); }
    cache_.push_back(std::move(f));
    return *cache_.back();
}

void WedgeSolver::source(double t, std::span<double> out) const {
    const SectorMesh& m = *mesh_;
    std::fill(out.begin(), out.end(), 0.0);
    if (spec_.f0) {
        for (std::size_t i = 0; i < m.nr(); ++i) {
            for (std::size_t j = 0; j < m.nt(); ++j) { out[m.index(i, j)] = spec_.f0(m.x(i, j), m.y(i, j), t); }
        }
    }
    if (!spec_.flux) { return; }
    std::vector<double> fr(m.node_count());
    std::vector<double> ft(m.node_count());
    for (std::size_t i = 0; i < m.nr(); ++i) {
        for (std::size_t j = 0; j < m.nt(); ++j) {
            const auto f = spec_.flux(m.x(i, j), m.y(i, j), t);
            const double c = std::cos(m.theta(j));
            const double s = std::sin(m.theta(j));
            fr[m.index(i, j)] = c * f[0] + s * f[1];
            ft[m.index(i, j)] = -s * f[0] + c * f[1];
        }
    }
    // div f = d_r f_r + f_r / r + d_theta f_theta / r.
    for (std::size_t i = 1; i + 1 < m.nr(); ++i) {
        const auto w = radial_weights(m, i);
        for (std::size_t j = 1; j + 1 < m.nt(); ++j) {
            double dr = 0.0;
            for (int off = -1; off <= 1; ++off) { dr += w.d1[off + 1] * fr[m.index(i + off, j)]; }
            const double dth = (ft[m.index(i, j + 1)] - ft[m.index(i, j - 1)]) / (2.0 * m.dtheta());
            out[m.index(i, j)] += dr + fr[m.index(i, j)] / m.r(i) + dth / m.r(i);
        }
    }
}

void WedgeSolver::run(const Observer& observe) {
    const SectorMesh& m = *mesh_;
    const auto& times = m.times();
    Vector u = Vector::Zero(static_cast<Eigen::Index>(m.node_count()));
    if (!spec_.initial.empty()) {
        for (std::size_t k = 0; k < spec_.initial.size(); ++k) { u[static_cast<Eigen::Index>(k)] = spec_.initial[k]; }
    }
    for (std::size_t i = 0; i < m.nr(); ++i) {
        for (std::size_t j = 0; j < m.nt(); ++j) {
            if (row_kind(m, spec_.bc, vertex_exponent_, i, j) == RowKind::pinned) { u[static_cast<Eigen::Index>(m.index(i, j))] = 0.0; }
        }
    }
    if (observe) { observe(0, times.front(), std::span<const double>(u.data(), m.node_count())); }

    std::vector<RowKind> kinds(m.node_count());
    for (std::size_t i = 0; i < m.nr(); ++i) {
        for (std::size_t j = 0; j < m.nt(); ++j) { kinds[m.index(i, j)] = row_kind(m, spec_.bc, vertex_exponent_, i, j); }
    }
    const bool has_source = static_cast<bool>(spec_.f0) || static_cast<bool>(spec_.flux);
    std::vector<double> f(m.node_count(), 0.0);
    Vector rhs(static_cast<Eigen::Index>(m.node_count()));
    for (std::size_t n = 0; n + 1 < times.size(); ++n) {
        const double dt = times[n + 1] - times[n];
        const std::size_t piece = spec_.path.piece_index(0.5 * (times[n] + times[n + 1]));
        const auto& fact = factor(piece, dt);
        if (has_source) { source(times[n + 1], f); }
        for (std::size_t k = 0; k < m.node_count(); ++k) {
            const auto e = static_cast<Eigen::Index>(k);
            rhs[e] = (kinds[k] == RowKind::interior) ? (u[e] + dt * f[k]) * fact.row_scale[k] : 0.0;
        }
        u = fact.lu.solve(rhs);
        // One step of iterative refinement; near a small excised vertex the rows are badly scaled.
        const Vector residual = rhs - fact.matrix * u;
        u += fact.lu.solve(residual);
        if (fact.lu.info() != Eigen::Success || !u.allFinite()) { throw NumericalError("linear solve failed at step " + std::to_string(n + 1)); }
        if (observe) { observe(n + 1, times[n + 1], std::span<const double>(u.data(), m.node_count())); }
    }
}

std::vector<double> WedgeSolver::apply_operator(const Matrix& a, std::span<const double> u) const {
    const SectorMesh& m = *mesh_;
    if (u.size() != m.node_count()) { throw ValidationError("field size does not match mesh"); }
    std::vector<double> out(m.node_count(), 0.0);
    for (std::size_t i = 1; i + 1 < m.nr(); ++i) {
        for (std::size_t j = 1; j + 1 < m.nt(); ++j) {
            double v = 0.0;
            for (const auto& e : interior_stencil(m, a, i, j)) { v += e.weight * u[e.node]; }
            out[m.index(i, j)] = v;
        }
    }
    return out;
}

GridFunction solve(const ProblemSpec& spec, std::shared_ptr<const SectorMesh> mesh) {
    GridFunction u(mesh, spec.bc);
    WedgeSolver solver(spec, mesh);
    solver.run([&](std::size_t, double, std::span<const double> level) { u.append(level); });
    return u;
}

std::string grid_to_csv(const GridFunction& u, std::size_t level_stride) {
    if (level_stride == 0) { throw ValidationError("level stride must be positive"); }
    const SectorMesh& m = u.mesh();
    std::string out = "r,theta,t,value\n";
    char line[128];
    for (std::size_t k = 0; k < u.levels(); k += level_stride) {
        for (std::size_t i = 0; i < m.nr(); ++i) {
            for (std::size_t j = 0; j < m.nt(); ++j) {
                std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g\n", m.r(i), m.theta(j), m.times()[k], u(k, i, j));
                out += line;
            }
        }
    }
    return out;
}

}  // namespace wedge
