#include "wedge/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wedge/errors.hpp"

namespace wedge {

SectorMesh::SectorMesh(std::vector<double> radii, double theta0, int n_theta, std::vector<double> times)
    : r_(std::move(radii)), theta0_(theta0), n_theta_(n_theta), times_(std::move(times)) {
    if (r_.size() < 4) { throw ValidationError("mesh needs at least four radial nodes"); }
    if (!(r_.front() > 0.0)) { throw ValidationError("vertex must be excised: r_min > 0"); }
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
        if (!(r_[i] < r_[i + 1])) { throw ValidationError("radii must be strictly increasing"); }
    }
    if (!(theta0 > 0.0 && theta0 < 2.0 * std::numbers::pi)) { throw ValidationError("sector angle must lie in (0, 2 pi)"); }
    if (n_theta < 4) { throw ValidationError("mesh needs at least four angular intervals"); }
    if (times_.empty()) { throw ValidationError("mesh needs at least one time level"); }
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
        if (!(times_[k] < times_[k + 1])) { throw ValidationError("time levels must be strictly increasing"); }
    }
    dtheta_ = theta0_ / n_theta_;

    weights_.assign(node_count(), 0.0);
    for (std::size_t i = 0; i < nr(); ++i) {
        const double left = (i > 0) ? r_[i] - r_[i - 1] : 0.0;
        const double right = (i + 1 < nr()) ? r_[i + 1] - r_[i] : 0.0;
        const double wr = 0.5 * (left + right) * r_[i];
        for (std::size_t j = 0; j < nt(); ++j) {
            const double wt = (j == 0 || j + 1 == nt()) ? 0.5 * dtheta_ : dtheta_;
            weights_[index(i, j)] = wr * wt;
        }
    }
}

double SectorMesh::x(std::size_t i, std::size_t j) const { return r_[i] * std::cos(theta(j)); }
double SectorMesh::y(std::size_t i, std::size_t j) const { return r_[i] * std::sin(theta(j)); }

std::size_t SectorMesh::radial_cell(double r) const {
    if (r <= r_.front()) { return 0; }
    if (r >= r_.back()) { return nr() - 2; }
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    return static_cast<std::size_t>(it - r_.begin()) - 1;
}

double SectorMesh::local_cell(double r) const {
    const std::size_t i = radial_cell(r);
    return std::max(r_[i + 1] - r_[i], r * dtheta_);
}

SectorMesh SectorMesh::with_times(std::vector<double> times) const {
    return SectorMesh(r_, theta0_, n_theta_, std::move(times));
}

std::vector<double> graded_radii(double r_min, double q, double h, double r_max) {
    if (!(q >= 0.8 && q < 1.0)) { throw ValidationError("grading ratio q must lie in [0.8, 1)"); }
    if (!(r_min > 0.0 && h > 0.0 && r_max > r_min)) { throw ValidationError("need 0 < r_min < r_max and h > 0"); }
    std::vector<double> r{r_min};
    while (true) {
        const double step = std::min(r.back() * (1.0 / q - 1.0), h);
        if (step >= h) { break; }
        if (r.back() + step >= r_max) { break; }
        r.push_back(r.back() + step);
    }
    const double remaining = r_max - r.back();
    const auto uniform = static_cast<std::size_t>(std::max(1.0, std::ceil(remaining / h - 1e-9)));
    const double start = r.back();
    for (std::size_t k = 1; k <= uniform; ++k) { r.push_back(start + remaining * static_cast<double>(k) / uniform); }
    r.back() = r_max;
    return r;
}

std::vector<double> geometric_radii(double r_anchor, double ratio, double r_min, double r_max) {
    if (!(ratio > 1.0 && r_anchor > 0.0 && r_min > 0.0 && r_max > r_min)) {
        throw ValidationError("geometric radii need ratio > 1 and 0 < r_min < r_max");
    }
    const double lo = std::ceil(std::log(r_min / r_anchor) / std::log(ratio) - 1e-9);
    const double hi = std::floor(std::log(r_max / r_anchor) / std::log(ratio) + 1e-9);
    std::vector<double> r;
    for (double k = lo; k <= hi; k += 1.0) { r.push_back(r_anchor * std::pow(ratio, k)); }
    return r;
}

std::vector<double> time_levels(double t0, double t1, double dt_min, double dt_max, int block_steps,
                                const CoefficientPath& path) {
    if (!(t1 > t0)) { throw ValidationError("time window must have t_end > t_start"); }
    if (!(dt_min > 0.0 && dt_max >= dt_min)) { throw ValidationError("need 0 < dt_min <= dt_max"); }
    if (block_steps < 1) { throw ValidationError("block_steps must be positive"); }
    const auto breaks = path.breakpoints_between(t0, t1);
    std::vector<double> levels{t0};
    double dt = dt_min;
    int in_block = 0;
    std::size_t next_break = 0;
    const double snap = 1e-9 * dt_min;
    while (levels.back() < t1 - snap) {
        const double now = levels.back();
        double next = now + dt;
        while (next_break < breaks.size() && breaks[next_break] <= now + snap) { ++next_break; }
        if (next_break < breaks.size() && next >= breaks[next_break] - snap) { next = breaks[next_break]; }
        // Avoid a sliver step at the end of the window.
        if (next > t1 - 0.25 * dt) { next = t1; }
        levels.push_back(next);
        if (++in_block == block_steps && dt < dt_max) {
            dt = std::min(2.0 * dt, dt_max);
            in_block = 0;
        }
    }
    return levels;
}

SectorMesh MeshSpec::build(double theta0, const CoefficientPath& path) const {
    return SectorMesh(graded_radii(r_min, q, h, r_max), theta0, n_theta,
                      time_levels(t_start, t_end, dt_min, dt_max, block_steps, path));
}

KeyValueConfig MeshSpec::to_config() const {
    KeyValueConfig c;
    c.set("r_min", r_min);
    c.set("q", q);
    c.set("h", h);
    c.set("r_max", r_max);
    c.set("n_theta", std::to_string(n_theta));
    c.set("t_start", t_start);
    c.set("t_end", t_end);
    c.set("dt_min", dt_min);
    c.set("dt_max", dt_max);
    c.set("block_steps", std::to_string(block_steps));
    return c;
}

MeshSpec MeshSpec::from_config(const KeyValueConfig& c) {
    MeshSpec s;
    s.r_min = c.get_double("r_min", s.r_min);
    s.q = c.get_double("q", s.q);
    s.h = c.get_double("h", s.h);
    s.r_max = c.get_double("r_max", s.r_max);
    s.n_theta = static_cast<int>(c.get_int("n_theta", s.n_theta));
    s.t_start = c.get_double("t_start", s.t_start);
    s.t_end = c.get_double("t_end", s.t_end);
    s.dt_min = c.get_double("dt_min", s.dt_min);
    s.dt_max = c.get_double("dt_max", s.dt_max);
    s.block_steps = static_cast<int>(c.get_int("block_steps", s.block_steps));
    return s;
}

}  // namespace wedge
