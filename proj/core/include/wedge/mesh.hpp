#pragma once

// Polar tensor mesh on the truncated sector {r_min <= r <= r_max, 0 <= theta <= theta0}
// together with the time levels of a solve.

#include <cstddef>
#include <vector>

#include "wedge/coefficients.hpp"
#include "wedge/kvconfig.hpp"

namespace wedge {

class SectorMesh {
public:
    SectorMesh(std::vector<double> radii, double theta0, int n_theta, std::vector<double> times);

    [[nodiscard]] std::size_t nr() const { return r_.size(); }
    /// Number of angular nodes (intervals + 1).
    [[nodiscard]] std::size_t nt() const { return static_cast<std::size_t>(n_theta_) + 1; }
    [[nodiscard]] int n_theta() const { return n_theta_; }
    [[nodiscard]] std::size_t node_count() const { return nr() * nt(); }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const { return i * nt() + j; }

    [[nodiscard]] const std::vector<double>& radii() const { return r_; }
    [[nodiscard]] double r(std::size_t i) const { return r_[i]; }
    [[nodiscard]] double theta(std::size_t j) const { return static_cast<double>(j) * dtheta_; }
    [[nodiscard]] double theta0() const { return theta0_; }
    [[nodiscard]] double dtheta() const { return dtheta_; }
    [[nodiscard]] double x(std::size_t i, std::size_t j) const;
    [[nodiscard]] double y(std::size_t i, std::size_t j) const;

    [[nodiscard]] const std::vector<double>& times() const { return times_; }
    [[nodiscard]] std::size_t steps() const { return times_.size() - 1; }

    /// Polar trapezoid weights r dr dtheta, one per node.
    [[nodiscard]] const std::vector<double>& area_weights() const { return weights_; }
    /// Largest of the radial and arc-length spacings around radius r.
    [[nodiscard]] double local_cell(double r) const;
    /// Radial interval [r_i, r_{i+1}] containing r (clamped to the mesh).
    [[nodiscard]] std::size_t radial_cell(double r) const;

    /// Same spatial mesh, new time levels.
    [[nodiscard]] SectorMesh with_times(std::vector<double> times) const;

private:
    std::vector<double> r_;
    double theta0_ = 0.0;
    int n_theta_ = 0;
    double dtheta_ = 0.0;
    std::vector<double> times_;
    std::vector<double> weights_;
};

/// Radii from r_min growing by 1/q per node until the spacing reaches h,
/// then uniform spacing h up to r_max (the last node is exactly r_max).
std::vector<double> graded_radii(double r_min, double q, double h, double r_max);

/// Geometric radii r_anchor * ratio^k covering [r_min, r_max]; r_anchor is a node.
std::vector<double> geometric_radii(double r_anchor, double ratio, double r_min, double r_max);

/// Time levels from t0 to t1.  Steps start at dt_min and double after every
/// `block_steps` steps up to dt_max; every breakpoint of `path` inside
/// (t0, t1) becomes a level.
std::vector<double> time_levels(double t0, double t1, double dt_min, double dt_max, int block_steps,
                                const CoefficientPath& path);

/// Mesh parameters in key-value form.
struct MeshSpec {
    double r_min = 3e-3;
    double q = 0.9;
    double h = 0.02;
    double r_max = 3.0;
    int n_theta = 80;
    double t_start = 0.0;
    double t_end = 0.25;
    double dt_min = 2.5e-4;
    double dt_max = 2.5e-3;
    int block_steps = 50;

    [[nodiscard]] SectorMesh build(double theta0, const CoefficientPath& path) const;
    [[nodiscard]] KeyValueConfig to_config() const;
    static MeshSpec from_config(const KeyValueConfig& config);
};

}  // namespace wedge
