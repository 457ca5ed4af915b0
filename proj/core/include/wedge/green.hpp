#pragma once

// Numerical Green functions of the sector problem: the solve starts from the
// whole-space kernel Gamma(., y; s + delta, s), delta = eps^2/4, so the table
// approximates the sector Green function G(x, y; t, s) for t >= s + delta.

#include <functional>
#include <limits>

#include "wedge/geometry.hpp"
#include "wedge/solver.hpp"

namespace wedge {

struct GreenTable {
    GridFunction u;
    Vector y;           // source point, sector frame
    double s = 0.0;     // source time
    double epsilon = 0.0;
    double delta = 0.0; // the table starts at s + delta

    /// Interpolated value at a Cartesian point of the sector frame; 0 outside the sector.
    [[nodiscard]] double value(double x1, double x2, double t) const;
    [[nodiscard]] const SectorMesh& mesh() const { return u.mesh(); }
};

/// eps = NaN selects 4 local cells at y.  The time window is
/// [s + delta, s + (mesh_spec.t_end - mesh_spec.t_start)].
GreenTable green(const ProblemSpec& spec, const Vector& y, double s, double epsilon, const MeshSpec& mesh_spec,
                 double theta0);

/// Space-time set {0.2 <= R_{x,t-s} <= 0.8, t - s > 10 eps^2} restricted to mesh nodes.
struct ComparisonRegion {
    double R_lo = 0.2;
    double R_hi = 0.8;
    double min_age = 0.0;

    [[nodiscard]] bool contains(double r, double age) const;
    static ComparisonRegion standard(double epsilon) { return {0.2, 0.8, 10.0 * epsilon * epsilon}; }
};

struct Discrepancy {
    double relative_l2 = 0.0;
    double relative_sup = 0.0;
    std::size_t points = 0;
};

/// Compare a table with a reference over the region, using polar area weights
/// and the time-step lengths as space-time quadrature weights.
Discrepancy compare_with(const GreenTable& table, const std::function<double(double x1, double x2, double t)>& reference,
                         const ComparisonRegion& region);

/// Half-plane (theta0 = pi) images: Gamma(x, y) -+ Gamma(x, y*), y* = (y1, -y2).
double half_plane_images(const CoefficientPath& path, Boundary bc, double x1, double x2, const Vector& y, double t,
                         double s);

}  // namespace wedge
