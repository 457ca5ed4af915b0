#pragma once

// Wedges  K x R^{n-m}  where K is a planar sector, a circular cone, or a
// cone given as the supergraph  x_1 > phi(x^)  of a Lipschitz function
// that is positively homogeneous of degree one.

#include <functional>
#include <optional>
#include <span>
#include <variant>

#include "wedge/coefficients.hpp"
#include "wedge/kvconfig.hpp"

namespace wedge {

/// Planar sector {0 < theta < theta0}, edges along angles 0 and theta0.
struct Sector {
    double theta0 = 0.0;
};

/// {x' : angle(x', e_1) < half_angle} in R^m.
struct CircularCone {
    double half_angle = 0.0;
};

/// {x' = (x_1, x^) : x_1 > phi(x^)}, |phi(a) - phi(b)| <= Lambda |a - b|.
struct LipschitzGraph {
    std::function<double(std::span<const double>)> phi;
    double Lambda = 0.0;
    /// phi = slope * |x^| when set; lets the graph round-trip through text.
    std::optional<double> slope;
};

using ConeSpec = std::variant<Sector, CircularCone, LipschitzGraph>;

struct PointGeometry {
    double d = 0.0;      // signed distance to the boundary, negative outside
    double r_x = 0.0;    // d / |x'|
    double R_xt = 0.0;   // |x'| / (|x'| + sqrt(t))
    bool inside = false;
};

class WedgeDomain {
public:
    [[nodiscard]] int m() const { return m_; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] const ConeSpec& cone() const { return cone_; }
    [[nodiscard]] bool is_sector() const { return std::holds_alternative<Sector>(cone_); }
    [[nodiscard]] bool is_graph() const { return std::holds_alternative<LipschitzGraph>(cone_); }
    /// Opening angle of a sector; throws for other cones.
    [[nodiscard]] double theta0() const;

    /// The same cone as a Lipschitz supergraph, in the frame where the
    /// cone axis is e_1 (see to_graph_frame).
    [[nodiscard]] WedgeDomain graph_form() const;
    /// Rotation taking this domain's coordinates to graph_form() coordinates.
    [[nodiscard]] Vector to_graph_frame(std::span<const double> x) const;
    [[nodiscard]] Vector from_graph_frame(std::span<const double> x) const;
    /// Unit vector of the graph axis e_1 expressed in this domain's frame.
    [[nodiscard]] Vector axis_direction() const;

    [[nodiscard]] double distance(std::span<const double> x) const;
    [[nodiscard]] PointGeometry geometry_at(std::span<const double> x, double t) const;

    [[nodiscard]] KeyValueConfig to_config() const;
    static WedgeDomain from_config(const KeyValueConfig& config);

    friend WedgeDomain make_sector(double theta0, int n);
    friend WedgeDomain make_circular_cone(double half_angle, int m, int n);
    friend WedgeDomain make_lipschitz_cone(std::function<double(std::span<const double>)> phi, double Lambda, int m,
                                           int n);
    friend WedgeDomain make_graph_cone(double slope, int m, int n);

private:
    WedgeDomain(int m, int n, ConeSpec cone) : m_(m), n_(n), cone_(std::move(cone)) {}

    int m_ = 2;
    int n_ = 2;
    ConeSpec cone_;
};

WedgeDomain make_sector(double theta0, int n = 2);
WedgeDomain make_circular_cone(double half_angle, int m = 3, int n = 3);
/// Samples phi to confirm degree-one homogeneity and the Lipschitz bound.
WedgeDomain make_lipschitz_cone(std::function<double(std::span<const double>)> phi, double Lambda, int m, int n);
/// phi(x^) = slope * |x^|, Lipschitz constant |slope|.
WedgeDomain make_graph_cone(double slope, int m, int n);

PointGeometry geometry_at(const WedgeDomain& domain, std::span<const double> x, double t);

}  // namespace wedge
