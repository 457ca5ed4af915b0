#pragma once

// Backward-Euler finite differences for  u_t - a^{ij}(t) D_i D_j u = f0 + div f
// in a truncated planar sector, with u = 0 or D_1 u = 0 on the edges.
// D_1 is the derivative along the sector bisector; coefficients are given in
// the sector frame (edges along angles 0 and theta0).

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "wedge/coefficients.hpp"
#include "wedge/mesh.hpp"

namespace wedge {

enum class Boundary { dirichlet, oblique };

const char* to_string(Boundary bc);
Boundary boundary_from_string(const std::string& text);

struct ProblemSpec {
    using Source = std::function<double(double x, double y, double t)>;
    using Flux = std::function<std::array<double, 2>(double x, double y, double t)>;

    Boundary bc = Boundary::dirichlet;
    CoefficientPath path = CoefficientPath::identity(2);
    Source f0;                   // empty means zero
    Flux flux;                   // divergence-form part, empty means zero
    std::vector<double> initial; // node values at the first time level; empty means zero
    /// Exponent of the row u(r_min) = (r_min/r_1)^e u(r_1) closing the excised
    /// vertex.  NaN selects pi/theta0 (Dirichlet) or 0 (oblique); +inf pins u = 0.
    double vertex_exponent = std::numeric_limits<double>::quiet_NaN();
};

/// Space-time values on a sector mesh; level k holds node values at times()[k].
class GridFunction {
public:
    GridFunction(std::shared_ptr<const SectorMesh> mesh, Boundary bc);

    [[nodiscard]] const SectorMesh& mesh() const { return *mesh_; }
    [[nodiscard]] std::shared_ptr<const SectorMesh> mesh_ptr() const { return mesh_; }
    [[nodiscard]] Boundary bc() const { return bc_; }
    [[nodiscard]] std::size_t levels() const { return values_.size() / mesh_->node_count(); }

    void append(std::span<const double> level);
    [[nodiscard]] std::span<const double> level(std::size_t k) const;
    [[nodiscard]] std::span<double> level(std::size_t k);
    [[nodiscard]] double operator()(std::size_t k, std::size_t i, std::size_t j) const {
        return values_[k * mesh_->node_count() + mesh_->index(i, j)];
    }

    /// Cubic Lagrange in (r, theta) at level k; points outside are clamped.
    [[nodiscard]] double interpolate_level(std::size_t k, double r, double theta) const;
    /// Spatial interpolation plus linear interpolation in time.
    [[nodiscard]] double interpolate(double r, double theta, double t) const;

private:
    std::shared_ptr<const SectorMesh> mesh_;
    Boundary bc_;
    std::vector<double> values_;
};

class WedgeSolver {
public:
    using Observer = std::function<void(std::size_t level, double t, std::span<const double> u)>;

    WedgeSolver(ProblemSpec spec, std::shared_ptr<const SectorMesh> mesh);
    ~WedgeSolver();
    WedgeSolver(const WedgeSolver&) = delete;
    WedgeSolver& operator=(const WedgeSolver&) = delete;

    /// Steps through every time level, calling `observe` on the initial level and after each step.
    void run(const Observer& observe);

    /// Discrete  a^{ij} D_i D_j u  at interior nodes (zero elsewhere), for tests.
    [[nodiscard]] std::vector<double> apply_operator(const Matrix& a, std::span<const double> u) const;

    [[nodiscard]] double vertex_exponent() const { return vertex_exponent_; }

private:
    struct Factorization;

    const Factorization& factor(std::size_t piece, double dt);
    void source(double t, std::span<double> out) const;

    ProblemSpec spec_;
    std::shared_ptr<const SectorMesh> mesh_;
    double vertex_exponent_ = 0.0;
    std::vector<std::unique_ptr<Factorization>> cache_;
};

GridFunction solve(const ProblemSpec& spec, std::shared_ptr<const SectorMesh> mesh);

/// Whole-solution CSV rows "r,theta,t,value".
std::string grid_to_csv(const GridFunction& u, std::size_t level_stride = 1);

}  // namespace wedge
