#pragma once

// Weighted mixed Lebesgue norms with power weight |x'|^mu, admissible weight
// intervals, and refinement studies of the coercive ratio.

#include <span>
#include <string>
#include <vector>

#include "wedge/solver.hpp"

namespace wedge {

enum class NormVariant { pq, tilde_pq };

struct WeightedNormSpec {
    double p = 2.0;
    double q = 2.0;
    double mu = 0.0;
    NormVariant variant = NormVariant::pq;

    void validate() const;
};

/// Norm of |x'|^{weight_exponent} u over the sector and the solve window.
/// pq: (int (int |.|^p dx)^{q/p} dt)^{1/q};  tilde_pq: (int (int |.|^q dt)^{p/q} dx)^{1/p}.
/// Space uses the mesh's polar trapezoid weights, time a right-endpoint rule.
double weighted_norm(const GridFunction& u, const WeightedNormSpec& spec, double weight_exponent);

/// Streaming form of weighted_norm: feed levels 1, 2, ... with their step lengths.
class NormAccumulator {
public:
    NormAccumulator(const SectorMesh& mesh, WeightedNormSpec spec, double weight_exponent);
    void add_level(double dt, std::span<const double> values);
    [[nodiscard]] double result() const;

private:
    const SectorMesh* mesh_;
    WeightedNormSpec spec_;
    std::vector<double> weight_;   // |x'|^{e p} times area weight, per node
    std::vector<double> radial_;   // |x'|^e per node
    std::vector<double> per_node_; // tilde: sum dt |.|^q per node
    double total_ = 0.0;           // pq: sum dt (space integral)^{q/p}
};

enum class IntervalKind { whole_space, dirichlet_2nd, dirichlet_1st, oblique };

const char* to_string(IntervalKind kind);
IntervalKind interval_kind_from_string(const std::string& text);

struct MuInterval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool empty() const { return !(lo < hi); }
    [[nodiscard]] bool contains(double mu) const { return lo < mu && mu < hi; }
};

MuInterval mu_interval(IntervalKind kind, double p, int m, double lambda_plus, double lambda_minus);

/// "(lo, hi)" with up to six significant digits.
std::string format_interval(const MuInterval& interval);

/// Discrete derivatives at interior nodes (zero elsewhere) in Cartesian components.
struct Derivatives {
    std::vector<double> ux, uy, uxx, uxy, uyy;
};
Derivatives cartesian_derivatives(const SectorMesh& mesh, std::span<const double> u);

enum class CoerciveData { gaussian_bump, vertex_power };

/// Base mesh of the coercive sweep: r_min 3e-3, h 0.04, r_max 2, 24 angular
/// intervals, uniform dt 0.005 on [0, 0.3].
MeshSpec coercive_mesh();

/// Forcing for coercive-ratio experiments.  gaussian_bump is centred at
/// 0.6 L on the bisector with width 0.2 L; vertex_power is
/// |x'|^{-w - 2/p + eps'} on |x'| < vertex_radius (w the forcing weight
/// exponent), smoothly cut off.  Both carry a sin^2 time bump on the first
/// third of the window.
struct CoerciveSetup {
    Boundary bc = Boundary::oblique;
    CoefficientPath path = CoefficientPath::identity(2);
    double theta0 = 1.5707963267948966;
    WeightedNormSpec norm;
    CoerciveData data = CoerciveData::gaussian_bump;
    double eps_prime = 0.05;
    double vertex_radius = 0.25;
    double length_scale = 1.0; // data geometry scales with this length
    MeshSpec mesh = coercive_mesh();
};

/// Oblique: (|| |x'|^mu u_t || + || |x'|^mu D^2 u ||) / || |x'|^mu f ||.
/// Dirichlet (first-order form, f0 = f, no flux): (|| |x'|^mu Du || + || |x'|^{mu-1} u ||) / || |x'|^{mu+1} f ||.
double coercive_ratio(const CoerciveSetup& setup);

/// Mesh for refinement level `level` of a base mesh: r_min / 32 per level,
/// h / sqrt 2, n_theta * sqrt 2 and time steps halved.
MeshSpec refine(const MeshSpec& base, int level);

struct SweepRow {
    double mu = 0.0;
    std::vector<double> ratios;
    std::string flag; // "stable", "growing" or "indeterminate"
};

/// Ratios for every (mu, level).  "growing": every refinement multiplies the
/// ratio by at least 1.5; "stable": every ratio within 10% of the first.
std::vector<SweepRow> sweep_mu(const CoerciveSetup& setup, const std::vector<double>& mu_grid, int refinements);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace wedge
