#pragma once

// Green function of the oblique problem (D_1 u = 0 on the edges) built from the
// Dirichlet one by integrating along the cone axis e_1:
//   N(x, y; t, s) = int_0^inf D_{y_1} G_D(x + zeta e_1, y; t, s) dzeta,
// truncated Z sqrt(t - s) beyond the farther of x and y along e_1.

#include <functional>
#include <memory>
#include <vector>

#include "wedge/green.hpp"
#include "wedge/kernel.hpp"

namespace wedge {

/// Source of D_{y_1} G_D(x, y; t, s) for a fixed (y, s); points in the sector frame.
class DirichletGreenProvider {
public:
    virtual ~DirichletGreenProvider() = default;
    [[nodiscard]] virtual double dy1(double x1, double x2, double t) const = 0;
    [[nodiscard]] virtual const Vector& y() const = 0;
    [[nodiscard]] virtual double s() const = 0;
    [[nodiscard]] virtual double theta0() const = 0;
    /// Radius beyond which G_D is identically zero (infinity for unbounded domains).
    [[nodiscard]] virtual double outer_radius() const = 0;
};

/// Analytic half-plane images G_D = Gamma(x, y) - Gamma(x, y*); needs a^{12} = 0.
class HalfPlaneImagesProvider final : public DirichletGreenProvider {
public:
    HalfPlaneImagesProvider(CoefficientPath path, Vector y, double s);
    [[nodiscard]] double dy1(double x1, double x2, double t) const override;
    [[nodiscard]] const Vector& y() const override { return y_; }
    [[nodiscard]] double s() const override { return s_; }
    [[nodiscard]] double theta0() const override;
    [[nodiscard]] double outer_radius() const override;

private:
    CoefficientPath path_;
    Vector y_;
    double s_;
};

/// Centered difference of two numerical Dirichlet tables with sources y -+ h e_1.
class TableDifferenceProvider final : public DirichletGreenProvider {
public:
    /// Solves the two Dirichlet problems; h = NaN selects eps/2.
    TableDifferenceProvider(const ProblemSpec& dirichlet, const Vector& y, double s, double epsilon,
                            const MeshSpec& mesh, double theta0, double h = std::numeric_limits<double>::quiet_NaN());
    [[nodiscard]] double dy1(double x1, double x2, double t) const override;
    [[nodiscard]] const Vector& y() const override { return y_; }
    [[nodiscard]] double s() const override { return s_; }
    [[nodiscard]] double theta0() const override { return theta0_; }
    [[nodiscard]] double outer_radius() const override;
    [[nodiscard]] double step() const { return h_; }
    [[nodiscard]] const GreenTable& minus() const { return *minus_; }
    [[nodiscard]] const GreenTable& plus() const { return *plus_; }

private:
    Vector y_;
    double s_;
    double theta0_;
    double h_;
    std::unique_ptr<GreenTable> minus_;
    std::unique_ptr<GreenTable> plus_;
};

struct ObliqueFormulaValue {
    double value = 0.0;
    double tail = 0.0;           // |integrand| at the truncation point times sqrt(t - s)
    double halving_change = 0.0; // |N(Z) - N(Z/2)|
};

struct ObliqueFormulaOptions {
    double Z = 8.0;
    double tail_tolerance = 1e-5; // relative to the peak scale (t - s)^{-n/2}
};

ObliqueFormulaValue green_oblique_via_formula(const DirichletGreenProvider& provider, double x1, double x2, double t,
                                              const ObliqueFormulaOptions& options = {});

enum class Provenance { direct_solve, formula, analytic };
const char* to_string(Provenance p);

struct ObliqueSample {
    double x1 = 0.0;
    double x2 = 0.0;
    double t = 0.0;
    double weight = 0.0; // space-time quadrature weight
    double value = 0.0;
};

struct ObliqueGreenTable {
    Vector y;
    double s = 0.0;
    double epsilon = 0.0;
    Provenance provenance = Provenance::direct_solve;
    std::vector<ObliqueSample> samples;
};

/// Mesh nodes of `table` inside `region`, thinned to every `level_stride`-th
/// time level and every `node_stride`-th node in each direction.
std::vector<ObliqueSample> region_samples(const GreenTable& table, const ComparisonRegion& region,
                                          std::size_t level_stride, std::size_t node_stride);

ObliqueGreenTable tabulate_direct(const GreenTable& oblique_table, std::vector<ObliqueSample> points);
ObliqueGreenTable tabulate_formula(const DirichletGreenProvider& provider, double epsilon,
                                   std::vector<ObliqueSample> points, const ObliqueFormulaOptions& options = {});

struct CrossCheckReport {
    double relative_l2 = 0.0;
    double relative_sup = 0.0;
    std::size_t points = 0;
    bool pass = false;
};

/// Relative discrepancy of `formula` against `direct` on the common sample points
/// lying in `region`; passes at 5%.
CrossCheckReport cross_check(const ObliqueGreenTable& direct, const ObliqueGreenTable& formula,
                             const ComparisonRegion& region);

/// Values of N at arbitrary (x, y, t) for a fixed s, used for finite differences.
using ObliqueKernel = std::function<double(const Vector& x, const Vector& y, double t)>;

struct DifferenceRequest {
    MultiIndex alpha{2, 0};
    MultiIndex beta{0, 0};
    double h = 1e-2;     // finite-difference step
};

/// Samples of D_x^alpha D_y^beta (N - Gamma) at the given (x, t) points; N by
/// centered differences, Gamma analytically.  Throws if a stencil leaves the sector.
std::vector<KernelSample> difference_samples(const ObliqueKernel& oblique, const CoefficientPath& path,
                                             const WedgeDomain& domain, const Vector& y, double s,
                                             const std::vector<std::pair<Vector, double>>& points,
                                             const DifferenceRequest& request, double outer_radius);

}  // namespace wedge
