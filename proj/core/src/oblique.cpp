#include "wedge/oblique.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

// Derivative of Gamma in the second variable along e_2 (the half-plane axis).
double gamma_dy2(const CoefficientPath& path, double x1, double x2, double y1, double y2, double t, double s) {
    const std::array<double, 2> x{x1, x2};
    const std::array<double, 2> y{y1, y2};
    return gamma_deriv(path, {0, 0}, {0, 1}, false, x, y, t, s);
}

// Composite 10-point Gauss-Legendre with panels of half the diffusion length;
// table-backed integrands are only piecewise smooth, so adaptivity buys little.
double integrate_ray(const DirichletGreenProvider& p, double x1, double x2, double e1, double e2, double t, double length,
                     double tau) {
    if (!(length > 0.0)) { return 0.0; }
    auto f = [&](double zeta) { return p.dy1(x1 + zeta * e1, x2 + zeta * e2, t); };
    const int panels = std::max(1, static_cast<int>(std::ceil(length / (0.5 * std::sqrt(tau)))));
    const double width = length / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        total += boost::math::quadrature::gauss<double, 10>::integrate(f, k * width, (k + 1) * width);
    }
    return total;
}

struct Stencil1D {
    std::vector<std::pair<int, double>> taps;
};

Stencil1D central(int order, double h) {
    switch (order) {
        case 0: return {{{0, 1.0}}};
        case 1: return {{{-1, -0.5 / h}, {1, 0.5 / h}}};
        case 2: return {{{-1, 1.0 / (h * h)}, {0, -2.0 / (h * h)}, {1, 1.0 / (h * h)}}};
        default: throw ValidationError("finite-difference samples support derivative order <= 2 per coordinate");
    }
}

}  // namespace

HalfPlaneImagesProvider::HalfPlaneImagesProvider(CoefficientPath path, Vector y, double s)
    : path_(std::move(path)), y_(std::move(y)), s_(s) {
    if (path_.dimension() != 2 || y_.size() != 2) { throw ValidationError("half-plane images are planar"); }
    for (const auto& a : path_.pieces()) {
        if (a(0, 1) != 0.0) { throw ValidationError("half-plane images need a^{12} = 0"); }
    }
    if (!(y_[1] > 0.0)) { throw ValidationError("source point must lie in the upper half-plane"); }
}

double HalfPlaneImagesProvider::dy1(double x1, double x2, double t) const {
    // d/dy2 [Gamma(x, y) - Gamma(x, (y1, -y2))]
    return gamma_dy2(path_, x1, x2, y_[0], y_[1], t, s_) + gamma_dy2(path_, x1, x2, y_[0], -y_[1], t, s_);
}

double HalfPlaneImagesProvider::theta0() const { return std::numbers::pi; }

double HalfPlaneImagesProvider::outer_radius() const { return std::numeric_limits<double>::infinity(); }

TableDifferenceProvider::TableDifferenceProvider(const ProblemSpec& dirichlet, const Vector& y, double s, double epsilon,
                                                 const MeshSpec& mesh, double theta0, double h)
    : y_(y), s_(s), theta0_(theta0) {
    if (dirichlet.bc != Boundary::dirichlet) { throw ValidationError("difference provider needs Dirichlet tables"); }
    // The first table fixes the default mollifier width when none is given.
    const Vector e{{std::cos(0.5 * theta0), std::sin(0.5 * theta0)}};
    auto centre = green(dirichlet, y, s, epsilon, mesh, theta0);
    h_ = std::isnan(h) ? 0.5 * centre.epsilon : h;
    if (!(h_ > 0.0)) { throw ValidationError("difference step must be positive"); }
    minus_ = std::make_unique<GreenTable>(green(dirichlet, y - h_ * e, s, centre.epsilon, mesh, theta0));
    plus_ = std::make_unique<GreenTable>(green(dirichlet, y + h_ * e, s, centre.epsilon, mesh, theta0));
}

double TableDifferenceProvider::dy1(double x1, double x2, double t) const {
    return (plus_->value(x1, x2, t) - minus_->value(x1, x2, t)) / (2.0 * h_);
}

double TableDifferenceProvider::outer_radius() const {
    const SectorMesh& m = plus_->mesh();
    return m.r(m.nr() - 1);
}

ObliqueFormulaValue green_oblique_via_formula(const DirichletGreenProvider& provider, double x1, double x2, double t,
                                              const ObliqueFormulaOptions& options) {
    ObliqueFormulaValue out;
    const double tau = t - provider.s();
    if (!(tau > 0.0)) { return out; }
    if (!(options.Z > 0.0)) { throw ValidationError("truncation Z must be positive"); }
    const double e1 = std::cos(0.5 * provider.theta0());
    const double e2 = std::sin(0.5 * provider.theta0());

    // Measure the truncation from the farther of x and y along the axis: the
    // integrand is a Gaussian bump centred near y_1.
    const Vector& y = provider.y();
    const double lead = std::max(0.0, (y[0] - x1) * e1 + (y[1] - x2) * e2);
    double length = lead + options.Z * std::sqrt(tau);
    bool clamped = false;
    const double R = provider.outer_radius();
    if (std::isfinite(R)) {
        const double b = x1 * e1 + x2 * e2;
        const double c = x1 * x1 + x2 * x2 - R * R;
        if (c >= 0.0) { return out; }
        const double exit = -b + std::sqrt(b * b - c);
        if (exit < length) {
            length = exit;
            clamped = true;
        }
    }
    out.value = integrate_ray(provider, x1, x2, e1, e2, t, length, tau);
    const double half =
        integrate_ray(provider, x1, x2, e1, e2, t, std::min(length, lead + 0.5 * options.Z * std::sqrt(tau)), tau);
    out.halving_change = std::abs(out.value - half);
    out.tail = std::abs(provider.dy1(x1 + length * e1, x2 + length * e2, t)) * std::sqrt(tau);
    const double scale = 1.0 / (4.0 * std::numbers::pi * tau);
    if (!clamped && out.tail > options.tail_tolerance * scale) {
        throw NumericalError("truncation Z too small: tail estimate " + format_double(out.tail / scale) +
                             " exceeds tolerance");
    }
    return out;
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::direct_solve: return "direct_solve";
        case Provenance::formula: return "formula";
        case Provenance::analytic: return "analytic";
    }
    return "unknown";
}

std::vector<ObliqueSample> region_samples(const GreenTable& table, const ComparisonRegion& region,
                                          std::size_t level_stride, std::size_t node_stride) {
    if (level_stride == 0 || node_stride == 0) { throw ValidationError("strides must be positive"); }
    const SectorMesh& m = table.mesh();
    const auto& times = m.times();
    const auto& w = m.area_weights();
    std::vector<ObliqueSample> out;
    for (std::size_t k = level_stride; k < table.u.levels(); k += level_stride) {
        const double age = times[k] - table.s;
        const double dt = times[k] - times[k - level_stride];
        for (std::size_t i = 0; i < m.nr(); i += node_stride) {
            if (!region.contains(m.r(i), age)) { continue; }
            for (std::size_t j = 0; j < m.nt(); j += node_stride) {
                out.push_back({m.x(i, j), m.y(i, j), times[k], w[m.index(i, j)] * dt, 0.0});
            }
        }
    }
    return out;
}

ObliqueGreenTable tabulate_direct(const GreenTable& oblique_table, std::vector<ObliqueSample> points) {
    if (oblique_table.u.bc() != Boundary::oblique) { throw ValidationError("direct table must come from an oblique solve"); }
    for (auto& p : points) { p.value = oblique_table.value(p.x1, p.x2, p.t); }
    return {oblique_table.y, oblique_table.s, oblique_table.epsilon, Provenance::direct_solve, std::move(points)};
}

ObliqueGreenTable tabulate_formula(const DirichletGreenProvider& provider, double epsilon,
                                   std::vector<ObliqueSample> points, const ObliqueFormulaOptions& options) {
    for (auto& p : points) { p.value = green_oblique_via_formula(provider, p.x1, p.x2, p.t, options).value; }
    return {provider.y(), provider.s(), epsilon, Provenance::formula, std::move(points)};
}

CrossCheckReport cross_check(const ObliqueGreenTable& direct, const ObliqueGreenTable& formula,
                             const ComparisonRegion& region) {
    if (direct.y.size() != formula.y.size() || (direct.y - formula.y).norm() > 1e-12 * (1.0 + direct.y.norm()) ||
        std::abs(direct.s - formula.s) > 1e-12 * (1.0 + std::abs(direct.s))) {
        throw ValidationError("cross-check needs tables for the same source point (y, s)");
    }
    CrossCheckReport report;
    double num = 0.0;
    double den = 0.0;
    double sup_err = 0.0;
    double sup_ref = 0.0;
    const std::size_t count = std::min(direct.samples.size(), formula.samples.size());
    for (std::size_t k = 0; k < count; ++k) {
        const auto& a = direct.samples[k];
        const auto& b = formula.samples[k];
        if (a.x1 != b.x1 || a.x2 != b.x2 || a.t != b.t) { continue; }
        if (!region.contains(std::hypot(a.x1, a.x2), a.t - direct.s)) { continue; }
        const double diff = b.value - a.value;
        num += a.weight * diff * diff;
        den += a.weight * a.value * a.value;
        sup_err = std::max(sup_err, std::abs(diff));
        sup_ref = std::max(sup_ref, std::abs(a.value));
        ++report.points;
    }
    if (report.points == 0) { throw ValidationError("cross-check tables have no overlap in the region"); }
    if (!(den > 0.0)) { throw NumericalError("direct table vanishes on the comparison region"); }
    report.relative_l2 = std::sqrt(num / den);
    report.relative_sup = sup_err / sup_ref;
    report.pass = report.relative_l2 < 0.05;
    return report;
}

std::vector<KernelSample> difference_samples(const ObliqueKernel& oblique, const CoefficientPath& path,
                                             const WedgeDomain& domain, const Vector& y, double s,
                                             const std::vector<std::pair<Vector, double>>& points,
                                             const DifferenceRequest& request, double outer_radius) {
    if (request.alpha.size() != 2 || request.beta.size() != 2) { throw ValidationError("planar multi-indices expected"); }
    const double h = request.h;
    if (!(h > 0.0)) { throw ValidationError("difference step must be positive"); }
    // Tensor-product stencil over (x1, x2, y1, y2).
    struct Tap {
        std::array<int, 4> offset;
        double weight;
    };
    std::vector<Tap> taps{{{0, 0, 0, 0}, 1.0}};
    const std::array<int, 4> orders{request.alpha[0], request.alpha[1], request.beta[0], request.beta[1]};
    for (std::size_t axis = 0; axis < 4; ++axis) {
        const auto st = central(orders[axis], h);
        std::vector<Tap> next;
        for (const auto& t : taps) {
            for (const auto& [off, w] : st.taps) {
                Tap n = t;
                n.offset[axis] = off;
                n.weight *= w;
                next.push_back(n);
            }
        }
        taps = std::move(next);
    }
    const double reach = h * std::sqrt(2.0) * 1.0001;
    if (orders[2] + orders[3] > 0 && !(domain.distance(std::span<const double>(y.data(), 2)) > reach)) {
        throw ValidationError("differencing stencil in y leaves the sector");
    }

    std::vector<KernelSample> out;
    out.reserve(points.size());
    for (const auto& [x, t] : points) {
        if (!(domain.distance(std::span<const double>(x.data(), 2)) > reach) || x.norm() + reach >= outer_radius) {
            throw ValidationError("differencing stencil leaves the mesh");
        }
        double fd = 0.0;
        for (const auto& tap : taps) {
            const Vector xs{{x[0] + tap.offset[0] * h, x[1] + tap.offset[1] * h}};
            const Vector ys{{y[0] + tap.offset[2] * h, y[1] + tap.offset[3] * h}};
            fd += tap.weight * oblique(xs, ys, t);
        }
        KernelSample k;
        k.x = x;
        k.y = y;
        k.t = t;
        k.s = s;
        k.alpha = request.alpha;
        k.beta = request.beta;
        k.value = fd - gamma_deriv(path, request.alpha, request.beta, false, std::span<const double>(x.data(), 2),
                                   std::span<const double>(y.data(), 2), t, s);
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace wedge
