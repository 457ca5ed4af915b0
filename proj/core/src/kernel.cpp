#include "wedge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "wedge/errors.hpp"

namespace wedge {

int order(const MultiIndex& index) {
    int total = 0;
    for (const int k : index) {
        if (k < 0) { throw ValidationError("multi-index entries must be non-negative"); }
        total += k;
    }
    return total;
}

Matrix spd_inverse(const Matrix& m) {
    const auto n = m.rows();
    if (n == 1) { return Matrix::Constant(1, 1, 1.0 / m(0, 0)); }
    if (n == 2) {
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        Matrix inv(2, 2);
        inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        return inv / det;
    }
    if (n == 3) {
        const Eigen::Matrix3d fixed = m;
        return Matrix(fixed.inverse());
    }
    const Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) { throw NumericalError("matrix is not positive definite"); }
    return llt.solve(Matrix::Identity(n, n));
}

FrozenGaussian::FrozenGaussian(const Matrix& m) : precision_(spd_inverse(m)) {
    const double det = m.determinant();
    if (!(det > 0.0)) { throw NumericalError("covariance matrix is not positive definite"); }
    const double n = static_cast<double>(m.rows());
    norm_ = std::pow(4.0 * std::numbers::pi, -0.5 * n) / std::sqrt(det);
}

double FrozenGaussian::value(std::span<const double> z) const {
    const int n = dimension();
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) { q += precision_(i, j) * z[i] * z[j]; }
    }
    return norm_ * std::exp(-0.25 * q);
}

double FrozenGaussian::derivative(std::span<const double> z, const MultiIndex& gamma) const {
    const int n = dimension();
    if (static_cast<int>(gamma.size()) != n) { throw ValidationError("multi-index length does not match dimension"); }
    const double base = value(z);
    if (order(gamma) == 0) { return base; }

    // w = grad of the exponent; D^{g+e_i} G = w_i D^g G - 1/2 sum_j g_j P_ij D^{g-e_j} G.
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) { w[i] -= 0.5 * precision_(i, j) * z[j]; }
    }
    std::map<MultiIndex, double> memo;
    memo[MultiIndex(n, 0)] = base;
    auto eval = [&](auto&& self, const MultiIndex& g) -> double {
        if (const auto it = memo.find(g); it != memo.end()) { return it->second; }
        int i = 0;
        while (g[i] == 0) { ++i; }
        MultiIndex lower = g;
        --lower[i];
        double v = w[i] * self(self, lower);
        for (int j = 0; j < n; ++j) {
            if (lower[j] == 0) { continue; }
            MultiIndex lower2 = lower;
            --lower2[j];
            v -= 0.5 * lower[j] * precision_(i, j) * self(self, lower2);
        }
        memo[g] = v;
        return v;
    };
    return eval(eval, gamma);
}

namespace {

void check_points(const CoefficientPath& path, std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<std::size_t>(path.dimension());
    if (x.size() != n || y.size() != n) { throw ValidationError("point dimension does not match coefficient dimension"); }
}

std::vector<double> difference(std::span<const double> x, std::span<const double> y) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) { z[i] = x[i] - y[i]; }
    return z;
}

}  // namespace

double gamma(const CoefficientPath& path, std::span<const double> x, std::span<const double> y, double t, double s) {
    check_points(path, x, y);
    if (!(t > s)) { return 0.0; }
    const FrozenGaussian g(integrate(path, s, t));
    return g.value(difference(x, y));
}

double gamma_deriv(const CoefficientPath& path, const MultiIndex& alpha, const MultiIndex& beta, bool d_s,
                   std::span<const double> x, std::span<const double> y, double t, double s) {
    check_points(path, x, y);
    const int n = path.dimension();
    if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n) {
        throw ValidationError("multi-index length does not match dimension");
    }
    if (d_s && path.is_breakpoint(s)) { throw ValidationError("derivative undefined at breakpoint: d/ds at s = " + format_double(s)); }
    if (!(t > s)) { return 0.0; }

    const FrozenGaussian g(integrate(path, s, t));
    const auto z = difference(x, y);
    MultiIndex gam(n);
    for (int i = 0; i < n; ++i) { gam[i] = alpha[i] + beta[i]; }
    const double sign = (order(beta) % 2 == 0) ? 1.0 : -1.0;
    if (!d_s) { return sign * g.derivative(z, gam); }

    // d/ds Gamma = -a_ij(s) D_z^{e_i + e_j} Gamma, since dM/ds = -A(s).
    const Matrix& a = path.at(s);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (a(i, j) == 0.0) { continue; }
            MultiIndex raised = gam;
            ++raised[i];
            ++raised[j];
            total -= a(i, j) * g.derivative(z, raised);
        }
    }
    return sign * total;
}

double hull_tail_rate(std::vector<DecayPoint> points) {
    if (points.size() < 2) { throw ValidationError("decay fit needs at least two points"); }
    std::sort(points.begin(), points.end(), [](const DecayPoint& a, const DecayPoint& b) {
        return a.xi2 < b.xi2 || (a.xi2 == b.xi2 && a.log_g > b.log_g);
    });
    // Upper hull via the monotone chain; collinear points are dropped.
    std::vector<DecayPoint> hull;
    for (const auto& p : points) {
        if (!hull.empty() && hull.back().xi2 == p.xi2) { continue; }
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.xi2 - a.xi2) * (p.log_g - a.log_g) - (b.log_g - a.log_g) * (p.xi2 - a.xi2);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    if (hull.size() < 2) { throw ValidationError("decay fit needs two distinct |x-y|^2/(t-s) values"); }
    const auto& a = hull[hull.size() - 2];
    const auto& b = hull.back();
    return -(b.log_g - a.log_g) / (b.xi2 - a.xi2);
}

GaussianBoundFit verify_gaussian_bound(const CoefficientPath& path, const MultiIndex& alpha, const MultiIndex& beta,
                                       bool d_s, std::span<const SpaceTimePair> cloud) {
    if (cloud.empty()) { throw ValidationError("empty sample cloud"); }
    const int n = path.dimension();
    const double power = 0.5 * (n + order(alpha) + order(beta) + (d_s ? 2 : 0));

    std::vector<DecayPoint> points;
    std::vector<std::size_t> origin;
    points.reserve(cloud.size());
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        const auto& p = cloud[k];
        if (!(p.t > p.s)) { throw ValidationError("sample with t <= s"); }
        const double v = gamma_deriv(path, alpha, beta, d_s, std::span(p.x.data(), p.x.size()),
                                     std::span(p.y.data(), p.y.size()), p.t, p.s);
        const double g = std::abs(v) * std::pow(p.t - p.s, power);
        if (!(g > 0.0)) { continue; }
        points.push_back({(p.x - p.y).squaredNorm() / (p.t - p.s), std::log(g)});
        origin.push_back(k);
    }
    if (points.size() < 2) { throw NumericalError("fewer than two non-zero samples in cloud"); }

    GaussianBoundFit fit;
    fit.sigma_emp = hull_tail_rate(points);
    const std::size_t half = cloud.size() / 2;
    double c_half = 0.0;
    double c_full = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double c = std::exp(points[k].log_g + fit.sigma_emp * points[k].xi2);
        c_full = std::max(c_full, c);
        if (origin[k] < half) { c_half = std::max(c_half, c); }
    }
    fit.C_emp = c_full;
    fit.stable = c_half > 0.0 && (c_full - c_half) < 0.1 * c_full;
    return fit;
}

}  // namespace wedge
