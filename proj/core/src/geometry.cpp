#include "wedge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance from a point at angle `gap` (measured inside the cone) to a ray.
// cot with the half-plane case snapped to exactly zero.
double cotangent(double angle) {
    const double c = std::cos(angle) / std::sin(angle);
    return std::abs(c) < 1e-14 ? 0.0 : c;
}

double ray_distance(double rho, double gap) { return gap <= 0.5 * kPi ? rho * std::sin(gap) : rho; }

double norm_prefix(std::span<const double> x, int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) { s += x[i] * x[i]; }
    return std::sqrt(s);
}

double sector_distance(double theta0, double x1, double x2) {
    const double rho = std::hypot(x1, x2);
    if (rho == 0.0) { return 0.0; }
    double theta = std::atan2(x2, x1);
    if (theta < 0.0) { theta += 2.0 * kPi; }
    if (theta > 0.0 && theta < theta0) {
        return std::min(ray_distance(rho, theta), ray_distance(rho, theta0 - theta));
    }
    const double below = (theta == 0.0) ? 0.0 : 2.0 * kPi - theta;
    return -std::min(ray_distance(rho, below), ray_distance(rho, std::max(theta - theta0, 0.0)));
}

double cone_distance(double half_angle, std::span<const double> xp) {
    const double rho = norm_prefix(xp, static_cast<int>(xp.size()));
    if (rho == 0.0) { return 0.0; }
    const double psi = std::acos(std::clamp(xp[0] / rho, -1.0, 1.0));
    if (psi < half_angle) { return ray_distance(rho, half_angle - psi); }
    return -ray_distance(rho, psi - half_angle);
}

double graph_distance(const LipschitzGraph& g, std::span<const double> xp) {
    const int k = static_cast<int>(xp.size()) - 1;
    const double rho = norm_prefix(xp, k + 1);
    if (rho == 0.0) { return 0.0; }
    std::vector<double> hat(xp.begin() + 1, xp.end());
    const bool inside = xp[0] > g.phi(hat);

    auto dist2 = [&](std::span<const double> z) {
        double s = (xp[0] - g.phi(z)) * (xp[0] - g.phi(z));
        for (int i = 0; i < k; ++i) { s += (xp[i + 1] - z[i]) * (xp[i + 1] - z[i]); }
        return s;
    };

    // The vertex is a candidate; it is also where phi may fail to be smooth.
    const std::vector<double> origin(k, 0.0);
    double best = dist2(origin);

    if (k == 1) {
        // The foot point lies within rho of x^ since the vertex is at distance rho.
        constexpr int kScan = 256;
        const double lo = xp[1] - rho;
        const double step = 2.0 * rho / kScan;
        int best_i = 0;
        double best_scan = INFINITY;
        for (int i = 0; i <= kScan; ++i) {
            const double z = lo + i * step;
            const double v = dist2(std::span(&z, 1));
            if (v < best_scan) {
                best_scan = v;
                best_i = i;
            }
        }
        const double a = lo + std::max(best_i - 1, 0) * step;
        const double b = lo + std::min(best_i + 1, kScan) * step;
        const auto [zmin, vmin] = boost::math::tools::brent_find_minima(
            [&](double z) { return dist2(std::span(&z, 1)); }, a, b, 52);
        (void)zmin;
        best = std::min({best, best_scan, vmin});
    } else {
        // Compass search from the best of a deterministic sample of the ball.
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> normal;
        std::vector<double> z(hat);
        double fz = dist2(z);
        std::vector<double> trial(k);
        for (int sample = 0; sample < 512; ++sample) {
            double r2 = 0.0;
            for (int i = 0; i < k; ++i) {
                trial[i] = normal(rng);
                r2 += trial[i] * trial[i];
            }
            const double scale = rho * std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng)) / std::sqrt(r2);
            for (int i = 0; i < k; ++i) { trial[i] = hat[i] + scale * trial[i]; }
            const double v = dist2(trial);
            if (v < fz) {
                fz = v;
                z = trial;
            }
        }
        for (double h = 0.25 * rho; h > 1e-10 * rho;) {
            bool improved = false;
            for (int i = 0; i < k && !improved; ++i) {
                for (const double sgn : {1.0, -1.0}) {
                    trial = z;
                    trial[i] += sgn * h;
                    const double v = dist2(trial);
                    if (v < fz) {
                        fz = v;
                        z = trial;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) { h *= 0.5; }
        }
        best = std::min(best, fz);
    }
    const double d = std::sqrt(best);
    return inside ? d : -d;
}

}  // namespace

double WedgeDomain::theta0() const {
    if (!is_sector()) { throw ValidationError("domain is not a planar sector"); }
    return std::get<Sector>(cone_).theta0;
}

WedgeDomain WedgeDomain::graph_form() const {
    if (const auto* s = std::get_if<Sector>(&cone_)) { return make_graph_cone(cotangent(0.5 * s->theta0), m_, n_); }
    if (const auto* c = std::get_if<CircularCone>(&cone_)) { return make_graph_cone(cotangent(c->half_angle), m_, n_); }
    return *this;
}

Vector WedgeDomain::to_graph_frame(std::span<const double> x) const {
    Vector out = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
    if (is_sector()) {
        const double c = std::cos(0.5 * theta0());
        const double s = std::sin(0.5 * theta0());
        out[0] = c * x[0] + s * x[1];
        out[1] = -s * x[0] + c * x[1];
    }
    return out;
}

Vector WedgeDomain::from_graph_frame(std::span<const double> x) const {
    Vector out = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
    if (is_sector()) {
        const double c = std::cos(0.5 * theta0());
        const double s = std::sin(0.5 * theta0());
        out[0] = c * x[0] - s * x[1];
        out[1] = s * x[0] + c * x[1];
    }
    return out;
}

Vector WedgeDomain::axis_direction() const {
    Vector e = Vector::Zero(n_);
    if (is_sector()) {
        e[0] = std::cos(0.5 * theta0());
        e[1] = std::sin(0.5 * theta0());
    } else {
        e[0] = 1.0;
    }
    return e;
}

double WedgeDomain::distance(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) { throw ValidationError("point dimension does not match domain dimension"); }
    const auto xp = x.first(static_cast<std::size_t>(m_));
    if (const auto* s = std::get_if<Sector>(&cone_)) { return sector_distance(s->theta0, xp[0], xp[1]); }
    if (const auto* c = std::get_if<CircularCone>(&cone_)) { return cone_distance(c->half_angle, xp); }
    return graph_distance(std::get<LipschitzGraph>(cone_), xp);
}

PointGeometry WedgeDomain::geometry_at(std::span<const double> x, double t) const {
    if (!(t >= 0.0)) { throw ValidationError("elapsed time must be non-negative"); }
    const double d = distance(x);
    const double rho = norm_prefix(x, m_);
    if (rho == 0.0) { throw ValidationError("r_x undefined on the vertex axis x' = 0"); }
    PointGeometry g;
    g.d = d;
    g.inside = d > 0.0;
    g.r_x = d / rho;
    g.R_xt = rho / (rho + std::sqrt(t));
    return g;
}

KeyValueConfig WedgeDomain::to_config() const {
    KeyValueConfig config;
    config.set("m", std::to_string(m_));
    config.set("n", std::to_string(n_));
    if (const auto* s = std::get_if<Sector>(&cone_)) {
        config.set("sector.theta0", s->theta0);
    } else if (const auto* c = std::get_if<CircularCone>(&cone_)) {
        config.set("cone.half_angle", c->half_angle);
    } else {
        const auto& g = std::get<LipschitzGraph>(cone_);
        if (!g.slope) { throw ValidationError("general Lipschitz graph cones cannot be serialized"); }
        config.set("graph.slope", *g.slope);
    }
    return config;
}

WedgeDomain WedgeDomain::from_config(const KeyValueConfig& config) {
    const auto m = static_cast<int>(config.get_int("m", 2));
    const auto n = static_cast<int>(config.get_int("n", m));
    if (config.has("sector.theta0")) {
        if (m != 2) { throw ValidationError("sector domains need m = 2"); }
        return make_sector(config.get_double("sector.theta0"), n);
    }
    if (config.has("cone.half_angle")) { return make_circular_cone(config.get_double("cone.half_angle"), m, n); }
    if (config.has("graph.slope")) { return make_graph_cone(config.get_double("graph.slope"), m, n); }
    throw ValidationError("domain needs one of sector.theta0, cone.half_angle, graph.slope");
}

WedgeDomain make_sector(double theta0, int n) {
    if (!(theta0 > 0.0 && theta0 < 2.0 * kPi)) { throw ValidationError("sector angle must lie in (0, 2 pi)"); }
    if (n < 2) { throw ValidationError("sector domains need n >= 2"); }
    return WedgeDomain(2, n, Sector{theta0});
}

WedgeDomain make_circular_cone(double half_angle, int m, int n) {
    if (!(half_angle > 0.0 && half_angle < kPi)) { throw ValidationError("cone half-angle must lie in (0, pi)"); }
    if (m < 2 || n < m) { throw ValidationError("need 2 <= m <= n"); }
    return WedgeDomain(m, n, CircularCone{half_angle});
}

WedgeDomain make_lipschitz_cone(std::function<double(std::span<const double>)> phi, double Lambda, int m, int n) {
    if (!phi) { throw ValidationError("graph function is empty"); }
    if (!(Lambda >= 0.0) || !std::isfinite(Lambda)) { throw ValidationError("Lipschitz constant must be finite and >= 0"); }
    if (m < 2 || n < m) { throw ValidationError("need 2 <= m <= n"); }
    const int k = m - 1;
    std::mt19937_64 rng(0xc0ffee);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::vector<double> a(k), b(k), la(k);
    const std::vector<double> origin(k, 0.0);
    if (std::abs(phi(origin)) > 1e-12) { throw ValidationError("graph function must vanish at the origin"); }
    for (int trial = 0; trial < 64; ++trial) {
        for (int i = 0; i < k; ++i) {
            a[i] = normal(rng);
            b[i] = normal(rng);
        }
        const double lambda = scale(rng);
        for (int i = 0; i < k; ++i) { la[i] = lambda * a[i]; }
        const double pa = phi(a);
        if (std::abs(phi(la) - lambda * pa) > 1e-9 * (1.0 + std::abs(lambda * pa))) {
            throw ValidationError("graph function is not positively homogeneous of degree one");
        }
        double dist = 0.0;
        for (int i = 0; i < k; ++i) { dist += (a[i] - b[i]) * (a[i] - b[i]); }
        if (std::abs(pa - phi(b)) > Lambda * std::sqrt(dist) * (1.0 + 1e-9) + 1e-14) {
            throw ValidationError("graph function violates the stated Lipschitz constant");
        }
    }
    return WedgeDomain(m, n, LipschitzGraph{std::move(phi), Lambda, std::nullopt});
}

WedgeDomain make_graph_cone(double slope, int m, int n) {
    if (!std::isfinite(slope)) { throw ValidationError("graph slope must be finite"); }
    auto phi = [slope](std::span<const double> z) {
        double s = 0.0;
        for (const double v : z) { s += v * v; }
        return slope * std::sqrt(s);
    };
    auto domain = make_lipschitz_cone(phi, std::abs(slope), m, n);
    std::get<LipschitzGraph>(domain.cone_).slope = slope;
    return domain;
}

PointGeometry geometry_at(const WedgeDomain& domain, std::span<const double> x, double t) {
    return domain.geometry_at(x, t);
}

}  // namespace wedge
