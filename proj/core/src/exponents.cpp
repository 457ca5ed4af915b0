#include "wedge/exponents.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "wedge/errors.hpp"
#include "wedge/parallel.hpp"
#include "wedge/solver.hpp"

namespace wedge {

namespace {

constexpr double kPi = std::numbers::pi;

// P_nu(cos beta) = 2F1(-nu, nu + 1; 1; (1 - cos beta)/2).
double legendre_p(double nu, double beta) {
    const double z = 0.5 * (1.0 - std::cos(beta));
    // Near a zero the series cancels completely; the root finder only needs the sign.
    using namespace boost::math::policies;
    return boost::math::hypergeometric_pFq({-nu, nu + 1.0}, {1.0}, z, static_cast<double*>(nullptr),
                                           make_policy(evaluation_error<ignore_error>()));
}

// Smallest nu > 0 with P_nu(cos beta) = 0: the first Dirichlet mode of a spherical cap.
double cap_degree(double beta) {
    double lo = 1e-6;
    double f_lo = legendre_p(lo, beta);
    for (double hi = 0.05; hi < 400.0; hi += 0.05) {
        const double f_hi = legendre_p(hi, beta);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            std::uintmax_t iterations = 200;
            const auto bracket = boost::math::tools::toms748_solve(
                [&](double nu) { return legendre_p(nu, beta); }, lo, hi, f_lo, f_hi,
                boost::math::tools::eps_tolerance<double>(50), iterations);
            return 0.5 * (bracket.first + bracket.second);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw NumericalError("no Legendre zero found for the cap");
}

struct Seed {
    std::string name;
    std::function<double(double r, double theta)> profile;
};

std::vector<Seed> seed_library(double theta0, double scale) {
    const double a = 0.4 * scale;
    const double b = 0.7 * scale;
    const double xc = 0.55 * scale * std::cos(theta0 / 3.0);
    const double yc = 0.55 * scale * std::sin(theta0 / 3.0);
    const double w = 0.1 * scale;
    return {
        {"annulus", [=](double r, double) { return (r >= a && r <= b) ? 1.0 : 0.0; }},
        {"bump",
         [=](double r, double t) {
             const double dx = r * std::cos(t) - xc;
             const double dy = r * std::sin(t) - yc;
             return std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
         }},
        {"ramp", [=](double r, double t) { return (r >= a && r <= b) ? t / theta0 : 0.0; }},
    };
}

struct SeedFit {
    double slope = 0.0;
    double residual = 0.0;
    double t0 = 0.0;
    std::vector<double> sups;
};

SeedFit fit_seed(const CoefficientPath& path, std::shared_ptr<const SectorMesh> mesh, const Seed& seed,
                 double vertex_exponent, const std::vector<double>& ladder, double kappa_radius) {
    const SectorMesh& m = *mesh;
    ProblemSpec spec;
    spec.bc = Boundary::dirichlet;
    spec.path = path;
    spec.vertex_exponent = vertex_exponent;
    spec.initial.resize(m.node_count());
    for (std::size_t i = 0; i < m.nr(); ++i) {
        for (std::size_t j = 0; j < m.nt(); ++j) { spec.initial[m.index(i, j)] = seed.profile(m.r(i), m.theta(j)); }
    }

    // Running sup of |u| over the balls B_rho (r <= rho), one column per radius.
    std::vector<double> radii = ladder;
    radii.push_back(kappa_radius);
    std::vector<std::size_t> last_node(radii.size());
    for (std::size_t q = 0; q < radii.size(); ++q) {
        const auto it = std::upper_bound(m.radii().begin(), m.radii().end(), radii[q] * (1.0 + 1e-12));
        last_node[q] = static_cast<std::size_t>(it - m.radii().begin());
    }
    std::vector<std::vector<double>> history(radii.size());
    WedgeSolver solver(spec, mesh);
    solver.run([&](std::size_t, double, std::span<const double> u) {
        for (std::size_t q = 0; q < radii.size(); ++q) {
            double sup = 0.0;
            for (std::size_t k = 0; k < last_node[q] * m.nt(); ++k) { sup = std::max(sup, std::abs(u[k])); }
            history[q].push_back(sup);
        }
    });

    // t0: the time the smallest box is most excited.
    const auto& probe = history[ladder.size() - 1];
    const auto k0 = static_cast<std::size_t>(std::max_element(probe.begin(), probe.end()) - probe.begin());
    const auto& times = m.times();
    auto box_sup = [&](std::size_t q, double rho) {
        double sup = 0.0;
        for (std::size_t k = 0; k <= k0; ++k) {
            if (times[k] > times[k0] - rho * rho) { sup = std::max(sup, history[q][k]); }
        }
        return sup;
    };
    const double norm = box_sup(radii.size() - 1, kappa_radius);
    if (!(norm > 0.0)) { throw NumericalError("seed '" + seed.name + "' never reaches the vertex region"); }

    SeedFit fit;
    fit.t0 = times[k0];
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t q = 0; q < ladder.size(); ++q) {
        const double s = box_sup(q, ladder[q]) / norm;
        if (!(s > 0.0)) { throw NumericalError("vanishing sup in the decay fit"); }
        fit.sups.push_back(s);
        lx.push_back(std::log(ladder[q]));
        ly.push_back(std::log(s));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t q = 0; q < lx.size(); ++q) {
        mx += lx[q] / n;
        my += ly[q] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t q = 0; q < lx.size(); ++q) {
        sxx += (lx[q] - mx) * (lx[q] - mx);
        sxy += (lx[q] - mx) * (ly[q] - my);
    }
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t q = 0; q < lx.size(); ++q) {
        const double e = ly[q] - (my + fit.slope * (lx[q] - mx));
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace

const char* to_string(ExponentMethod method) {
    switch (method) {
        case ExponentMethod::closed_form: return "closed_form";
        case ExponentMethod::eigen_solve: return "eigen_solve";
        case ExponentMethod::decay_fit: return "decay_fit";
    }
    return "unknown";
}

const char* to_string(ExponentSign sign) { return sign == ExponentSign::plus ? "plus" : "minus"; }

ExponentSign sign_from_string(const std::string& text) {
    if (text == "plus") { return ExponentSign::plus; }
    if (text == "minus") { return ExponentSign::minus; }
    throw ValidationError("sign must be 'plus' or 'minus', got '" + text + "'");
}

double lambda_dirichlet(const WedgeDomain& domain) {
    if (domain.is_sector()) { return kPi / domain.theta0(); }
    if (const auto* cone = std::get_if<CircularCone>(&domain.cone()); cone != nullptr && domain.m() == 3) {
        const double nu = cap_degree(cone->half_angle);
        const double big_lambda = nu * (nu + 1.0);
        return -0.5 + std::sqrt(big_lambda + 0.25);
    }
    throw ValidationError("lambda_D is available for planar sectors and circular cones in R^3 only");
}

CriticalExponentReport estimate_lambda_c(const CoefficientPath& path, const WedgeDomain& domain, ExponentSign sign,
                                         const DecayFitConfig& config) {
    if (!domain.is_sector() || domain.n() != 2) { throw ValidationError("decay fits need a planar sector with m = n = 2"); }
    if (path.dimension() != 2) { throw ValidationError("decay fits need a 2 x 2 coefficient path"); }
    if (config.J < 2 || config.nodes_per_octave < 2 || config.steps < 2) { throw ValidationError("decay fit needs J, nodes_per_octave, steps >= 2"); }
    const double theta0 = domain.theta0();
    const CoefficientPath working = sign == ExponentSign::plus ? path : time_reverse(path);

    std::vector<double> ladder;
    for (int j = 1; j <= config.J; ++j) { ladder.push_back(config.R * std::ldexp(1.0, -j)); }
    auto radii = geometric_radii(config.R, std::exp2(1.0 / config.nodes_per_octave), config.R * config.r_min_fraction,
                                 config.r_domain);
    if (radii.back() < config.r_domain * (1.0 - 1e-9)) { radii.push_back(config.r_domain); }

    const double mean_diag = working.at(config.t_start).trace() / 2.0;
    const double T = config.T / mean_diag;
    const double dt = T / config.steps;
    auto mesh = std::make_shared<const SectorMesh>(
        radii, theta0, config.n_theta, time_levels(config.t_start, config.t_start + T, dt, dt, 1, working));

    const auto seeds = seed_library(theta0, config.r_domain);
    const double kappa = 0.75;
    auto run_pass = [&](double vertex_exponent) {
        std::vector<SeedFit> fits(seeds.size());
        parallel_for(seeds.size(), [&](std::size_t k) {
            fits[k] = fit_seed(working, mesh, seeds[k], vertex_exponent, ladder, kappa * config.R);
        });
        return fits;
    };

    auto fits = run_pass(std::numeric_limits<double>::infinity());
    auto pick = [&](const std::vector<SeedFit>& all) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < all.size(); ++k) {
            if (all[k].slope < all[best].slope) { best = k; }
        }
        return best;
    };
    std::size_t best = pick(fits);
    if (config.second_pass && fits[best].slope > 0.0) {
        fits = run_pass(fits[best].slope);
        best = pick(fits);
    }

    CriticalExponentReport report;
    report.method = ExponentMethod::decay_fit;
    report.sign = sign;
    report.lambda = fits[best].slope;
    report.fit.radii = ladder;
    report.fit.sups = fits[best].sups;
    report.fit.residual = fits[best].residual;
    report.fit.kappa = kappa;
    report.fit.t0 = fits[best].t0;
    report.fit.seed = seeds[best].name;
    for (const auto& f : fits) { report.fit.seed_slopes.push_back(f.slope); }
    report.reliable = fits[best].residual <= config.residual_threshold;
    return report;
}

}  // namespace wedge
