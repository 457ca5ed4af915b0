#include "wedge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wedge/errors.hpp"

namespace wedge {

void BoundEnvelope::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) { throw ValidationError("envelope sigma must be positive"); }
    if (terms.empty()) { throw ValidationError("envelope needs at least one term"); }
    if (!(C > 0.0)) { throw ValidationError("envelope constant must be positive"); }
    for (const auto& t : terms) {
        if (!(t.coefficient > 0.0)) { throw ValidationError("envelope term coefficients must be positive"); }
    }
}

namespace {

double power(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

double prime_norm(std::span<const double> x, int m) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) { acc += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]; }
    return std::sqrt(acc);
}

}  // namespace

double envelope_eval(const BoundEnvelope& env, std::span<const double> x, std::span<const double> y, double t,
                     double s, const WedgeDomain& domain) {
    env.validate();
    const int n = domain.n();
    if (x.size() != static_cast<std::size_t>(n) || y.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("envelope points must have the domain dimension");
    }
    const double tau = t - s;
    if (!(tau > 0.0)) { throw ValidationError("envelope needs t > s"); }
    const PointGeometry gx = domain.geometry_at(x, tau);
    const PointGeometry gy = domain.geometry_at(y, tau);
    if (!gx.inside || !gy.inside) { throw ValidationError("envelope points must lie inside the cone"); }
    const double nx = prime_norm(x, domain.m());
    const double ny = prime_norm(y, domain.m());

    double dist2 = 0.0;
    if (env.anisotropic) {
        const Vector gxv = domain.to_graph_frame(x);
        const Vector gyv = domain.to_graph_frame(y);
        for (Eigen::Index i = 1; i < gxv.size(); ++i) { dist2 += (gxv[i] - gyv[i]) * (gxv[i] - gyv[i]); }
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) { dist2 += (x[i] - y[i]) * (x[i] - y[i]); }
    }

    double sum = 0.0;
    for (const auto& term : env.terms) {
        sum += term.coefficient * power(gx.R_xt, term.a_Rx) * power(gy.R_xt, term.a_Ry) * power(nx, term.b_x) *
               power(ny, term.b_y) * power(gx.r_x, -term.c_rx) * power(gy.r_x, -term.c_ry) * power(tau, term.p_t) *
               power(1.0 - gx.R_xt, term.a_one_minus_Rx);
    }
    return env.C * sum * std::exp(-env.sigma * dist2 / tau);
}

const char* to_string(Preset preset) {
    switch (preset) {
        case Preset::whole_space: return "whole_space";
        case Preset::whole_space_ds: return "whole_space_ds";
        case Preset::weight_commutator: return "weight_commutator";
        case Preset::weight_commutator_ds: return "weight_commutator_ds";
        case Preset::dirichlet: return "dirichlet";
        case Preset::dirichlet_ds: return "dirichlet_ds";
        case Preset::oblique: return "oblique";
        case Preset::oblique_ds: return "oblique_ds";
        case Preset::oblique_difference: return "oblique_difference";
        case Preset::oblique_difference_ds: return "oblique_difference_ds";
        case Preset::operator_hypothesis: return "operator_hypothesis";
        case Preset::operator_hypothesis_delta: return "operator_hypothesis_delta";
    }
    return "unknown";
}

std::vector<Preset> all_presets() {
    return {Preset::whole_space,        Preset::whole_space_ds,        Preset::weight_commutator,
            Preset::weight_commutator_ds, Preset::dirichlet,           Preset::dirichlet_ds,
            Preset::oblique,            Preset::oblique_ds,            Preset::oblique_difference,
            Preset::oblique_difference_ds, Preset::operator_hypothesis, Preset::operator_hypothesis_delta};
}

Preset preset_from_string(const std::string& text) {
    for (const Preset p : all_presets()) {
        if (text == to_string(p)) { return p; }
    }
    throw ValidationError("unknown envelope preset '" + text + "'");
}

BoundEnvelope make_preset(Preset preset, const PresetParams& q) {
    if (q.n < 1 || q.alpha < 0 || q.beta < 0) { throw ValidationError("preset orders must be non-negative"); }
    const double n = q.n;
    const double a = q.alpha;
    const double b = q.beta;
    const double ap = q.alpha_prime < 0 ? a : q.alpha_prime;
    const double bp = q.beta_prime < 0 ? b : q.beta_prime;
    const double lp = q.lambda_plus;
    const double lm = q.lambda_minus;
    const double e = q.eps;

    BoundEnvelope env;
    env.sigma = q.sigma;
    EnvelopeTerm t;
    switch (preset) {
        case Preset::whole_space:
        case Preset::whole_space_ds:
            t.p_t = -(n + a + b + (preset == Preset::whole_space_ds ? 2.0 : 0.0)) / 2.0;
            env.terms = {t};
            break;
        case Preset::weight_commutator:
        case Preset::weight_commutator_ds: {
            const double mu = q.mu;
            const double r = std::min(std::abs(mu), 1.0);
            t.p_t = -(n + (preset == Preset::weight_commutator_ds ? 4.0 : 2.0) - r) / 2.0;
            t.b_x = -r;
            // Phi(|x'|/|y'|) as a sum of monomials.
            auto monomial = [&](double k) {
                EnvelopeTerm u = t;
                u.b_x += k;
                u.b_y -= k;
                return u;
            };
            if (mu > 1.0) {
                env.terms = {monomial(mu), monomial(1.0)};
            } else if (mu > 0.0) {
                env.terms = {monomial(mu)};
            } else if (mu >= -1.0) {
                env.terms = {monomial(0.0)};
            } else {
                env.terms = {monomial(mu + 1.0), monomial(0.0)};
            }
            env.sigma = q.sigma / 2.0;
            break;
        }
        case Preset::dirichlet:
            t.a_Rx = lp - ap;
            t.c_rx = positive_part(ap - 2.0 + e);
            t.a_Ry = lm - bp;
            t.c_ry = positive_part(bp - 2.0 + e);
            t.p_t = -(n + a + b) / 2.0;
            env.terms = {t};
            break;
        case Preset::dirichlet_ds:
            t.a_Rx = lp - ap;
            t.c_rx = positive_part(ap - 2.0 + e);
            t.a_Ry = lm - bp - 2.0;
            t.c_ry = bp + e;
            t.p_t = -(n + a + b + 2.0) / 2.0;
            env.terms = {t};
            break;
        case Preset::oblique:
        case Preset::oblique_ds: {
            const bool ds = preset == Preset::oblique_ds;
            t.a_Rx = negative_part(lp - ap + 1.0);
            t.c_rx = positive_part(ap - 3.0 + e);
            t.a_Ry = ds ? lm - bp - 3.0 : lm - bp - 1.0;
            t.c_ry = ds ? bp + 1.0 + e : positive_part(bp - 1.0 + e);
            t.a_one_minus_Rx = -std::min(1.0, positive_part(ap - 2.0 + e));
            t.p_t = -(n + a + b + (ds ? 2.0 : 0.0)) / 2.0;
            env.terms = {t};
            env.anisotropic = true;
            break;
        }
        case Preset::oblique_difference:
        case Preset::oblique_difference_ds: {
            if (q.alpha != 2) { throw ValidationError("the oblique difference envelope is stated for |alpha| = 2"); }
            const bool ds = preset == Preset::oblique_difference_ds;
            const double base_t = -(n + (ds ? 4.0 : 2.0) + b) / 2.0;
            const double lead_R = negative_part(lp - 2.0);
            EnvelopeTerm first;
            first.a_Rx = lead_R;
            first.p_t = base_t + 0.5 + e;
            first.b_x = -(1.0 + e);
            first.c_rx = 1.0 + 3.0 * e;
            first.b_y = -e;
            first.c_ry = e;
            EnvelopeTerm second;
            second.a_Rx = lead_R;
            second.a_Ry = negative_part(lm - 1.0) - 1.0;
            second.p_t = base_t + b / 2.0 + (ds ? 2.0 : 1.0);
            second.b_x = -1.0;
            second.c_rx = 1.0 + 2.0 * e;
            second.b_y = -(b + (ds ? 3.0 : 1.0));
            second.c_ry = b + (ds ? 4.0 : 2.0);
            env.terms = {first, second};
            break;
        }
        case Preset::operator_hypothesis:
        case Preset::operator_hypothesis_delta: {
            if (!(q.r >= 0.0 && q.r <= 2.0)) { throw ValidationError("operator hypothesis needs 0 <= r <= 2"); }
            const bool with_delta = preset == Preset::operator_hypothesis_delta;
            t.a_Rx = q.lambda1 + q.r;
            t.a_Ry = q.lambda2;
            t.b_x = q.mu - q.r;
            t.b_y = -q.mu;
            t.c_rx = q.eps1;
            t.c_ry = q.eps2;
            t.p_t = -(n + 2.0 - q.r) / 2.0 - (with_delta ? q.kappa : 0.0);
            if (with_delta) { t.coefficient = std::pow(q.delta, q.kappa); }
            env.terms = {t};
            break;
        }
    }
    env.validate();
    return env;
}

FitReport fit_constant(std::span<const KernelSample> samples, const BoundEnvelope& env, const WedgeDomain& domain) {
    if (samples.empty()) { throw ValidationError("fit_constant needs at least one sample"); }
    BoundEnvelope unit = env;
    unit.C = 1.0;
    FitReport report;
    report.samples = samples.size();
    std::vector<double> ratios(samples.size());
    const std::size_t half = (samples.size() + 1) / 2;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& smp = samples[k];
        const double e = envelope_eval(unit, as_span(smp.x),
                                       as_span(smp.y),
                                       smp.t, smp.s, domain);
        const double v = std::abs(smp.value);
        double ratio = 0.0;
        if (e > 0.0) {
            ratio = v / e;
        } else if (v > 0.0) {
            ratio = std::numeric_limits<double>::infinity();
            report.failed = true;
        }
        ratios[k] = ratio;
        if (ratio > report.C_emp || k == 0) {
            report.C_emp = ratio;
            report.worst = k;
        }
        if (k < half) { report.C_half = std::max(report.C_half, ratio); }
    }
    report.worst_sample = samples[report.worst];
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        if (ratios[k] > env.C) { report.violations.push_back(k); }
    }
    if (std::isfinite(report.C_emp) && report.C_emp > 0.0) {
        report.drift = (report.C_emp - report.C_half) / report.C_emp;
        report.stable = report.drift < 0.1;
    } else {
        report.drift = std::numeric_limits<double>::infinity();
        report.stable = false;
    }
    return report;
}

double VertexDrift::growth() const {
    if (C_emp.size() < 2 || !(C_emp.front() > 0.0)) { return std::numeric_limits<double>::quiet_NaN(); }
    return C_emp.back() / C_emp.front();
}

std::vector<double> default_vertex_cutoffs() { return {0.1, 0.05, 0.02, 0.01, 0.005}; }

VertexDrift vertex_drift(std::span<const KernelSample> samples, const BoundEnvelope& env, const WedgeDomain& domain,
                         const std::vector<double>& cutoffs) {
    VertexDrift out;
    out.cutoffs = cutoffs;
    for (const double c : cutoffs) {
        std::vector<KernelSample> kept;
        for (const auto& smp : samples) {
            if (prime_norm(as_span(smp.x), domain.m()) >= c) {
                kept.push_back(smp);
            }
        }
        out.counts.push_back(kept.size());
        out.C_emp.push_back(kept.empty() ? 0.0 : fit_constant(kept, env, domain).C_emp);
    }
    return out;
}

std::vector<KernelSample> table_samples(const GreenTable& table, const TableSampling& sampling) {
    const SectorMesh& m = table.mesh();
    const double min_age = std::isnan(sampling.min_age) ? 10.0 * table.epsilon * table.epsilon : sampling.min_age;
    const auto& times = m.times();
    std::vector<std::size_t> levels;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] - table.s >= min_age) { levels.push_back(k); }
    }
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < m.nr(); ++i) {
        const double r = m.r(i);
        if (r < sampling.r_lo || r > sampling.r_hi) { continue; }
        for (std::size_t j = 0; j < m.nt(); ++j) {
            const double th = m.theta(j);
            const double d = r * std::sin(std::min(th, m.theta0() - th));
            if (std::min(th, m.theta0() - th) <= 0.0 || d < sampling.min_distance) { continue; }
            nodes.push_back(m.index(i, j));
        }
    }
    if (levels.empty() || nodes.empty()) { throw ValidationError("no table nodes satisfy the sampling constraints"); }
    std::mt19937_64 rng(sampling.seed);
    std::vector<KernelSample> out;
    out.reserve(sampling.count);
    for (std::size_t c = 0; c < sampling.count; ++c) {
        const std::size_t k = levels[static_cast<std::size_t>(rng() % levels.size())];
        const std::size_t node = nodes[static_cast<std::size_t>(rng() % nodes.size())];
        const std::size_t i = node / m.nt();
        const std::size_t j = node % m.nt();
        KernelSample smp;
        smp.x = Vector{{m.x(i, j), m.y(i, j)}};
        smp.y = table.y;
        smp.t = times[k];
        smp.s = table.s;
        smp.alpha = MultiIndex{0, 0};
        smp.beta = MultiIndex{0, 0};
        smp.value = table.u(k, i, j);
        out.push_back(std::move(smp));
    }
    return out;
}

}  // namespace wedge
