#include "wedge/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "wedge/appendix.hpp"
#include "wedge/bounds.hpp"
#include "wedge/errors.hpp"
#include "wedge/exponents.hpp"
#include "wedge/norms.hpp"
#include "wedge/oblique.hpp"
#include "wedge/sample_io.hpp"

namespace wedge::cli {

using json = nlohmann::ordered_json;

std::string ExperimentConfig::hash() const {
    const std::string text = "command=" + command + "\n" + options.serialize() + "seed=" + std::to_string(seed) + "\n";
    return hex64(fnv1a64(text));
}

std::string ExperimentConfig::header() const { return "# config_hash=" + hash() + " seed=" + std::to_string(seed); }

namespace {

constexpr double kPi = std::numbers::pi;

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) { throw ValidationError("cannot write '" + path + "'"); }
    file << text;
    if (!file) { throw ValidationError("failed writing '" + path + "'"); }
}

Vector parse_point(const std::string& text, const char* what) {
    const auto values = parse_double_list(text);
    if (values.empty()) { throw ValidationError(std::string("empty point for ") + what); }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

MultiIndex parse_orders(const std::string& text, int n) {
    if (text.empty()) { return MultiIndex(static_cast<std::size_t>(n), 0); }
    MultiIndex index;
    for (double v : parse_double_list(text)) {
        if (v < 0.0 || v != std::floor(v)) { throw ValidationError("multi-index entries must be non-negative integers"); }
        index.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(index.size()) != n) { throw ValidationError("multi-index length must equal the dimension"); }
    return index;
}

/// Merges a loaded file into the options under `prefix.`.
void record_file(KeyValueConfig& options, const std::string& prefix, const KeyValueConfig& contents) {
    for (const auto& [key, value] : contents.entries()) { options.set(prefix + "." + key, value); }
}

CoefficientPath load_coefficients(const std::string& path) {
    return CoefficientPath::from_config(KeyValueConfig::load(path));
}

// Problem files:  bc=dirichlet|oblique  theta0=<angle>  coeffs=<file> (or the
// coefficient keys n, breakpoints, piece.k inline)  optional forcing
// source.center=x,y source.width=w source.amplitude=a source.duration=T,
// optional initial data initial.center=x,y initial.width=w, vertex_exponent=e.
struct LoadedProblem {
    ProblemSpec spec;
    double theta0 = kPi / 2.0;
    KeyValueConfig canonical;
};

LoadedProblem load_problem(const std::string& path) {
    const auto config = KeyValueConfig::load(path);
    LoadedProblem problem;
    problem.spec.bc = boundary_from_string(config.find("bc").value_or("dirichlet"));
    problem.theta0 = config.get_double("theta0", kPi / 2.0);
    if (!(problem.theta0 > 0.0 && problem.theta0 < 2.0 * kPi)) { throw ValidationError("theta0 must lie in (0, 2 pi)"); }
    if (config.has("coeffs")) {
        const auto base = std::filesystem::path(path).parent_path();
        problem.spec.path = load_coefficients((base / config.get("coeffs")).string());
    } else if (config.has("n")) {
        problem.spec.path = CoefficientPath::from_config(config);
    }
    if (problem.spec.path.dimension() != 2) { throw ValidationError("sector problems need a 2 x 2 coefficient path"); }
    if (config.has("vertex_exponent")) { problem.spec.vertex_exponent = config.get_double("vertex_exponent"); }

    if (config.has("source.center")) {
        const Vector c = parse_point(config.get("source.center"), "source.center");
        if (c.size() != 2) { throw ValidationError("source.center needs two coordinates"); }
        const double w = config.get_double("source.width", 0.1);
        const double amp = config.get_double("source.amplitude", 1.0);
        const double duration = config.get_double("source.duration", INFINITY);
        if (!(w > 0.0)) { throw ValidationError("source.width must be positive"); }
        problem.spec.f0 = [c, w, amp, duration](double x, double y, double t) {
            if (t > duration) { return 0.0; }
            const double d2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
            return amp * std::exp(-d2 / (w * w));
        };
    }

    problem.canonical.set("bc", to_string(problem.spec.bc));
    problem.canonical.set("theta0", problem.theta0);
    record_file(problem.canonical, "coeffs", problem.spec.path.to_config());
    for (const auto& [key, value] : config.entries()) {
        if (key.rfind("source.", 0) == 0 || key.rfind("initial.", 0) == 0 || key == "vertex_exponent") {
            problem.canonical.set(key, value);
        }
    }
    return problem;
}

std::vector<double> initial_gaussian(const KeyValueConfig& problem, const SectorMesh& mesh) {
    if (!problem.has("initial.center")) { return {}; }
    const Vector c = parse_point(problem.get("initial.center"), "initial.center");
    if (c.size() != 2) { throw ValidationError("initial.center needs two coordinates"); }
    const double w = problem.get_double("initial.width", 0.1);
    if (!(w > 0.0)) { throw ValidationError("initial.width must be positive"); }
    std::vector<double> u(mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < mesh.nr(); ++i) {
        for (std::size_t j = 1; j + 1 < mesh.nt(); ++j) {
            const double dx = mesh.x(i, j) - c[0];
            const double dy = mesh.y(i, j) - c[1];
            u[mesh.index(i, j)] = std::exp(-(dx * dx + dy * dy) / (w * w));
        }
    }
    return u;
}

json sample_json(const KernelSample& s) {
    json j;
    j["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    j["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
    j["t"] = s.t;
    j["s"] = s.s;
    j["value"] = s.value;
    return j;
}

std::string dump(json j, const ExperimentConfig& config) {
    j["config_hash"] = config.hash();
    j["seed"] = config.seed;
    return j.dump(2) + "\n";
}

std::vector<double> linspace(double from, double to, int steps) {
    if (steps < 1) { throw ValidationError("steps must be at least 1"); }
    std::vector<double> grid;
    for (int k = 0; k < steps; ++k) {
        grid.push_back(steps == 1 ? from : from + (to - from) * static_cast<double>(k) / (steps - 1));
    }
    return grid;
}

/// Orders |alpha|, |beta| and the ds flag shared by every sample of the cloud.
void infer_orders(const std::vector<KernelSample>& samples, PresetParams& params, bool& d_s) {
    if (samples.empty()) { throw ValidationError("sample file is empty"); }
    const auto& first = samples.front();
    params.n = static_cast<int>(first.x.size());
    params.alpha = order(first.alpha);
    params.beta = order(first.beta);
    d_s = first.d_s;
    for (const auto& s : samples) {
        if (order(s.alpha) != params.alpha || order(s.beta) != params.beta || s.d_s != d_s) {
            throw ValidationError("all samples of a fit must carry the same derivative orders");
        }
    }
}

struct Options {
    std::string out;
    // kernel
    std::string coeffs, x, y, alpha, beta;
    double t = 1.0, s = 0.0;
    bool ds = false;
    int precision = 6;
    // lambda
    std::string domain, sign = "plus", method = "fit";
    // solve / green / oblique
    std::string spec, mesh, format = "samples";
    int stride = 1;
    double eps = NAN;
    std::size_t samples = 2000;
    double r_lo = 0.0, r_hi = INFINITY, min_age = NAN;
    std::size_t level_stride = 8, node_stride = 3;
    // verify-bound
    std::string preset, sample_file;
    double eps_loss = 0.05, lambda_plus = 1.0, lambda_minus = 1.0, sigma = 0.125, mu = 0.0, theta0 = kPi / 2.0;
    double lambda1 = 0.0, lambda2 = 0.0, r = 1.0, eps1 = 0.0, eps2 = 0.0, kappa = 1.0, delta = 1.0;
    bool vertex = false;
    // appendix
    std::string lemma;
    std::size_t sweep = 1000;
    double slope = 1.0;
    std::optional<double> za, zb, zc;
    int d = 2;
    double la = 0.0, lb = 0.0;
    // sweep / intervals
    std::string kind = "oblique", data = "vertex", variant = "pq";
    double p = 2.0, q = 2.0, mu_from = -1.5, mu_to = 1.5, eps_prime = 0.05;
    int steps = 13, refinements = 3, m = 2;
};

int cmd_kernel(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    const auto path = load_coefficients(o.coeffs);
    record_file(cfg.options, "coeffs", path.to_config());
    const Vector x = parse_point(o.x, "--x");
    const Vector y = parse_point(o.y, "--y");
    const int n = path.dimension();
    if (x.size() != n || y.size() != n) { throw ValidationError("points must have the coefficient dimension"); }
    const auto alpha = parse_orders(o.alpha, n);
    const auto beta = parse_orders(o.beta, n);
    const double v = gamma_deriv(path, alpha, beta, o.ds, as_span(x), as_span(y), o.t, o.s);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g\n", o.precision, v);
    write_output(buffer, o.out, out);
    return 0;
}

int cmd_lambda(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    const auto dconf = KeyValueConfig::load(o.domain);
    const auto domain = WedgeDomain::from_config(dconf);
    const auto path = load_coefficients(o.coeffs);
    record_file(cfg.options, "domain", domain.to_config());
    record_file(cfg.options, "coeffs", path.to_config());
    const auto sign = sign_from_string(o.sign);
    json j;
    if (o.method == "closed") {
        j["lambda"] = lambda_dirichlet(domain);
        j["method"] = to_string(ExponentMethod::closed_form);
        j["sign"] = to_string(sign);
        j["residual"] = 0.0;
        j["radii"] = json::array();
        write_output(dump(j, cfg), o.out, out);
        return 0;
    }
    if (o.method != "fit") { throw ValidationError("--method must be fit or closed"); }
    const auto report = estimate_lambda_c(path, domain, sign);
    j["lambda"] = report.lambda;
    j["method"] = to_string(report.method);
    j["sign"] = to_string(report.sign);
    j["residual"] = report.fit.residual;
    j["radii"] = report.fit.radii;
    j["sups"] = report.fit.sups;
    j["reliable"] = report.reliable;
    write_output(dump(j, cfg), o.out, out);
    return report.reliable ? 0 : 2;
}

int cmd_solve(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    auto problem = load_problem(o.spec);
    const auto mconf = KeyValueConfig::load(o.mesh);
    const auto mesh_spec = MeshSpec::from_config(mconf);
    record_file(cfg.options, "spec", problem.canonical);
    record_file(cfg.options, "mesh", mesh_spec.to_config());
    if (o.stride < 1) { throw ValidationError("--stride must be at least 1"); }
    auto mesh = std::make_shared<const SectorMesh>(mesh_spec.build(problem.theta0, problem.spec.path));
    problem.spec.initial = initial_gaussian(KeyValueConfig::load(o.spec), *mesh);
    const auto u = solve(problem.spec, mesh);
    write_output(cfg.header() + "\n" + grid_to_csv(u, static_cast<std::size_t>(o.stride)), o.out, out);
    return 0;
}

int cmd_green(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    const auto problem = load_problem(o.spec);
    const auto mesh_spec = MeshSpec::from_config(KeyValueConfig::load(o.mesh));
    record_file(cfg.options, "spec", problem.canonical);
    record_file(cfg.options, "mesh", mesh_spec.to_config());
    const Vector y = parse_point(o.y, "--y");
    if (y.size() != 2) { throw ValidationError("--y needs two coordinates"); }
    const auto table = green(problem.spec, y, o.s, o.eps, mesh_spec, problem.theta0);
    if (o.format == "grid") {
        write_output(cfg.header() + " epsilon=" + format_double(table.epsilon) + "\n" + grid_to_csv(table.u, o.stride),
                     o.out, out);
        return 0;
    }
    if (o.format != "samples") { throw ValidationError("--format must be samples or grid"); }
    TableSampling sampling;
    sampling.count = o.samples;
    sampling.seed = cfg.seed;
    sampling.min_age = o.min_age;
    sampling.r_lo = o.r_lo;
    sampling.r_hi = o.r_hi;
    const auto samples = table_samples(table, sampling);
    write_output(cfg.header() + " epsilon=" + format_double(table.epsilon) + "\n" + samples_to_csv(samples), o.out, out);
    return 0;
}

int cmd_oblique(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    const auto problem = load_problem(o.spec);
    const auto mesh_spec = MeshSpec::from_config(KeyValueConfig::load(o.mesh));
    record_file(cfg.options, "spec", problem.canonical);
    record_file(cfg.options, "mesh", mesh_spec.to_config());
    const Vector y = parse_point(o.y, "--y");
    if (y.size() != 2) { throw ValidationError("--y needs two coordinates"); }

    ProblemSpec oblique = problem.spec;
    oblique.bc = Boundary::oblique;
    ProblemSpec dirichlet = problem.spec;
    dirichlet.bc = Boundary::dirichlet;
    const auto direct = green(oblique, y, o.s, o.eps, mesh_spec, problem.theta0);
    const TableDifferenceProvider provider(dirichlet, y, o.s, direct.epsilon, mesh_spec, problem.theta0);
    const auto region = ComparisonRegion::standard(direct.epsilon);
    auto points = region_samples(direct, region, o.level_stride, o.node_stride);
    const auto direct_table = tabulate_direct(direct, points);
    const auto formula_table = tabulate_formula(provider, direct.epsilon, std::move(points));
    const auto report = cross_check(direct_table, formula_table, region);

    if (!o.out.empty()) {
        std::vector<KernelSample> samples;
        std::vector<std::string> kinds;
        for (const auto& point : formula_table.samples) {
            KernelSample smp;
            smp.x = Vector{{point.x1, point.x2}};
            smp.y = y;
            smp.t = point.t;
            smp.s = o.s;
            smp.alpha = {0, 0};
            smp.beta = {0, 0};
            smp.value = point.value;
            samples.push_back(smp);
            kinds.emplace_back("N");
            smp.value = point.value - gamma(problem.spec.path, as_span(smp.x), as_span(y), point.t, o.s);
            samples.push_back(smp);
            kinds.emplace_back("N_minus_Gamma");
        }
        write_output(cfg.header() + "\n" + samples_to_csv(samples, kinds), o.out, out);
    }
    json j;
    j["points"] = report.points;
    j["relative_l2"] = report.relative_l2;
    j["relative_sup"] = report.relative_sup;
    j["pass"] = report.pass;
    j["epsilon"] = direct.epsilon;
    write_output(dump(j, cfg), "", out);
    return report.pass ? 0 : 2;
}

int cmd_verify_bound(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    const auto preset = preset_from_string(o.preset);
    const auto cloud = load_samples(o.sample_file);
    std::ifstream raw(o.sample_file, std::ios::binary);
    std::stringstream contents;
    contents << raw.rdbuf();
    cfg.options.set("samples.hash", hex64(fnv1a64(contents.str())));

    const auto domain = o.domain.empty() ? make_sector(o.theta0) : WedgeDomain::from_config(KeyValueConfig::load(o.domain));
    record_file(cfg.options, "domain", domain.to_config());

    PresetParams params;
    bool d_s = false;
    infer_orders(cloud.samples, params, d_s);
    const std::string name = to_string(preset);
    const bool wants_ds = name.size() > 3 && name.compare(name.size() - 3, 3, "_ds") == 0;
    if (wants_ds != d_s) { throw ValidationError("preset and samples disagree on the d/ds derivative"); }
    params.lambda_plus = o.lambda_plus;
    params.lambda_minus = o.lambda_minus;
    params.eps = o.eps_loss;
    params.sigma = o.sigma;
    params.mu = o.mu;
    params.lambda1 = o.lambda1;
    params.lambda2 = o.lambda2;
    params.r = o.r;
    params.eps1 = o.eps1;
    params.eps2 = o.eps2;
    params.kappa = o.kappa;
    params.delta = o.delta;
    const auto env = make_preset(preset, params);
    const auto fit = fit_constant(cloud.samples, env, domain);

    json j;
    j["preset"] = to_string(preset);
    j["C_emp"] = fit.C_emp;
    j["C_half"] = fit.C_half;
    j["drift"] = fit.drift;
    j["stable"] = fit.stable;
    j["failed"] = fit.failed;
    j["samples"] = fit.samples;
    j["violations"] = fit.violations.size();
    j["worst"] = fit.worst;
    j["worst_sample"] = sample_json(fit.worst_sample);
    if (o.vertex) {
        const auto drift = vertex_drift(cloud.samples, env, domain, default_vertex_cutoffs());
        j["vertex_drift"] = {{"cutoffs", drift.cutoffs},
                             {"C_emp", drift.C_emp},
                             {"counts", drift.counts},
                             {"growth", drift.growth()}};
    }
    write_output(dump(j, cfg), o.out, out);
    return fit.stable && !fit.failed ? 0 : 2;
}

int cmd_appendix(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    if (o.sweep < 2) { throw ValidationError("--sweep needs at least 2 points"); }
    std::string csv;
    std::vector<double> ratios;
    if (o.lemma == "axis") {
        std::optional<std::array<double, 3>> exponents;
        const int given = (o.za ? 1 : 0) + (o.zb ? 1 : 0) + (o.zc ? 1 : 0);
        if (given != 0 && given != 3) { throw ValidationError("axis: give all of --a, --b, --c or none"); }
        if (given == 3) { exponents = std::array<double, 3>{*o.za, *o.zb, *o.zc}; }
        const auto rows = axis_integral_sweep(o.sweep, cfg.seed, o.slope, exponents);
        csv = "a,b,c,varrho1,varrho2,x1,y1,slope,lhs,rhs,ratio\n";
        for (const auto& row : rows) {
            const auto& p = row.params;
            for (double v : {p.a, p.b, p.c, p.varrho1, p.varrho2, p.x1, p.y1, p.phi.slope, row.value.lhs, row.value.rhs}) {
                csv += format_double(v) + ",";
            }
            csv += format_double(row.value.ratio) + "\n";
            ratios.push_back(row.value.ratio);
        }
    } else if (o.lemma == "convolution") {
        const auto rows = convolution_sweep(o.d, o.la, o.lb, o.sweep, cfg.seed);
        const auto join = [](const Vector& v) {
            std::string s;
            for (Eigen::Index i = 0; i < v.size(); ++i) { s += (i ? ";" : "") + format_double(v[i]); }
            return s;
        };
        csv = "d,a,b,varrho1,varrho2,x,y,lhs,rhs,ratio\n";
        for (const auto& row : rows) {
            const auto& p = row.params;
            csv += std::to_string(p.d) + "," + format_double(p.a) + "," + format_double(p.b) + "," +
                   format_double(p.varrho1) + "," + format_double(p.varrho2) + "," + join(p.x) + "," + join(p.y) +
                   "," + format_double(row.value.lhs) + "," + format_double(row.value.rhs) + "," +
                   format_double(row.value.ratio) + "\n";
            ratios.push_back(row.value.ratio);
        }
    } else {
        throw ValidationError("--lemma must be axis or convolution");
    }
    const auto c = sweep_constant(ratios);
    const bool stable = std::isfinite(c.C_full) && c.drift < 0.1;
    csv += "# C=" + format_double(c.C_full) + " C_half=" + format_double(c.C_half) + " drift=" + format_double(c.drift) +
           " stable=" + (stable ? "1" : "0") + "\n";
    write_output(cfg.header() + "\n" + csv, o.out, out);
    return stable ? 0 : 2;
}

int cmd_sweep(const Options& o, ExperimentConfig& cfg, std::ostream& out) {
    CoerciveSetup setup;
    setup.bc = boundary_from_string(o.kind);
    setup.theta0 = o.theta0;
    setup.norm.p = o.p;
    setup.norm.q = o.q;
    if (o.variant == "tilde_pq") {
        setup.norm.variant = NormVariant::tilde_pq;
    } else if (o.variant != "pq") {
        throw ValidationError("--variant must be pq or tilde_pq");
    }
    setup.norm.validate();
    if (o.data == "vertex") {
        setup.data = CoerciveData::vertex_power;
    } else if (o.data == "bump") {
        setup.data = CoerciveData::gaussian_bump;
    } else {
        throw ValidationError("--data must be vertex or bump");
    }
    setup.eps_prime = o.eps_prime;
    if (!o.coeffs.empty()) {
        setup.path = load_coefficients(o.coeffs);
        record_file(cfg.options, "coeffs", setup.path.to_config());
    }
    if (!o.mesh.empty()) {
        setup.mesh = MeshSpec::from_config(KeyValueConfig::load(o.mesh));
        record_file(cfg.options, "mesh", setup.mesh.to_config());
    }
    const auto rows = sweep_mu(setup, linspace(o.mu_from, o.mu_to, o.steps), o.refinements);
    write_output(cfg.header() + "\n" + sweep_to_csv(rows), o.out, out);
    return 0;
}

int cmd_intervals(const Options& o, ExperimentConfig&, std::ostream& out) {
    const auto interval = mu_interval(interval_kind_from_string(o.kind), o.p, o.m, o.lambda_plus, o.lambda_minus);
    write_output(format_interval(interval) + "\n", o.out, out);
    return 0;
}

/// Option values as recorded in the config hash, by their flag names.
void record_options(const CLI::App& sub, KeyValueConfig& options) {
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "--out" || opt->count() == 0) { continue; }
        std::string value;
        for (const auto& r : opt->results()) { value += (value.empty() ? "" : " ") + r; }
        options.set(opt->get_name(), value);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Green functions of parabolic operators in wedges", "wedge"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Random seed, recorded in every output")->capture_default_str();
    Options o;
    using Handler = std::function<int(const Options&, ExperimentConfig&, std::ostream&)>;
    std::vector<std::pair<CLI::App*, Handler>> handlers;

    {
        auto* sub = app.add_subcommand("kernel", "Whole-space kernel or one of its derivatives at a point");
        sub->add_option("--coeffs", o.coeffs, "Coefficient path file")->required();
        sub->add_option("--x", o.x, "Point x, comma separated")->required();
        sub->add_option("--y", o.y, "Point y, comma separated")->required();
        sub->add_option("--t", o.t, "Time t")->required();
        sub->add_option("--s", o.s, "Time s")->required();
        sub->add_option("--alpha", o.alpha, "x multi-index, comma separated");
        sub->add_option("--beta", o.beta, "y multi-index, comma separated");
        sub->add_flag("--ds", o.ds, "Differentiate once in s");
        sub->add_option("--precision", o.precision, "Significant digits")->check(CLI::Range(1, 17));
        sub->add_option("--out", o.out, "Output file (default stdout)");
        handlers.emplace_back(sub, cmd_kernel);
    }
    {
        auto* sub = app.add_subcommand("lambda", "Critical exponent of a sector");
        sub->add_option("--domain", o.domain, "Domain file")->required();
        sub->add_option("--coeffs", o.coeffs, "Coefficient path file")->required();
        sub->add_option("--sign", o.sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
        sub->add_option("--method", o.method, "fit (decay regression) or closed (Laplacian value)")
            ->check(CLI::IsMember({"fit", "closed"}));
        sub->add_option("--out", o.out, "Output file (default stdout)");
        handlers.emplace_back(sub, cmd_lambda);
    }
    {
        auto* sub = app.add_subcommand("solve", "Solve a sector problem and write the space-time grid");
        sub->add_option("--spec", o.spec, "Problem file")->required();
        sub->add_option("--mesh", o.mesh, "Mesh file")->required();
        sub->add_option("--stride", o.stride, "Write every k-th time level");
        sub->add_option("--out", o.out, "Output CSV (default stdout)");
        handlers.emplace_back(sub, cmd_solve);
    }
    {
        auto* sub = app.add_subcommand("green", "Numerical Green function of a sector problem");
        sub->add_option("--spec", o.spec, "Problem file")->required();
        sub->add_option("--mesh", o.mesh, "Mesh file")->required();
        sub->add_option("--y", o.y, "Source point, comma separated")->required();
        sub->add_option("--s", o.s, "Source time");
        sub->add_option("--eps", o.eps, "Mollifier width (default 4 local cells)");
        sub->add_option("--format", o.format, "samples (kernel sample CSV) or grid")
            ->check(CLI::IsMember({"samples", "grid"}));
        sub->add_option("--samples", o.samples, "Number of random samples");
        sub->add_option("--r-lo", o.r_lo, "Smallest sampled radius");
        sub->add_option("--r-hi", o.r_hi, "Largest sampled radius");
        sub->add_option("--min-age", o.min_age, "Smallest sampled t - s (default 10 eps^2)");
        sub->add_option("--stride", o.stride, "Grid format: write every k-th time level");
        sub->add_option("--out", o.out, "Output CSV (default stdout)");
        handlers.emplace_back(sub, cmd_green);
    }
    {
        auto* sub = app.add_subcommand("oblique", "Oblique Green function: direct solve against the axis formula");
        sub->add_option("--spec", o.spec, "Problem file (bc is ignored)")->required();
        sub->add_option("--mesh", o.mesh, "Mesh file")->required();
        sub->add_option("--y", o.y, "Source point, comma separated")->required();
        sub->add_option("--s", o.s, "Source time");
        sub->add_option("--eps", o.eps, "Mollifier width (default 4 local cells)");
        sub->add_option("--level-stride", o.level_stride, "Compare every k-th time level");
        sub->add_option("--node-stride", o.node_stride, "Compare every k-th node per direction");
        sub->add_option("--out", o.out, "Sample CSV with kind N / N_minus_Gamma");
        handlers.emplace_back(sub, cmd_oblique);
    }
    {
        auto* sub = app.add_subcommand("verify-bound", "Fit the constant of a bound envelope to kernel samples");
        sub->add_option("--preset", o.preset, "Envelope preset")->required();
        sub->add_option("--samples", o.sample_file, "Kernel sample CSV")->required();
        sub->add_option("--domain", o.domain, "Domain file (default: sector of angle --theta0)");
        sub->add_option("--theta0", o.theta0, "Sector angle when no domain file is given");
        sub->add_option("--lambda-plus", o.lambda_plus, "lambda^+");
        sub->add_option("--lambda-minus", o.lambda_minus, "lambda^-");
        sub->add_option("--eps", o.eps_loss, "Exponent loss epsilon");
        sub->add_option("--sigma", o.sigma, "Gaussian rate");
        sub->add_option("--mu", o.mu, "Weight exponent");
        sub->add_option("--lambda1", o.lambda1, "Operator hypothesis: x-side vertex exponent");
        sub->add_option("--lambda2", o.lambda2, "Operator hypothesis: y-side vertex exponent");
        sub->add_option("--r", o.r, "Operator hypothesis: weight shift, 0 <= r <= 2");
        sub->add_option("--eps1", o.eps1, "Operator hypothesis: x-side rate exponent");
        sub->add_option("--eps2", o.eps2, "Operator hypothesis: y-side rate exponent");
        sub->add_option("--kappa", o.kappa, "Extra time power (operator_hypothesis_delta)");
        sub->add_option("--delta", o.delta, "Scale factor (operator_hypothesis_delta)");
        sub->add_flag("--vertex-drift", o.vertex, "Also report C_emp as samples approach the vertex");
        sub->add_option("--out", o.out, "Output JSON (default stdout)");
        handlers.emplace_back(sub, cmd_verify_bound);
    }
    {
        auto* sub = app.add_subcommand("appendix", "Random sweeps of the auxiliary integral inequalities");
        sub->add_option("--lemma", o.lemma, "axis (weighted axis integral) or convolution (weighted Gaussian convolution)")
            ->required()
            ->check(CLI::IsMember({"axis", "convolution"}));
        sub->add_option("--sweep", o.sweep, "Number of random points")->required();
        sub->add_option("--slope", o.slope, "axis: slope of phi");
        sub->add_option("--a", o.la, "convolution: exponent a; axis: fixes a (with --b, --c)");
        sub->add_option("--b", o.lb, "convolution: exponent b; axis: fixes b");
        sub->add_option("--c", o.zc, "axis: fixes c");
        sub->add_option("--d", o.d, "convolution: dimension")->check(CLI::Range(1, 3));
        sub->add_option("--out", o.out, "Output CSV (default stdout)");
        handlers.emplace_back(sub, cmd_appendix);
    }
    {
        auto* sub = app.add_subcommand("sweep", "Coercive ratio over a weight grid and mesh refinements");
        sub->add_option("--kind", o.kind, "oblique or dirichlet")->check(CLI::IsMember({"oblique", "dirichlet"}));
        sub->add_option("--p", o.p, "Space exponent p");
        sub->add_option("--q", o.q, "Time exponent q");
        sub->add_option("--mu-from", o.mu_from, "First weight exponent");
        sub->add_option("--mu-to", o.mu_to, "Last weight exponent");
        sub->add_option("--steps", o.steps, "Number of mu grid points");
        sub->add_option("--refinements", o.refinements, "Mesh refinement levels beyond the base")->check(CLI::Range(0, 6));
        sub->add_option("--data", o.data, "vertex or bump")->check(CLI::IsMember({"vertex", "bump"}));
        sub->add_option("--variant", o.variant, "pq or tilde_pq");
        sub->add_option("--theta0", o.theta0, "Sector angle");
        sub->add_option("--eps-prime", o.eps_prime, "Exponent margin of the vertex data");
        sub->add_option("--coeffs", o.coeffs, "Coefficient path file (default identity)");
        sub->add_option("--mesh", o.mesh, "Base mesh file (default coercive mesh)");
        sub->add_option("--out", o.out, "Output CSV (default stdout)");
        handlers.emplace_back(sub, cmd_sweep);
    }
    {
        auto* sub = app.add_subcommand("intervals", "Admissible weight interval");
        sub->add_option("--kind", o.kind, "whole_space, dirichlet_2nd, dirichlet_1st or oblique");
        sub->add_option("--m", o.m, "Space dimension");
        sub->add_option("--p", o.p, "Space exponent p");
        sub->add_option("--lambda-plus", o.lambda_plus, "lambda^+");
        sub->add_option("--lambda-minus", o.lambda_minus, "lambda^-");
        sub->add_option("--out", o.out, "Output file (default stdout)");
        handlers.emplace_back(sub, cmd_intervals);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "wedge: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    for (auto& [sub, handler] : handlers) {
        if (!sub->parsed()) { continue; }
        ExperimentConfig cfg;
        cfg.command = sub->get_name();
        cfg.seed = seed;
        record_options(*sub, cfg.options);
        if (cfg.command == "appendix" && o.lemma == "axis") {
            if (sub->get_option("--a")->count() > 0) { o.za = o.la; }
            if (sub->get_option("--b")->count() > 0) { o.zb = o.lb; }
        }
        try {
            return handler(o, cfg, out);
        } catch (const NumericalError& e) {
            err << "wedge " << cfg.command << ": numerical failure: " << e.what() << "\n";
            return 2;
        } catch (const std::logic_error& e) {
            err << "wedge " << cfg.command << ": " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            err << "wedge " << cfg.command << ": numerical failure: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) { args.emplace_back(argv[k]); }
    return run(args, std::cout, std::cerr);
}

}  // namespace wedge::cli
