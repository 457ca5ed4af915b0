#pragma once

// Parametric right-hand sides of pointwise kernel estimates and empirical
// constant fitting against sampled kernels.
//
// An envelope is C * sum_k c_k R_x^{a_Rx} R_y^{a_Ry} |x'|^{b_x} |y'|^{b_y}
// r_x^{-c_rx} r_y^{-c_ry} (t-s)^{p_t} (1 - R_x)^{a_1R} times exp(-sigma d^2 / (t-s)),
// where d is |x - y| or, for anisotropic envelopes, the distance with the
// axis component removed (graph frame).

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wedge/geometry.hpp"
#include "wedge/green.hpp"
#include "wedge/kernel.hpp"

namespace wedge {

struct EnvelopeTerm {
    double coefficient = 1.0;
    double a_Rx = 0.0;
    double a_Ry = 0.0;
    double b_x = 0.0;
    double b_y = 0.0;
    double c_rx = 0.0;
    double c_ry = 0.0;
    double p_t = 0.0;
    double a_one_minus_Rx = 0.0;
};

struct BoundEnvelope {
    std::vector<EnvelopeTerm> terms;
    double sigma = 0.125;
    bool anisotropic = false;
    double C = 1.0;

    void validate() const;
};

/// Throws for t <= s, points outside the cone, or points on the axis |x'| = 0.
double envelope_eval(const BoundEnvelope& env, std::span<const double> x, std::span<const double> y, double t,
                     double s, const WedgeDomain& domain);

enum class Preset {
    whole_space,               // (t-s)^{-(n+|a|+|b|)/2}
    whole_space_ds,            // one more power of (t-s)^{-1}
    weight_commutator,         // |x'|^{-r} Phi(|x'|/|y'|) (t-s)^{-(n+2-r)/2}, rate sigma/2
    weight_commutator_ds,
    dirichlet,                 // Dirichlet Green function
    dirichlet_ds,
    oblique,                   // oblique-derivative Green function
    oblique_ds,
    oblique_difference,        // second x-derivatives of N - Gamma, two terms
    oblique_difference_ds,
    operator_hypothesis,       // kernel hypothesis for weighted L_p boundedness
    operator_hypothesis_delta, // same with delta^kappa (t-s)^{-kappa}
};

const char* to_string(Preset preset);
Preset preset_from_string(const std::string& text);
std::vector<Preset> all_presets();

/// Orders are |alpha|, |alpha'|, |beta|, |beta'| (primed: components along x');
/// a negative primed order copies the unprimed one.
struct PresetParams {
    int n = 2;
    int alpha = 0;
    int alpha_prime = -1;
    int beta = 0;
    int beta_prime = -1;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double eps = 0.05;
    double sigma = 0.125;
    double mu = 0.0;
    // operator hypotheses
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double r = 1.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double kappa = 1.0;
    double delta = 1.0;
};

BoundEnvelope make_preset(Preset preset, const PresetParams& params);

/// (a)_+ = max(a, 0), (a)_- = min(a, 0).
inline double positive_part(double a) { return a > 0.0 ? a : 0.0; }
inline double negative_part(double a) { return a < 0.0 ? a : 0.0; }

struct FitReport {
    double C_emp = 0.0;
    std::size_t worst = 0;       // index of the sample attaining C_emp
    KernelSample worst_sample;
    double C_half = 0.0;         // C_emp over the first half of the cloud
    double drift = 0.0;          // (C_emp - C_half) / C_emp
    bool stable = false;         // finite and drift < 10%
    bool failed = false;         // envelope vanished at a nonzero sample
    std::vector<std::size_t> violations; // samples whose ratio exceeds env.C
    std::size_t samples = 0;
};

/// C_emp = max |value| / envelope(C = 1).  Stability compares the full cloud
/// with its first half, so clouds must be generated as nested prefixes.
FitReport fit_constant(std::span<const KernelSample> samples, const BoundEnvelope& env, const WedgeDomain& domain);

struct VertexDrift {
    std::vector<double> cutoffs;
    std::vector<double> C_emp;  // over samples with |x'| >= cutoff
    std::vector<std::size_t> counts;
    [[nodiscard]] double growth() const;  // C at the last cutoff over C at the first
};

/// C_emp on nested clouds obtained by admitting samples closer to the vertex.
VertexDrift vertex_drift(std::span<const KernelSample> samples, const BoundEnvelope& env, const WedgeDomain& domain,
                         const std::vector<double>& cutoffs);

std::vector<double> default_vertex_cutoffs(); // 0.1, 0.05, 0.02, 0.01, 0.005

struct TableSampling {
    std::size_t count = 2000;
    std::uint64_t seed = 1;
    double min_age = 0.0;       // t - s lower bound; NaN selects 10 eps^2
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();
    double min_distance = 0.0;  // to the edges
};

/// Random mesh nodes and time levels of a numerical Green table, in a
/// deterministic order so that prefixes are nested clouds.
std::vector<KernelSample> table_samples(const GreenTable& table, const TableSampling& sampling);

}  // namespace wedge
