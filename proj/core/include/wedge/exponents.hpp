#pragma once

// Corner exponents: lambda_D from the first Dirichlet eigenvalue of the
// cross-section, and a decay-rate estimate of lambda_c^{+-} obtained by
// solving the homogeneous problem and regressing sup|u| against box radius.

#include <string>
#include <vector>

#include "wedge/coefficients.hpp"
#include "wedge/geometry.hpp"

namespace wedge {

enum class ExponentMethod { closed_form, eigen_solve, decay_fit };
enum class ExponentSign { plus, minus };

const char* to_string(ExponentMethod method);
const char* to_string(ExponentSign sign);
ExponentSign sign_from_string(const std::string& text);

struct FitDiagnostics {
    std::vector<double> radii;
    std::vector<double> sups;          // sup |u| over Q_rho, normalized by sup over Q_{kappa R}
    double residual = 0.0;             // RMS residual of the log-log regression
    double kappa = 0.75;
    double t0 = 0.0;                   // top of the parabolic boxes
    std::vector<double> seed_slopes;   // slope per seed, final pass
    std::string seed;                  // seed attaining the minimum slope
};

struct CriticalExponentReport {
    double lambda = 0.0;
    ExponentMethod method = ExponentMethod::closed_form;
    ExponentSign sign = ExponentSign::plus;
    FitDiagnostics fit;
    bool reliable = true;
};

/// lambda_D = -(m-2)/2 + sqrt(Lambda_D + (m-2)^2/4) for the Laplacian.  Sectors
/// give pi/theta0; circular cones in R^3 solve P_nu(cos beta) = 0 for nu.
double lambda_dirichlet(const WedgeDomain& domain);

/// Decay-fit settings.  Radii rho_j = R 2^{-j}, j = 1..J, lie on a log-polar
/// mesh with `nodes_per_octave` radial nodes per doubling.
struct DecayFitConfig {
    double R = 0.16;
    int J = 5;
    int nodes_per_octave = 8;
    double r_min_fraction = 1.0 / 1024.0; // r_min = R * fraction, a mesh node
    double r_domain = 1.0;
    int n_theta = 64;
    double t_start = 0.0;
    double T = 0.3;                       // scaled by n / tr A(t_start)
    int steps = 150;
    double residual_threshold = 0.05;
    bool second_pass = true;              // re-solve with the vertex row set to the first estimate
};

CriticalExponentReport estimate_lambda_c(const CoefficientPath& path, const WedgeDomain& domain, ExponentSign sign,
                                         const DecayFitConfig& config = {});

}  // namespace wedge
