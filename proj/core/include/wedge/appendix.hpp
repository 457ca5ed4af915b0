#pragma once

// Quadrature oracles for two auxiliary integral inequalities: a weighted
// one-dimensional Gaussian integral along the cone axis, and the convolution of
// two Gaussians with vertex weights in R^d.  Each returns the integral, the
// right-hand side with C = 1, and their ratio.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wedge/coefficients.hpp"

namespace wedge {

struct OracleValue {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// phi(zeta) = slope * zeta; |phi(zeta)| <= |slope| |zeta|.
struct PhiSpec {
    double slope = 0.0;
    [[nodiscard]] double operator()(double zeta) const { return slope * zeta; }
};

struct AxisIntegralParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double varrho1 = 1.0;
    double varrho2 = 1.0;
    double x1 = 0.0;
    double y1 = 0.0;
    PhiSpec phi;
    double eps = 0.05;
};

/// lhs = int_{x1}^inf ((r1+|z|)/(r1+r2+|z|))^{-a} ((r1+|z|)/(z-phi(r1)))^b (r2/(z-phi(r1)))^c
///       exp(-(z-y1)^2/r2^2) dz/r2, by panelled Gauss-Legendre.
/// Throws unless r1, r2 > 0, a, b, c >= 0, eps > 0 and x1 > phi(r1)
/// (x1 = phi(r1) is accepted when b = c = 0).
OracleValue axis_integral_oracle(const AxisIntegralParams& p);

struct ConvolutionParams {
    int d = 1;
    double a = 0.0;
    double b = 0.0;
    double varrho1 = 1.0;
    double varrho2 = 1.0;
    Vector x;
    Vector y;
    /// Integrate only over |z| >= inner_cutoff; required (> 0) when a + b <= -d
    /// or min(a, b) <= -d, where the full integral diverges.
    double inner_cutoff = 0.0;
};

/// lhs = int_{R^d} exp(-|x-z|^2/r1) exp(-|z-y|^2/r2) (|z|/(|z|+sqrt r1))^a (|z|/(|z|+sqrt r2))^b dz.
/// The two Gaussians combine into one centred Gaussian and the angular
/// integral is done in closed form (Bessel I), leaving a radial quadrature.
OracleValue convolution_oracle(const ConvolutionParams& p);

struct SweepConstant {
    double C_full = 0.0;
    double C_half = 0.0;  // over the first half of the sweep
    double drift = 0.0;   // (C_full - C_half) / C_full
};
SweepConstant sweep_constant(std::span<const double> ratios);

struct AxisSweepRow {
    AxisIntegralParams params;
    OracleValue value;
};
/// r1, r2, the gap x1 - phi(r1) and |y1 - x1| log-uniform in [1e-2, 1e2];
/// a, b, c fixed when given, otherwise uniform in [0, 2] per row.  The
/// constant of the inequality depends on (a, b, c) and blows up as c -> 1+,
/// so only fixed-exponent sweeps have a uniform bound.  Nested: the first k
/// rows do not depend on n.
std::vector<AxisSweepRow> axis_integral_sweep(std::size_t n, std::uint64_t seed, double slope = 1.0,
                                     std::optional<std::array<double, 3>> exponents = std::nullopt);

struct ConvolutionSweepRow {
    ConvolutionParams params;
    OracleValue value;
};
/// Fixed (d, a, b); r1, r2 log-uniform in [1e-2, 1e2]; x, y with log-uniform
/// lengths in [1e-2, 1e1] and uniform directions.
std::vector<ConvolutionSweepRow> convolution_sweep(int d, double a, double b, std::size_t n, std::uint64_t seed);

}  // namespace wedge
