#pragma once

// Whole-space Green function of  d/dt - a^{ij}(t) D_i D_j :
//   Gamma(x, y; t, s) = (4 pi)^{-n/2} det(M)^{-1/2} exp(-(M^{-1} z, z)/4),
// z = x - y, M = int_s^t A.  All derivatives are analytic.

#include <span>
#include <vector>

#include "wedge/coefficients.hpp"

namespace wedge {

using MultiIndex = std::vector<int>;

int order(const MultiIndex& index);

struct KernelSample {
    Vector x;
    Vector y;
    double t = 0.0;
    double s = 0.0;
    MultiIndex alpha;
    MultiIndex beta;
    bool d_s = false;
    double value = 0.0;
};

/// Centered Gaussian exp(-(P z, z)/4) scaled to unit mass, with P = M^{-1}.
class FrozenGaussian {
public:
    explicit FrozenGaussian(const Matrix& m);

    [[nodiscard]] int dimension() const { return static_cast<int>(precision_.rows()); }
    [[nodiscard]] const Matrix& precision() const { return precision_; }
    [[nodiscard]] double normalization() const { return norm_; }

    [[nodiscard]] double value(std::span<const double> z) const;
    /// D_z^gamma of the Gaussian at z.
    [[nodiscard]] double derivative(std::span<const double> z, const MultiIndex& gamma) const;

private:
    Matrix precision_;
    double norm_ = 0.0;
};

/// Symmetric positive-definite inverse; closed form for n <= 3.
Matrix spd_inverse(const Matrix& m);

double gamma(const CoefficientPath& path, std::span<const double> x, std::span<const double> y, double t, double s);

/// D_x^alpha D_y^beta (d/ds)^{d_s} Gamma.  Throws if d_s and s is a breakpoint.
double gamma_deriv(const CoefficientPath& path, const MultiIndex& alpha, const MultiIndex& beta, bool d_s,
                   std::span<const double> x, std::span<const double> y, double t, double s);

struct GaussianBoundFit {
    double C_emp = 0.0;
    double sigma_emp = 0.0;
    bool stable = false;
};

struct SpaceTimePair {
    Vector x;
    Vector y;
    double t = 0.0;
    double s = 0.0;
};

/// Fit |D^alpha_x D^beta_y d_s^{d_s} Gamma| <= C (t-s)^{-(n+|alpha|+|beta|+2 d_s)/2} exp(-sigma |x-y|^2/(t-s)).
/// sigma_emp is the decay rate of the tail of the upper concave hull of
/// (|x-y|^2/(t-s), log of the normalized value); C_emp is the least constant
/// for that sigma.  `stable` compares C_emp on the first half of the cloud
/// with C_emp on the whole cloud.
GaussianBoundFit verify_gaussian_bound(const CoefficientPath& path, const MultiIndex& alpha, const MultiIndex& beta,
                                       bool d_s, std::span<const SpaceTimePair> cloud);

struct DecayPoint {
    double xi2 = 0.0;   // |x-y|^2/(t-s)
    double log_g = 0.0; // log of the scaled magnitude
};

/// Least sigma-rate read off the upper concave hull; exposed for the bounds module.
double hull_tail_rate(std::vector<DecayPoint> points);

}  // namespace wedge
