#pragma once

// Fixed-order composite Gauss-Legendre rules on boxes, used where an
// integrand is smooth and its support is known in advance.

#include <functional>
#include <span>
#include <vector>

namespace wedge {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// 20-point Gauss-Legendre on each of `panels` equal sub-intervals of [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels);

/// Tensor product of one rule per axis, integrand receives the point.
double tensor_integrate(const std::vector<QuadratureRule>& axes, const std::function<double(std::span<const double>)>& f);

}  // namespace wedge
