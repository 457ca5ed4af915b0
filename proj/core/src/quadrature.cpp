#include "wedge/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "wedge/errors.hpp"

namespace wedge {

QuadratureRule composite_gauss_legendre(double a, double b, int panels) {
    if (panels < 1 || !(b > a)) { throw ValidationError("composite rule needs b > a and panels >= 1"); }
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();

    QuadratureRule rule;
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        // Boost stores the non-negative half of the symmetric rule.
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            if (abscissa[i] == 0.0) {
                rule.nodes.push_back(mid);
                rule.weights.push_back(half * weights[i]);
                continue;
            }
            rule.nodes.push_back(mid - half * abscissa[i]);
            rule.weights.push_back(half * weights[i]);
            rule.nodes.push_back(mid + half * abscissa[i]);
            rule.weights.push_back(half * weights[i]);
        }
    }
    return rule;
}

double tensor_integrate(const std::vector<QuadratureRule>& axes, const std::function<double(std::span<const double>)>& f) {
    const std::size_t dim = axes.size();
    if (dim == 0) { throw ValidationError("tensor rule needs at least one axis"); }
    std::vector<std::size_t> index(dim, 0);
    std::vector<double> point(dim);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            point[d] = axes[d].nodes[index[d]];
            w *= axes[d].weights[index[d]];
        }
        total += w * f(point);
        std::size_t d = 0;
        while (d < dim && ++index[d] == axes[d].nodes.size()) {
            index[d] = 0;
            ++d;
        }
        if (d == dim) { break; }
    }
    return total;
}

}  // namespace wedge
