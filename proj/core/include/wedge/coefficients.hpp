#pragma once

// Piecewise-constant, time-dependent coefficient matrix A(t) of the
// operator  d/dt - a^{ij}(t) D_i D_j.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wedge/kvconfig.hpp"

namespace wedge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// t -> A(t), with K pieces and K+1 breakpoints t_0 < ... < t_K. Piece k is
/// active on [t_k, t_{k+1}); the first and last pieces extend to -inf and
/// +inf, so the outer breakpoints may themselves be infinite.
class CoefficientPath {
public:
    /// Rejects pieces that are not symmetric to 1e-12 relative, symmetrizes the
    /// rest as (A + A^T)/2 and checks ellipticity.
    CoefficientPath(std::vector<double> breakpoints, std::vector<Matrix> pieces);

    static CoefficientPath constant(const Matrix& a);
    static CoefficientPath identity(int n);

    [[nodiscard]] int dimension() const { return dim_; }
    [[nodiscard]] std::size_t piece_count() const { return pieces_.size(); }
    [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] const std::vector<Matrix>& pieces() const { return pieces_; }
    [[nodiscard]] double nu() const { return nu_; }

    /// Index of the piece active at time t.
    [[nodiscard]] std::size_t piece_index(double t) const;
    [[nodiscard]] const Matrix& at(double t) const { return pieces_[piece_index(t)]; }

    /// True if t coincides with an interior (finite, piece-changing) breakpoint.
    [[nodiscard]] bool is_breakpoint(double t) const;
    /// Finite breakpoints where the active matrix changes, in (s, t).
    [[nodiscard]] std::vector<double> breakpoints_between(double s, double t) const;

    [[nodiscard]] bool operator==(const CoefficientPath& other) const;

    [[nodiscard]] KeyValueConfig to_config() const;
    static CoefficientPath from_config(const KeyValueConfig& config);

private:
    int dim_ = 0;
    std::vector<double> breakpoints_;
    std::vector<Matrix> pieces_;
    double nu_ = 0.0;
};

/// Largest nu with nu|xi|^2 <= A xi.xi <= |xi|^2/nu on every piece.
double validate(const CoefficientPath& path);

/// Exact  int_s^t A(tau) dtau.
Matrix integrate(const CoefficientPath& path, double s, double t);

/// t -> A(-t).
CoefficientPath time_reverse(const CoefficientPath& path);

}  // namespace wedge
