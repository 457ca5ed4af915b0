#include "wedge/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ellipticity constant of a single symmetric matrix.
double piece_nu(const Matrix& a) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
        throw ValidationError("coefficient matrix is not elliptic (smallest eigenvalue " + format_double(lo) + ")");
    }
    return std::min(lo, 1.0 / hi);
}

}  // namespace

CoefficientPath::CoefficientPath(std::vector<double> breakpoints, std::vector<Matrix> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.empty()) { throw ValidationError("coefficient path needs at least one piece"); }
    if (breakpoints_.size() != pieces_.size() + 1) {
        throw ValidationError("coefficient path needs one more breakpoint than pieces");
    }
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        if (!(breakpoints_[k] < breakpoints_[k + 1])) { throw ValidationError("breakpoints must be strictly increasing"); }
    }
    for (const double b : breakpoints_) {
        if (std::isnan(b)) { throw ValidationError("breakpoint is NaN"); }
    }
    dim_ = static_cast<int>(pieces_.front().rows());
    if (dim_ < 1) { throw ValidationError("coefficient dimension must be positive"); }
    nu_ = kInf;
    for (auto& a : pieces_) {
        if (a.rows() != dim_ || a.cols() != dim_) { throw ValidationError("coefficient matrices must be square and of equal size"); }
        if (!a.allFinite()) { throw ValidationError("coefficient matrix has non-finite entries"); }
        const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
        if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw ValidationError("coefficient matrix is not symmetric");
        }
        const Matrix sym = 0.5 * (a + a.transpose());
        a = sym;
        nu_ = std::min(nu_, piece_nu(a));
    }
}

CoefficientPath CoefficientPath::constant(const Matrix& a) { return CoefficientPath({-kInf, kInf}, {a}); }

CoefficientPath CoefficientPath::identity(int n) { return constant(Matrix::Identity(n, n)); }

std::size_t CoefficientPath::piece_index(double t) const {
    // First interior breakpoint strictly greater than t marks the end of the active piece.
    const auto first = breakpoints_.begin() + 1;
    const auto last = breakpoints_.end() - 1;
    return static_cast<std::size_t>(std::upper_bound(first, last, t) - first);
}

bool CoefficientPath::is_breakpoint(double t) const {
    for (std::size_t k = 1; k + 1 < breakpoints_.size(); ++k) {
        if (breakpoints_[k] == t && pieces_[k - 1] != pieces_[k]) { return true; }
    }
    return false;
}

std::vector<double> CoefficientPath::breakpoints_between(double s, double t) const {
    std::vector<double> out;
    for (std::size_t k = 1; k + 1 < breakpoints_.size(); ++k) {
        if (breakpoints_[k] > s && breakpoints_[k] < t && pieces_[k - 1] != pieces_[k]) { out.push_back(breakpoints_[k]); }
    }
    return out;
}

bool CoefficientPath::operator==(const CoefficientPath& other) const {
    if (breakpoints_ != other.breakpoints_ || pieces_.size() != other.pieces_.size()) { return false; }
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (pieces_[k] != other.pieces_[k]) { return false; }
    }
    return true;
}

KeyValueConfig CoefficientPath::to_config() const {
    KeyValueConfig config;
    config.set("n", std::to_string(dim_));
    config.set_list("breakpoints", breakpoints_);
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        std::vector<double> entries;
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) { entries.push_back(pieces_[k](i, j)); }
        }
        config.set_list("piece." + std::to_string(k), entries);
    }
    return config;
}

CoefficientPath CoefficientPath::from_config(const KeyValueConfig& config) {
    const long long n = config.get_int("n");
    if (n < 1 || n > 64) { throw ValidationError("dimension n out of range"); }
    std::vector<Matrix> pieces;
    for (std::size_t k = 0;; ++k) {
        const auto entry = config.find("piece." + std::to_string(k));
        if (!entry) { break; }
        const auto values = parse_double_list(*entry);
        if (values.size() != static_cast<std::size_t>(n * n)) {
            throw ValidationError("piece." + std::to_string(k) + " needs n*n entries");
        }
        Matrix a(n, n);
        for (long long i = 0; i < n; ++i) {
            for (long long j = 0; j < n; ++j) { a(i, j) = values[static_cast<std::size_t>(i * n + j)]; }
        }
        pieces.push_back(a);
    }
    if (pieces.empty()) { throw ValidationError("coefficient file has no piece.0"); }

    std::vector<double> breaks;
    if (config.has("breakpoints")) { breaks = config.get_list("breakpoints"); }
    // Accept K+1 breakpoints (explicit ends), K (start of every piece) or K-1 (interior only).
    if (breaks.size() + 1 == pieces.size()) {
        breaks.insert(breaks.begin(), -kInf);
        breaks.push_back(kInf);
    } else if (breaks.size() == pieces.size()) {
        breaks.push_back(kInf);
    } else if (breaks.size() != pieces.size() + 1) {
        throw ValidationError("breakpoint count does not match piece count");
    }
    return CoefficientPath(std::move(breaks), std::move(pieces));
}

double validate(const CoefficientPath& path) { return path.nu(); }

Matrix integrate(const CoefficientPath& path, double s, double t) {
    if (!(s < t)) { throw ValidationError("integrate requires s < t"); }
    const int n = path.dimension();
    Matrix m = Matrix::Zero(n, n);
    const auto& b = path.breakpoints();
    const std::size_t K = path.piece_count();
    for (std::size_t k = 0; k < K; ++k) {
        const double lo = (k == 0) ? -kInf : b[k];
        const double hi = (k + 1 == K) ? kInf : b[k + 1];
        const double a = std::max(lo, s);
        const double c = std::min(hi, t);
        if (c > a) { m += (c - a) * path.pieces()[k]; }
    }
    return m;
}

CoefficientPath time_reverse(const CoefficientPath& path) {
    const auto& b = path.breakpoints();
    std::vector<double> nb(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) { nb[k] = -b[b.size() - 1 - k]; }
    std::vector<Matrix> np(path.pieces().rbegin(), path.pieces().rend());
    return CoefficientPath(std::move(nb), std::move(np));
}

}  // namespace wedge
