#include "xrip/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "xrip/errors.hpp"

namespace xrip {

void validate_matrix(const Matrix& M, const std::string& name) {
    if (M.rows() == 0 || M.cols() == 0) {
        throw std::invalid_argument(name + ": empty matrix");
    }
    if (!M.allFinite()) {
        throw std::invalid_argument(name + ": non-finite entry");
    }
}

double frobenius_norm(const Matrix& M) {
    return M.norm();
}

namespace {

// Largest eigenvalue of the smaller Gram side via power iteration.
double power_iteration_sq(const Matrix& M, const NumericConfig& cfg) {
    const bool wide = M.rows() >= M.cols();
    const Eigen::Index m = wide ? M.cols() : M.rows();
    Vector v = Vector::Ones(m) / std::sqrt(static_cast<double>(m));
    double lambda = 0.0;
    for (int it = 0; it < cfg.power_iter_cap; ++it) {
        Vector w = wide ? Vector(M.transpose() * (M * v)) : Vector(M * (M.transpose() * v));
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        w /= norm;
        const double next = wide ? (M * w).squaredNorm() : (M.transpose() * w).squaredNorm();
        if (std::abs(next - lambda) <= cfg.power_iter_tol * std::max(next, 1.0)) {
            return next;
        }
        lambda = next;
        v = std::move(w);
    }
    throw ConvergenceError("spectral_norm: power iteration did not converge", std::sqrt(lambda));
}

}  // namespace

double spectral_norm(const Matrix& M, const NumericConfig& cfg) {
    validate_matrix(M);
    if (std::min(M.rows(), M.cols()) <= cfg.direct_svd_max_dim) {
        return extreme_singular_values(M, cfg).sigma_max;
    }
    return std::sqrt(power_iteration_sq(M, cfg));
}

double stable_rank(const Matrix& M, const NumericConfig& cfg) {
    const double spec = spectral_norm(M, cfg);
    if (spec == 0.0) {
        throw std::domain_error("stable_rank: zero matrix");
    }
    const double frob = frobenius_norm(M);
    return (frob * frob) / (spec * spec);
}

SingularSummary extreme_singular_values(const Matrix& M, const NumericConfig& cfg) {
    validate_matrix(M);
    SingularSummary out;
    out.frobenius = M.norm();
    if (out.frobenius == 0.0) return out;

    if (std::min(M.rows(), M.cols()) <= cfg.direct_svd_max_dim) {
        // Self-adjoint eigensolve of the smaller Gram matrix; sigma = sqrt(lambda).
        const Matrix G = M.rows() >= M.cols() ? Matrix(M.transpose() * M) : Matrix(M * M.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();  // ascending
        out.sigma_min = std::sqrt(std::max(0.0, ev(0)));
        out.sigma_max = std::sqrt(std::max(0.0, ev(ev.size() - 1)));
    } else {
        Eigen::BDCSVD<Matrix> svd(M);
        const auto& sv = svd.singularValues();
        out.sigma_max = sv(0);
        out.sigma_min = sv(sv.size() - 1);
    }
    return out;
}

}  // namespace xrip
