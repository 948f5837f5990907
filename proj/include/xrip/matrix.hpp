#pragma once

#include <Eigen/Dense>
#include <string>

namespace xrip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Summary of the extreme singular values of a matrix.
// Invariant: 0 <= sigma_min <= sigma_max <= frobenius.
struct SingularSummary {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double frobenius = 0.0;
};

// Numeric tolerances used across the library, overridable per call site.
struct NumericConfig {
    double svd_rel_tol = 1e-10;       // relative accuracy of singular values
    double power_iter_tol = 1e-12;    // power iteration convergence threshold
    int power_iter_cap = 10000;       // power iteration cap
    int direct_svd_max_dim = 512;     // min-dimension cutoff for dense SVD
};

// Throws std::invalid_argument if M is empty or has a non-finite entry.
void validate_matrix(const Matrix& M, const std::string& name = "matrix");

double frobenius_norm(const Matrix& M);

// Largest singular value. Dense decomposition when min(rows, cols) <=
// cfg.direct_svd_max_dim, power iteration on the Gram matrix otherwise.
// Throws ConvergenceError if power iteration does not settle within the cap.
double spectral_norm(const Matrix& M, const NumericConfig& cfg = {});

// sr(M) = ||M||_F^2 / ||M||^2. Throws std::domain_error on the zero matrix.
double stable_rank(const Matrix& M, const NumericConfig& cfg = {});

// Smallest/largest singular values plus the Frobenius norm. The zero matrix
// yields an all-zero summary.
SingularSummary extreme_singular_values(const Matrix& M, const NumericConfig& cfg = {});

}  // namespace xrip
