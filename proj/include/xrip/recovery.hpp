#pragma once

#include <cstdint>
#include <utility>

#include "xrip/matrix.hpp"

namespace xrip {

// y = Mx + e with ||e|| <= delta.
struct RecoveryProblem {
    Matrix M;
    Vector y;
    double delta = 0.0;
};

struct SolverOptions {
    double tol = 1e-8;
    std::uint64_t max_iter = 50000;
    double rho = 1.0;  // splitting penalty parameter
};

struct RecoveryResult {
    Vector x_hat;
    double residual_norm = 0.0;
    double l1_value = 0.0;
    std::uint64_t iterations = 0;
    bool converged = false;
    // Smallest residual achievable by any x (least-squares value); set when
    // delta is below it, i.e. the constraint is infeasible.
    double min_residual = 0.0;
    bool infeasible = false;
};

// min ||z||_1  subject to  ||Mz - y|| <= delta, by operator splitting:
// a linearized soft-thresholding step for the l1 term alternating with a
// Euclidean-ball projection for the constraint. delta = 0 projects onto the
// point y (basis pursuit). Hitting max_iter leaves converged = false.
RecoveryResult bpdn_solve(const RecoveryProblem& prob, const SolverOptions& opt = {});

// The two constants of the l1 recovery error bound; valid for
// 0 <= eps < sqrt(2) - 1, domain error otherwise.
std::pair<double, double> candes_constants(double eps);

// l1 tail: sum of |x_i| over all but the k largest-magnitude entries.
double sigma_k_1(const Vector& x, Eigen::Index k);

// Right-hand side C0 * sigma_k_1(x)/sqrt(k) + C2 * delta.
double recovery_bound(double eps, double delta, const Vector& x, Eigen::Index k);

// Block system recast of S = M C Phi into s = X_block R_block c with
// block-diagonal random R_block; s_vec equals X_block * R_block * c_vec.
struct SourceSepSystem {
    Matrix X_block;  // n1*c x a*c
    Matrix R_block;  // a*c x a*b, block diagonal with copies of Phi^T
    Vector c_vec;    // a*b, rows of C flattened
    Vector s_vec;    // n1*c, rows of S stacked
};

SourceSepSystem sourcesep_build(const Matrix& M, const Matrix& C, const Matrix& Phi);

// l1 recovery of c_vec from (X_block * R_block, s_vec) at noise level delta.
RecoveryResult sourcesep_recover(const SourceSepSystem& system, double delta,
                                 const SolverOptions& opt = {});

}  // namespace xrip
