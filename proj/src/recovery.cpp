#include "xrip/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace xrip {

namespace {

inline double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// Projection of w onto the Euclidean ball of radius delta around y.
inline Vector ball_project(const Vector& w, const Vector& y, double delta) {
    const Vector diff = w - y;
    const double dist = diff.norm();
    if (dist <= delta) return w;
    if (delta == 0.0) return y;
    return y + (delta / dist) * diff;
}

}  // namespace

RecoveryResult bpdn_solve(const RecoveryProblem& prob, const SolverOptions& opt) {
    validate_matrix(prob.M, "bpdn_solve: M");
    if (prob.M.isZero(0.0)) throw std::domain_error("bpdn_solve: zero measurement matrix");
    if (prob.y.size() != prob.M.rows()) throw std::domain_error("bpdn_solve: dimension mismatch");
    if (prob.delta < 0.0) throw std::domain_error("bpdn_solve: delta must be nonnegative");

    const Matrix& M = prob.M;
    const Vector& y = prob.y;
    const double yscale = 1.0 + y.norm();

    RecoveryResult result;
    // Feasibility: the least-squares residual is the smallest achievable.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
    const Vector x_ls = cod.solve(y);
    result.min_residual = (M * x_ls - y).norm();
    if (prob.delta < result.min_residual - opt.tol * yscale) {
        result.infeasible = true;
        result.x_hat = x_ls;  // nearest-feasible diagnostic
        result.residual_norm = result.min_residual;
        result.l1_value = x_ls.lpNorm<1>();
        return result;
    }

    const double op_norm = spectral_norm(M);
    const double step = 0.99 / (opt.rho * op_norm * op_norm);

    Vector z = Vector::Zero(M.cols());
    Vector w = ball_project(Vector::Zero(M.rows()), y, prob.delta);
    Vector u = Vector::Zero(M.rows());
    Vector Mz = Vector::Zero(M.rows());

    // Merit-tracked best iterate: iterates feasible within tolerance compete
    // on the l1 objective alone; infeasible ones only on their residual, and
    // always lose to a feasible iterate.
    const double feas_tol = opt.tol * yscale;
    auto merit = [&](const Vector& zz, double residual) {
        if (residual > prob.delta + feas_tol) return 1e100 + residual;
        return zz.lpNorm<1>();
    };
    Vector best_z = z;
    double best_merit = merit(z, y.norm());

    std::uint64_t it = 0;
    for (; it < opt.max_iter; ++it) {
        const Vector grad = M.transpose() * (Mz - w + u);
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z(i) = soft_threshold(z(i) - step * opt.rho * grad(i), step);
        }
        Mz = M * z;
        const Vector w_prev = w;
        w = ball_project(Mz + u, y, prob.delta);
        u += Mz - w;

        const double primal = (Mz - w).norm();
        const double dual = opt.rho * (M.transpose() * (w - w_prev)).norm();

        const double residual = (Mz - y).norm();
        const double m = merit(z, residual);
        if (m < best_merit) {
            best_merit = m;
            best_z = z;
        }

        if (primal <= opt.tol * yscale && dual <= opt.tol * yscale) {
            ++it;
            break;
        }
    }

    result.x_hat = best_z;
    result.residual_norm = (M * best_z - y).norm();
    result.l1_value = best_z.lpNorm<1>();
    result.iterations = it;
    result.converged =
        it < opt.max_iter && result.residual_norm <= prob.delta + opt.tol * yscale;
    if (it == opt.max_iter) {
        // cap reached; report the best iterate but leave converged unset
        result.converged = false;
    }
    return result;
}

std::pair<double, double> candes_constants(double eps) {
    constexpr double kSqrt2 = 1.4142135623730951;
    if (eps < 0.0 || eps >= kSqrt2 - 1.0) {
        throw std::domain_error("candes_constants: eps must satisfy 0 <= eps < sqrt(2) - 1");
    }
    const double denom = 1.0 - (1.0 + kSqrt2) * eps;
    const double C0 = 2.0 * (1.0 - (1.0 - kSqrt2) * eps) / denom;
    const double C2 = 4.0 * std::sqrt(1.0 + eps) / denom;
    return {C0, C2};
}

double sigma_k_1(const Vector& x, Eigen::Index k) {
    if (k < 0 || k > x.size()) throw std::domain_error("sigma_k_1: k out of range");
    std::vector<double> mags(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) mags[i] = std::abs(x(i));
    // keep the k largest; ties resolved by order, the value is tie-invariant
    std::sort(mags.begin(), mags.end(), std::greater<>());
    return std::accumulate(mags.begin() + k, mags.end(), 0.0);
}

double recovery_bound(double eps, double delta, const Vector& x, Eigen::Index k) {
    if (k < 1) throw std::domain_error("recovery_bound: k must be positive");
    const auto [C0, C2] = candes_constants(eps);
    return C0 * sigma_k_1(x, k) / std::sqrt(static_cast<double>(k)) + C2 * delta;
}

SourceSepSystem sourcesep_build(const Matrix& M, const Matrix& C, const Matrix& Phi) {
    const Eigen::Index n1 = M.rows(), a = M.cols(), b = C.cols(), c = Phi.cols();
    if (C.rows() != a || Phi.rows() != b) {
        throw std::domain_error("sourcesep_build: inconsistent dimensions");
    }
    SourceSepSystem sys;
    // X = [X_1 | ... | X_a], where X_j places column j of M at stride c:
    // row (i-1)c+t picks up M_ij at column (j-1)c+t.
    sys.X_block = Matrix::Zero(n1 * c, a * c);
    for (Eigen::Index i = 0; i < n1; ++i) {
        for (Eigen::Index j = 0; j < a; ++j) {
            for (Eigen::Index t = 0; t < c; ++t) {
                sys.X_block(i * c + t, j * c + t) = M(i, j);
            }
        }
    }
    sys.R_block = Matrix::Zero(a * c, a * b);
    for (Eigen::Index j = 0; j < a; ++j) {
        sys.R_block.block(j * c, j * b, c, b) = Phi.transpose();
    }
    sys.c_vec = Vector(a * b);
    for (Eigen::Index j = 0; j < a; ++j) {
        sys.c_vec.segment(j * b, b) = C.row(j).transpose();
    }
    const Matrix S = M * C * Phi;
    sys.s_vec = Vector(n1 * c);
    for (Eigen::Index i = 0; i < n1; ++i) {
        sys.s_vec.segment(i * c, c) = S.row(i).transpose();
    }
    return sys;
}

RecoveryResult sourcesep_recover(const SourceSepSystem& system, double delta,
                                 const SolverOptions& opt) {
    RecoveryProblem prob;
    prob.M = system.X_block * system.R_block;
    prob.y = system.s_vec;
    prob.delta = delta;
    return bpdn_solve(prob, opt);
}

}  // namespace xrip
