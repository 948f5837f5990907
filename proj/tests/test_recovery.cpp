#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xrip/ensembles.hpp"
#include "xrip/recovery.hpp"

using namespace xrip;

namespace {

// Brute-force oracle: best k-sparse least-squares fit over every support,
// exact solution of min ||y - M_S z|| among k-sparse vectors.
Vector sparse_ls_oracle(const Matrix& M, const Vector& y, Eigen::Index k) {
    const Eigen::Index d = M.cols();
    Vector best = Vector::Zero(d);
    double best_res = y.norm();
    // enumerate supports of size k (k <= 2 here)
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = (k == 2 ? a + 1 : a); b < (k == 2 ? d : a + 1); ++b) {
            Matrix sub(M.rows(), k);
            sub.col(0) = M.col(a);
            if (k == 2) sub.col(1) = M.col(b);
            const Vector z = sub.colPivHouseholderQr().solve(y);
            const double res = (sub * z - y).norm();
            if (res < best_res) {
                best_res = res;
                best.setZero();
                best(a) = z(0);
                if (k == 2) best(b) = z(1);
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("bpdn_solve identity cases") {
    SUBCASE("M = I, delta = 0 returns y") {
        Vector y(4);
        y << 1.0, -2.0, 0.5, 0.0;
        RecoveryProblem prob{Matrix::Identity(4, 4), y, 0.0};
        const RecoveryResult r = bpdn_solve(prob);
        CHECK(r.converged);
        CHECK((r.x_hat - y).norm() <= 1e-6);
    }
    SUBCASE("M = I, delta >= ||y|| returns zero") {
        Vector y(3);
        y << 0.3, -0.4, 0.0;
        RecoveryProblem prob{Matrix::Identity(3, 3), y, 1.0};
        const RecoveryResult r = bpdn_solve(prob);
        CHECK(r.converged);
        CHECK(r.x_hat.norm() <= 1e-6);
    }
    SUBCASE("validation") {
        RecoveryProblem bad{Matrix::Zero(2, 2), Vector::Zero(2), 0.0};
        CHECK_THROWS_AS(bpdn_solve(bad), std::domain_error);
        RecoveryProblem neg{Matrix::Identity(2, 2), Vector::Zero(2), -1.0};
        CHECK_THROWS_AS(bpdn_solve(neg), std::domain_error);
    }
}

TEST_CASE("bpdn_solve matches the 2-sparse brute-force oracle") {
    const EnsembleSpec spec = EnsembleSpec::Gaussian();
    for (std::uint64_t s = 0; s < 5; ++s) {
        Matrix M = sample_matrix(spec, 8, 20, {310 + s, 0});
        for (Eigen::Index j = 0; j < M.cols(); ++j) M.col(j) /= M.col(j).norm();
        Vector x = Vector::Zero(20);
        x(3) = 1.0;
        x(11) = -0.7;
        const Vector y = M * x;
        RecoveryProblem prob{M, y, 0.0};
        SolverOptions opt;
        opt.tol = 1e-10;
        const RecoveryResult r = bpdn_solve(prob, opt);
        const Vector oracle = sparse_ls_oracle(M, y, 2);
        CHECK(r.converged);
        CHECK((r.x_hat - oracle).norm() <= 1e-4);
        CHECK((r.x_hat - x).norm() <= 1e-4);  // oracle recovers the planted x
    }
}

TEST_CASE("bpdn_solve infeasible problems report a diagnostic") {
    Matrix M(2, 1);
    M << 1.0, 0.0;
    Vector y(2);
    y << 0.0, 1.0;  // unreachable second coordinate
    RecoveryProblem prob{M, y, 0.1};
    const RecoveryResult r = bpdn_solve(prob);
    CHECK(r.infeasible);
    CHECK_FALSE(r.converged);
    CHECK(r.min_residual == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bpdn_solve feasibility at convergence") {
    const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 6, 12, {310, 0});
    Vector x = Vector::Zero(12);
    x(2) = 2.0;
    const Vector e = 0.05 * Vector::Ones(6) / std::sqrt(6.0);
    const double delta = 0.05;
    RecoveryProblem prob{M, M * x + e, delta};
    const RecoveryResult r = bpdn_solve(prob);
    CHECK(r.converged);
    CHECK(r.residual_norm <= delta + 1e-6 * (1.0 + prob.y.norm()));
}

TEST_CASE("candes_constants") {
    SUBCASE("eps = 0") {
        const auto [c0, c2] = candes_constants(0.0);
        CHECK(c0 == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(c2 == doctest::Approx(4.0).epsilon(1e-14));
    }
    SUBCASE("eps = 0.1 frozen values") {
        const auto [c0, c2] = candes_constants(0.1);
        CHECK(c0 == doctest::Approx(2.7457175727269805).epsilon(1e-12));
        CHECK(c2 == doctest::Approx(5.53038953465848).epsilon(1e-12));
    }
    SUBCASE("domain boundary") {
        const auto [c0, c2] = candes_constants(0.41);
        CHECK(c0 > 0.0);
        CHECK(std::isfinite(c2));
        CHECK_THROWS_AS(candes_constants(0.42), std::domain_error);
        CHECK_THROWS_AS(candes_constants(-0.1), std::domain_error);
    }
}

TEST_CASE("sigma_k_1") {
    Vector x(4);
    x << 3.0, -1.0, 0.5, 0.0;
    CHECK(sigma_k_1(x, 1) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(sigma_k_1(x, 3) == doctest::Approx(0.0).epsilon(1e-14));
    Vector tie(3);
    tie << 1.0, -1.0, 1.0;
    CHECK(sigma_k_1(tie, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_k_1(x, 5), std::domain_error);
}

TEST_CASE("recovery_bound") {
    Vector sparse = Vector::Zero(6);
    sparse(1) = 4.0;
    CHECK(recovery_bound(0.1, 0.0, sparse, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(recovery_bound(0.1, 0.01, sparse, 1) ==
          doctest::Approx(0.0553038953465848).epsilon(1e-12));
    // monotone in delta and in the l1 tail
    Vector dense = Vector::Ones(6);
    CHECK(recovery_bound(0.1, 0.02, dense, 2) > recovery_bound(0.1, 0.01, dense, 2));
    CHECK(recovery_bound(0.1, 0.01, dense, 2) > recovery_bound(0.1, 0.01, sparse, 2));
}

TEST_CASE("sourcesep_build") {
    SUBCASE("scalar case") {
        Matrix M(1, 1), C(1, 1), Phi(1, 1);
        M << 2.0;
        C << 3.0;
        Phi << 5.0;
        const SourceSepSystem sys = sourcesep_build(M, C, Phi);
        REQUIRE(sys.s_vec.size() == 1);
        CHECK(sys.s_vec(0) == doctest::Approx(30.0).epsilon(1e-14));
        CHECK((sys.s_vec - sys.X_block * sys.R_block * sys.c_vec).norm() <= 1e-12);
    }
    SUBCASE("2x2x2x2 random instance equals the triple product") {
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 2, 2, {400, 0});
        const Matrix C = sample_matrix(EnsembleSpec::Gaussian(), 2, 2, {401, 0});
        const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 2, 2, {402, 0});
        const SourceSepSystem sys = sourcesep_build(M, C, Phi);
        const Matrix S = M * C * Phi;
        Vector s_rows(4);
        s_rows << S(0, 0), S(0, 1), S(1, 0), S(1, 1);
        CHECK((sys.s_vec - s_rows).norm() <= 1e-12);
        CHECK((sys.s_vec - sys.X_block * sys.R_block * sys.c_vec).norm() <= 1e-12);
    }
    SUBCASE("zero C gives zero s") {
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 3, 2, {403, 0});
        const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 4, 3, {404, 0});
        const SourceSepSystem sys = sourcesep_build(M, Matrix::Zero(2, 4), Phi);
        CHECK(sys.s_vec.norm() == 0.0);
    }
    SUBCASE("random consistent instances satisfy the block identity") {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 3, 4, {500 + s, 1});
            const Matrix C = sample_matrix(EnsembleSpec::Gaussian(), 4, 5, {500 + s, 2});
            const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 5, 3, {500 + s, 3});
            const SourceSepSystem sys = sourcesep_build(M, C, Phi);
            CHECK((sys.s_vec - sys.X_block * sys.R_block * sys.c_vec).norm() <= 1e-10);
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(sourcesep_build(Matrix::Identity(2, 2), Matrix::Identity(3, 3),
                                        Matrix::Identity(3, 3)),
                        std::domain_error);
    }
}

TEST_CASE("sourcesep_recover") {
    SUBCASE("1-sparse C at delta = 0") {
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 3, 4, {602, 0});
        const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 6, 3, {603, 0});
        Matrix C = Matrix::Zero(4, 6);
        C(1, 2) = 1.5;
        const SourceSepSystem sys = sourcesep_build(M, C, Phi);
        SolverOptions opt;
        opt.tol = 1e-10;
        const RecoveryResult r = sourcesep_recover(sys, 0.0, opt);
        CHECK((r.x_hat - sys.c_vec).norm() <= 1e-3);
    }
    SUBCASE("zero signal") {
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 2, 3, {602, 0});
        const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 4, 2, {603, 0});
        const SourceSepSystem sys = sourcesep_build(M, Matrix::Zero(3, 4), Phi);
        CHECK(sourcesep_recover(sys, 0.0).x_hat.norm() <= 1e-8);
    }
    SUBCASE("delta = ||s|| returns zero") {
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), 2, 3, {604, 0});
        const Matrix Phi = sample_matrix(EnsembleSpec::Gaussian(), 4, 2, {605, 0});
        Matrix C = Matrix::Zero(3, 4);
        C(0, 0) = 1.0;
        const SourceSepSystem sys = sourcesep_build(M, C, Phi);
        const RecoveryResult r = sourcesep_recover(sys, sys.s_vec.norm());
        CHECK(r.x_hat.norm() <= 1e-6);
    }
}
