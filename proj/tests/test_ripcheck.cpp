#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xrip/errors.hpp"
#include "xrip/ripcheck.hpp"

using namespace xrip;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    CounterRng rng({seed, 0});
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            M(i, j) = rng.normal(static_cast<std::uint64_t>(j) * rows + i);
    return M;
}

}  // namespace

TEST_CASE("rip_constant_exact closed forms") {
    SUBCASE("orthonormal columns are a perfect isometry") {
        Matrix Q(4, 3);
        Q.setZero();
        Q(0, 0) = Q(1, 1) = Q(2, 2) = 1.0;
        for (Eigen::Index k = 1; k <= 3; ++k) {
            CHECK(rip_constant_exact(Q, k, 1.0).eps_hat == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    SUBCASE("2x3 matrix with coherent third column") {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        Matrix M(2, 3);
        M << 1, 0, inv_sqrt2, 0, 1, inv_sqrt2;
        const RipReport r = rip_constant_exact(M, 2, 1.0);
        CHECK(r.eps_hat == doctest::Approx(0.458803899853803).epsilon(1e-10));
        CHECK(r.exact);
        CHECK(r.supports_examined == 3);
        REQUIRE(r.worst_support.size() == 2);
        CHECK(r.worst_support[1] == 2);  // third column in every worst support
    }
    SUBCASE("k = 1 with unit-norm columns") {
        Matrix M(3, 2);
        M.col(0) = Vector::Unit(3, 0);
        M.col(1) = Vector::Unit(3, 2);
        CHECK(rip_constant_exact(M, 1, 1.0).eps_hat == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("errors") {
        const Matrix M = random_matrix(2, 30, 1);
        CHECK_THROWS_AS(rip_constant_exact(M, 5, 1.0, 1000), ResourceError);
        CHECK_THROWS_AS(rip_constant_exact(M, 2, 0.0), std::domain_error);
        CHECK_THROWS_AS(rip_constant_exact(M, 31, 1.0), std::domain_error);
    }
}

TEST_CASE("rip_constant_exact monotone in k") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix M = random_matrix(6, 10, 40 + s);
        double prev = 0.0;
        for (Eigen::Index k = 1; k <= 3; ++k) {
            const double eps = rip_constant_exact(M, k, 1.0).eps_hat;
            CHECK(eps >= prev - 1e-12);
            prev = eps;
        }
    }
}

TEST_CASE("rip_constant_exact scaling covariance") {
    const Matrix M = random_matrix(6, 10, 50);
    const double base = rip_constant_exact(M, 2, 0.7).eps_hat;
    for (const double c : {0.25, 2.0, 10.0}) {
        CHECK(rip_constant_exact(c * M, 2, c * 0.7).eps_hat ==
              doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("rip_constant_sampled") {
    const Matrix M = random_matrix(6, 10, 60);
    const RipReport exact = rip_constant_exact(M, 2, 1.0);
    SUBCASE("exhaustive sampling equals exact") {
        const RipReport all = rip_constant_sampled(M, 2, 1.0, 45, {1, 0});
        CHECK(all.eps_hat == doctest::Approx(exact.eps_hat).epsilon(1e-14));
        CHECK(all.supports_examined == 45);
        CHECK_FALSE(all.exact);
    }
    SUBCASE("sampled is a lower bound and deterministic") {
        const RipReport a = rip_constant_sampled(M, 2, 1.0, 10, {2, 0});
        const RipReport b = rip_constant_sampled(M, 2, 1.0, 10, {2, 0});
        CHECK(a.eps_hat == b.eps_hat);
        CHECK(a.eps_hat <= exact.eps_hat + 1e-14);
        CHECK(a.supports_examined == 10);
    }
}

TEST_CASE("required_stable_rank formulas") {
    ConditionParams p;
    p.k = 4;
    p.d = 256;
    p.eps = 0.5;
    SUBCASE("subgaussian value") {
        const ConditionReport r = required_stable_rank("subgaussian", p, 1.0, 100.0);
        CHECK(r.sr_required == doctest::Approx(66.54212933375474).epsilon(1e-12));
        CHECK(r.ratio == doctest::Approx(100.0 / 66.54212933375474).epsilon(1e-12));
    }
    SUBCASE("sparse at beta = 1 degenerates to subgaussian") {
        ConditionParams q = p;
        q.beta = 1.0;
        CHECK(required_stable_rank("sparse", q).sr_required ==
              doctest::Approx(required_stable_rank("subgaussian", p).sr_required).epsilon(1e-14));
    }
    SUBCASE("hadamard2 vs subgaussian at k = 1 is a log-term ratio") {
        ConditionParams q = p;
        q.k = 1;
        q.tau = 1.0;
        q.K = 1.0;
        const double h2 = required_stable_rank("hadamard2", q).sr_required;
        const double sg = required_stable_rank("subgaussian", q).sr_required;
        CHECK(h2 / sg == doctest::Approx(2.0).epsilon(1e-12));  // log(d^2)/log(d)
    }
    SUBCASE("hadamardl generalizes hadamard2 up to the k-power") {
        ConditionParams q = p;
        q.ell = 2;
        const double hl = required_stable_rank("hadamardl", q).sr_required;
        const double h2 = required_stable_rank("hadamard2", q).sr_required;
        CHECK(hl / h2 == doctest::Approx(static_cast<double>(p.k)).epsilon(1e-12));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(required_stable_rank("no_such_model", p), std::domain_error);
        ConditionParams bad = p;
        bad.eps = 1.5;
        CHECK_THROWS_AS(required_stable_rank("subgaussian", bad), std::domain_error);
        bad = p;
        bad.k = 300;
        CHECK_THROWS_AS(required_stable_rank("subgaussian", bad), std::domain_error);
    }
}

TEST_CASE("rip_success_probability smoke") {
    const Matrix X = Matrix::Identity(16, 16) / 4.0;  // sr = 16, ||X||_F = 1
    TrialOptions opt;
    opt.d = 32;
    opt.k = 2;
    opt.eps_target = 1.0;
    opt.n_trials = 10;
    opt.n_supports = 30;
    const TrialSummary s = rip_success_probability(X, EnsembleSpec::Gaussian(), opt, {5, 0});
    CHECK(s.trials == 10);
    REQUIRE(s.eps_hats.size() == 10);
    std::uint64_t expected = 0;
    for (const double e : s.eps_hats) {
        CHECK(e >= 0.0);
        if (e <= opt.eps_target) ++expected;
    }
    CHECK(s.successes == expected);
    CHECK(s.success_fraction() == doctest::Approx(1.0));  // eps_target = 1 is near-vacuous

    // order independence: threaded run matches sequential
    TrialOptions threaded = opt;
    threaded.threads = 4;
    const TrialSummary t = rip_success_probability(X, EnsembleSpec::Gaussian(), threaded, {5, 0});
    CHECK(t.eps_hats == s.eps_hats);
}

TEST_CASE("rip_success_probability hadamard product kind") {
    const Matrix X = Matrix::Identity(8, 8) / std::sqrt(8.0);
    TrialOptions opt;
    opt.product = ProductKind::hadamard;
    opt.ell = 2;
    opt.d = 10;  // C(10, 2) = 45 columns
    opt.k = 2;
    opt.eps_target = 1.0;
    opt.n_trials = 3;
    opt.n_supports = 10;
    const TrialSummary s = rip_success_probability(X, EnsembleSpec::Rademacher(), opt, {6, 0});
    CHECK(s.trials == 3);
    for (const double e : s.eps_hats) CHECK(std::isfinite(e));
}

TEST_CASE("concentration_tail") {
    const Matrix X = Matrix::Identity(8, 8);
    Vector u = Vector::Zero(12);
    u(0) = 1.0;
    SUBCASE("t = 0 has tail probability 1") {
        const auto tails = concentration_tail(X, EnsembleSpec::Gaussian(), u, {0.0}, 200, {7, 0});
        CHECK(tails[0] == doctest::Approx(1.0));
    }
    SUBCASE("tail decreases in t") {
        const auto tails = concentration_tail(X, EnsembleSpec::Gaussian(), u,
                                              {0.05, 0.2, 0.5}, 400, {8, 0});
        CHECK(tails[0] >= tails[1]);
        CHECK(tails[1] >= tails[2]);
    }
    SUBCASE("non-unit u rejected") {
        Vector bad = Vector::Constant(12, 1.0);
        CHECK_THROWS_AS(concentration_tail(X, EnsembleSpec::Gaussian(), bad, {0.1}, 10, {9, 0}),
                        std::domain_error);
    }
}

TEST_CASE("psi2_estimate") {
    SUBCASE("rademacher psi2 is 1") {
        CounterRng rng({10, 0});
        const double est = psi2_estimate(
            [&](std::uint64_t i) { return static_cast<double>(rng.sign(i)); }, 20000);
        CHECK(est == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("constant zero") {
        CHECK(psi2_estimate([](std::uint64_t) { return 0.0; }, 2000) == 0.0);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(psi2_estimate([](std::uint64_t) { return 1.0; }, 100), std::domain_error);
    }
}

TEST_CASE("jl_check") {
    SUBCASE("orthogonal map has zero distortion") {
        const Matrix Q = Matrix::Identity(5, 5);
        std::vector<Vector> pts;
        for (std::uint64_t s = 0; s < 4; ++s) pts.push_back(random_matrix(5, 1, 70 + s).col(0));
        CHECK(jl_check(Q, pts, {1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("coincident pairs are skipped") {
        const Matrix Q = Matrix::Identity(3, 3);
        Vector a = Vector::Unit(3, 0);
        CHECK(jl_check(Q, {a, a, Vector::Unit(3, 1)}, {1, 0}) ==
              doctest::Approx(0.0).epsilon(1e-12));
        CHECK_THROWS_AS(jl_check(Q, {a, a}, {1, 0}), std::domain_error);
    }
    SUBCASE("distortion of 1-sparse points bounded by the exact RIP constant") {
        const Matrix M = random_matrix(6, 8, 80);
        // columns normalized so k = 2 RIP is moderate
        Matrix N = M;
        for (Eigen::Index j = 0; j < N.cols(); ++j) N.col(j) /= N.col(j).norm();
        const double eps0 = rip_constant_exact(N, 2, 1.0).eps_hat;
        std::vector<Vector> pts;
        for (Eigen::Index i = 0; i < 8; ++i) pts.push_back(Vector::Unit(8, i));
        // differences of distinct 1-sparse points are 2-sparse
        CHECK(jl_check(N, pts, {2, 0}) <= eps0 + 1e-12);
    }
}
