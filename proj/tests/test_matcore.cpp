#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "xrip/errors.hpp"
#include "xrip/matrix.hpp"
#include "xrip/mmio.hpp"
#include "xrip/rng.hpp"

using namespace xrip;

namespace {

// Independent oracle: all singular values via Jacobi SVD.
Eigen::VectorXd svd_oracle(const Matrix& M) {
    return Eigen::JacobiSVD<Matrix>(M).singularValues();
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    CounterRng rng({seed, 0});
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            M(i, j) = rng.normal(static_cast<std::uint64_t>(j) * rows + i);
    return M;
}

}  // namespace

TEST_CASE("frobenius_norm") {
    CHECK(frobenius_norm(Matrix::Identity(3, 3)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(frobenius_norm(Matrix::Zero(2, 5)) == 0.0);
    Matrix M(2, 2);
    M << 1, 2, 3, 4;
    CHECK(frobenius_norm(M) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-12));
}

TEST_CASE("spectral_norm basics") {
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    CHECK(spectral_norm(D) == doctest::Approx(2.0).epsilon(1e-12));

    Matrix J(2, 2);
    J << 0, 1, 0, 0;
    CHECK(spectral_norm(J) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm matches SVD oracle on random matrices") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix M = random_matrix(3, 3, s);
        const double oracle = svd_oracle(M)(0);
        CHECK(spectral_norm(M) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("spectral_norm scaling covariance") {
    const Matrix M = random_matrix(4, 6, 7);
    const double base = spectral_norm(M);
    for (const double c : {0.5, 3.0, -2.0}) {
        CHECK(spectral_norm(c * M) == doctest::Approx(std::abs(c) * base).epsilon(1e-10));
    }
}

TEST_CASE("spectral_norm large path uses power iteration") {
    // 600 > direct cutoff on both sides; diagonal so the answer is known.
    Matrix M = Matrix::Zero(600, 600);
    for (Eigen::Index i = 0; i < 600; ++i) M(i, i) = 1.0 + static_cast<double>(i) / 600.0;
    CHECK(spectral_norm(M) == doctest::Approx(M(599, 599)).epsilon(1e-9));
}

TEST_CASE("stable_rank") {
    CHECK(stable_rank(Matrix::Identity(5, 5)) == doctest::Approx(5.0).epsilon(1e-12));

    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    CHECK(stable_rank(D) == doctest::Approx(1.25).epsilon(1e-12));

    Matrix D3 = Matrix::Zero(3, 3);
    D3(0, 0) = 1.0;
    D3(1, 1) = 1.0;
    D3(2, 2) = 0.1;
    CHECK(stable_rank(D3) == doctest::Approx(2.01).epsilon(1e-12));

    CHECK_THROWS_AS(stable_rank(Matrix::Zero(3, 3)), std::domain_error);
}

TEST_CASE("stable_rank bounds on random matrices") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix M = random_matrix(5, 9, 100 + s);
        const double sr = stable_rank(M);
        CHECK(sr >= 1.0 - 1e-9);
        CHECK(sr <= 5.0 + 1e-9);
        CHECK(frobenius_norm(M) * frobenius_norm(M) >=
              spectral_norm(M) * spectral_norm(M) - 1e-12);
    }
}

TEST_CASE("extreme_singular_values closed forms") {
    SUBCASE("orthonormal columns") {
        Matrix Q(3, 2);
        Q << 1, 0, 0, 1, 0, 0;
        const SingularSummary s = extreme_singular_values(Q);
        CHECK(s.sigma_min == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.sigma_max == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("2x2 with Gram eigenvalues 1 +- 1/sqrt(2)") {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        Matrix M(2, 2);
        M << 1, inv_sqrt2, 0, inv_sqrt2;
        const SingularSummary s = extreme_singular_values(M);
        CHECK(s.sigma_max == doctest::Approx(std::sqrt(1.0 + inv_sqrt2)).epsilon(1e-12));
        CHECK(s.sigma_min == doctest::Approx(std::sqrt(1.0 - inv_sqrt2)).epsilon(1e-12));
        // frozen decimal values
        CHECK(s.sigma_max == doctest::Approx(1.3065630).epsilon(1e-6));
        CHECK(s.sigma_min == doctest::Approx(0.5411961).epsilon(1e-6));
    }
    SUBCASE("duplicated column is rank deficient") {
        Matrix M(3, 2);
        M.col(0) = Vector::Constant(3, 1.0);
        M.col(1) = M.col(0);
        CHECK(extreme_singular_values(M).sigma_min == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("zero matrix") {
        const SingularSummary s = extreme_singular_values(Matrix::Zero(2, 3));
        CHECK(s.sigma_min == 0.0);
        CHECK(s.sigma_max == 0.0);
        CHECK(s.frobenius == 0.0);
    }
}

TEST_CASE("extreme_singular_values agrees with SVD oracle") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Eigen::Index rows = 2 + static_cast<Eigen::Index>(s % 7);
        const Eigen::Index cols = 2 + static_cast<Eigen::Index>((s * 3) % 7);
        const Matrix M = random_matrix(rows, cols, 200 + s);
        const Eigen::VectorXd sv = svd_oracle(M);
        const SingularSummary out = extreme_singular_values(M);
        CHECK(out.sigma_max == doctest::Approx(sv(0)).epsilon(1e-9));
        CHECK(out.sigma_min == doctest::Approx(sv(sv.size() - 1)).epsilon(1e-9));
        CHECK(out.sigma_min <= out.sigma_max);
        CHECK(out.sigma_max <= out.frobenius + 1e-12);
    }
}

TEST_CASE("validate_matrix rejects non-finite entries") {
    Matrix M = Matrix::Identity(2, 2);
    M(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_matrix(M), std::invalid_argument);
    CHECK_THROWS_AS(validate_matrix(Matrix()), std::invalid_argument);
}

TEST_CASE("matrix market round trip") {
    const Matrix M = random_matrix(4, 7, 42);
    std::stringstream buf;
    write_matrix(M, buf);
    const Matrix back = read_matrix(buf);
    REQUIRE(back.rows() == 4);
    REQUIRE(back.cols() == 7);
    CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market array format conformance") {
    std::stringstream in(
        "%%MatrixMarket matrix array real general\n"
        "2 2\n"
        "1\n2\n3\n4\n");
    const Matrix M = read_matrix(in);
    // column-major body
    CHECK(M(0, 0) == 1.0);
    CHECK(M(1, 0) == 2.0);
    CHECK(M(0, 1) == 3.0);
    CHECK(M(1, 1) == 4.0);
}

TEST_CASE("matrix market coordinate format") {
    std::stringstream in(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 3 2\n"
        "1 2 5.5\n"
        "2 3 -1\n");
    const Matrix M = read_matrix(in);
    REQUIRE(M.rows() == 2);
    REQUIRE(M.cols() == 3);
    CHECK(M(0, 1) == 5.5);
    CHECK(M(1, 2) == -1.0);
    CHECK(M(0, 0) == 0.0);
}

TEST_CASE("matrix market malformed input") {
    SUBCASE("short body") {
        std::stringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
        CHECK_THROWS_AS(read_matrix(in), ParseError);
    }
    SUBCASE("bad header") {
        std::stringstream in("%%NotMatrixMarket\n2 2\n1\n2\n3\n4\n");
        CHECK_THROWS_AS(read_matrix(in), ParseError);
    }
    SUBCASE("non-finite entry") {
        std::stringstream in("%%MatrixMarket matrix array real general\n1 1\nnan\n");
        CHECK_THROWS_AS(read_matrix(in), ParseError);
    }
    SUBCASE("parse error carries a line number") {
        std::stringstream in("%%MatrixMarket matrix array real general\nbogus\n");
        try {
            read_matrix(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
}
