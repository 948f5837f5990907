#include "xrip/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include "xrip/gf2.hpp"

namespace xrip {

EnsembleSpec EnsembleSpec::Gaussian() {
    EnsembleSpec s;
    s.variant = EnsembleVariant::gaussian;
    s.K = 1.0;
    return s;
}

EnsembleSpec EnsembleSpec::Rademacher() {
    EnsembleSpec s;
    s.variant = EnsembleVariant::rademacher;
    s.K = 1.0;
    s.tau = 1.0;
    return s;
}

EnsembleSpec EnsembleSpec::UniformBounded() {
    EnsembleSpec s;
    s.variant = EnsembleVariant::uniform_bounded;
    s.K = 1.0;
    s.tau = std::sqrt(3.0);
    return s;
}

EnsembleSpec EnsembleSpec::KwiseSigns(std::size_t l) {
    if (l < 1) throw std::invalid_argument("KwiseSigns: l must be >= 1");
    EnsembleSpec s;
    s.variant = EnsembleVariant::kwise_signs;
    s.K = 1.0;
    s.tau = 1.0;
    s.l = l;
    return s;
}

EnsembleSpec EnsembleSpec::BernoulliSubgaussian(double beta, EnsembleSpec base) {
    if (beta < 0.0 || beta > 1.0) {
        throw std::invalid_argument("BernoulliSubgaussian: beta must be in [0, 1]");
    }
    if (!base.entrywise_subgaussian()) {
        throw std::invalid_argument("BernoulliSubgaussian: base must be entrywise subgaussian");
    }
    EnsembleSpec s;
    s.variant = EnsembleVariant::bernoulli_subgaussian;
    s.beta = beta;
    s.K = base.K;
    s.base = std::make_shared<EnsembleSpec>(std::move(base));
    return s;
}

EnsembleSpec EnsembleSpec::CcpGaussian(Matrix covariance) {
    if (covariance.rows() != covariance.cols()) {
        throw std::invalid_argument("CcpGaussian: covariance must be square");
    }
    if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
        throw std::invalid_argument("CcpGaussian: covariance must be symmetric");
    }
    EnsembleSpec s;
    s.variant = EnsembleVariant::ccp_gaussian;
    // c.c.p. constant: K^2 = 2 ||Sigma||
    Eigen::SelfAdjointEigenSolver<Matrix> es(covariance, Eigen::EigenvaluesOnly);
    const double lambda_max = es.eigenvalues()(covariance.rows() - 1);
    if (es.eigenvalues()(0) < -1e-10 * std::max(1.0, lambda_max)) {
        throw std::invalid_argument("CcpGaussian: covariance must be positive semidefinite");
    }
    s.K = std::sqrt(2.0 * std::max(0.0, lambda_max));
    s.covariance = std::move(covariance);
    return s;
}

EnsembleSpec EnsembleSpec::CcpSphere() {
    EnsembleSpec s;
    s.variant = EnsembleVariant::ccp_sphere;
    s.K = 2.0;
    return s;
}

bool EnsembleSpec::entrywise_subgaussian() const {
    switch (variant) {
        case EnsembleVariant::gaussian:
        case EnsembleVariant::rademacher:
        case EnsembleVariant::uniform_bounded:
            return true;
        default:
            return false;
    }
}

std::string EnsembleSpec::name() const {
    switch (variant) {
        case EnsembleVariant::gaussian: return "gaussian";
        case EnsembleVariant::rademacher: return "rademacher";
        case EnsembleVariant::uniform_bounded: return "uniform_bounded";
        case EnsembleVariant::kwise_signs: return "kwise_signs";
        case EnsembleVariant::bernoulli_subgaussian: return "bernoulli_subgaussian";
        case EnsembleVariant::ccp_gaussian: return "ccp_gaussian";
        case EnsembleVariant::ccp_sphere: return "ccp_sphere";
    }
    return "unknown";
}

EnsembleVariant ensemble_variant_from_name(const std::string& name) {
    if (name == "gaussian") return EnsembleVariant::gaussian;
    if (name == "rademacher") return EnsembleVariant::rademacher;
    if (name == "uniform_bounded") return EnsembleVariant::uniform_bounded;
    if (name == "kwise_signs") return EnsembleVariant::kwise_signs;
    if (name == "bernoulli_subgaussian") return EnsembleVariant::bernoulli_subgaussian;
    if (name == "ccp_gaussian") return EnsembleVariant::ccp_gaussian;
    if (name == "ccp_sphere") return EnsembleVariant::ccp_sphere;
    throw std::invalid_argument("unknown ensemble variant '" + name + "'");
}

namespace {

const double kSqrt3 = std::sqrt(3.0);

Matrix sample_gaussian(Eigen::Index p, Eigen::Index d, SeedSpec seed) {
    CounterRng rng(seed);
    Matrix R(p, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            R(i, j) = rng.normal(static_cast<std::uint64_t>(j) * p + i);
        }
    }
    return R;
}

}  // namespace

Matrix sample_matrix(const EnsembleSpec& spec, Eigen::Index p, Eigen::Index d, SeedSpec seed) {
    if (p <= 0 || d <= 0) throw std::invalid_argument("sample_matrix: dimensions must be positive");
    CounterRng rng(seed);
    switch (spec.variant) {
        case EnsembleVariant::gaussian:
            return sample_gaussian(p, d, seed);
        case EnsembleVariant::rademacher: {
            Matrix R(p, d);
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < p; ++i)
                    R(i, j) = rng.sign(static_cast<std::uint64_t>(j) * p + i);
            return R;
        }
        case EnsembleVariant::uniform_bounded: {
            Matrix R(p, d);
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < p; ++i)
                    R(i, j) =
                        kSqrt3 * (2.0 * rng.uniform(static_cast<std::uint64_t>(j) * p + i) - 1.0);
            return R;
        }
        case EnsembleVariant::kwise_signs: {
            const auto signs =
                sample_kwise_signs(spec.l, static_cast<std::size_t>(p) * d, seed);
            Matrix R(p, d);
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < p; ++i)
                    R(i, j) = signs[static_cast<std::size_t>(j) * p + i];
            return R;
        }
        case EnsembleVariant::bernoulli_subgaussian:
            return sample_sparse(spec.beta, *spec.base, p, d, seed);
        case EnsembleVariant::ccp_gaussian: {
            if (spec.covariance.rows() != p) {
                throw std::invalid_argument("sample_matrix: covariance dimension != p");
            }
            Eigen::LLT<Matrix> llt(spec.covariance +
                                   1e-14 * Matrix::Identity(p, p) * spec.covariance.norm());
            if (llt.info() != Eigen::Success) {
                throw std::invalid_argument("sample_matrix: covariance factorization failed");
            }
            const Matrix L = llt.matrixL();
            return L * sample_gaussian(p, d, seed);
        }
        case EnsembleVariant::ccp_sphere: {
            // Normalized Gaussian columns scaled to radius sqrt(p); exact in
            // distribution.
            Matrix G = sample_gaussian(p, d, seed);
            const double radius = std::sqrt(static_cast<double>(p));
            for (Eigen::Index j = 0; j < d; ++j) {
                G.col(j) *= radius / G.col(j).norm();
            }
            return G;
        }
    }
    throw std::logic_error("sample_matrix: unhandled variant");
}

Matrix sample_sparse(double beta, const EnsembleSpec& base, Eigen::Index p, Eigen::Index d,
                     SeedSpec seed) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("sample_sparse: beta not in [0, 1]");
    if (!base.entrywise_subgaussian()) {
        throw std::invalid_argument("sample_sparse: base must be entrywise subgaussian");
    }
    Matrix gamma = sample_matrix(base, p, d, seed.derived(0));
    CounterRng mask(seed.derived(1));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            if (mask.uniform(static_cast<std::uint64_t>(j) * p + i) >= beta) gamma(i, j) = 0.0;
        }
    }
    return gamma;
}

}  // namespace xrip
