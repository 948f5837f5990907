#pragma once

#include <memory>
#include <string>

#include "xrip/matrix.hpp"
#include "xrip/rng.hpp"

namespace xrip {

enum class EnsembleVariant {
    gaussian,            // i.i.d. N(0, 1) entries
    rademacher,          // i.i.d. +-1 entries
    uniform_bounded,     // i.i.d. uniform on [-sqrt(3), sqrt(3)]
    kwise_signs,         // exactly l-wise independent +-1 entries
    bernoulli_subgaussian,  // Bernoulli(beta) mask Hadamard a subgaussian base
    ccp_gaussian,        // i.i.d. columns from N(0, Sigma)
    ccp_sphere,          // i.i.d. columns uniform on sqrt(p) * S^(p-1)
};

// Tagged description of one random-matrix model; each variant carries only
// its own parameters.
struct EnsembleSpec {
    EnsembleVariant variant = EnsembleVariant::gaussian;
    double K = 1.0;                    // psi_2 bound of the entries
    double tau = 0.0;                  // almost-sure entry bound (0 = unbounded)
    double beta = 1.0;                 // Bernoulli parameter (bernoulli_subgaussian)
    std::size_t l = 0;                 // independence degree (kwise_signs)
    Matrix covariance;                 // column covariance (ccp_gaussian)
    std::shared_ptr<EnsembleSpec> base;  // the Gamma factor (bernoulli_subgaussian)

    static EnsembleSpec Gaussian();
    static EnsembleSpec Rademacher();
    static EnsembleSpec UniformBounded();
    static EnsembleSpec KwiseSigns(std::size_t l);
    static EnsembleSpec BernoulliSubgaussian(double beta, EnsembleSpec base);
    static EnsembleSpec CcpGaussian(Matrix covariance);
    static EnsembleSpec CcpSphere();

    // True for variants with independent entrywise subgaussian draws
    // (valid Gamma factors of the Bernoulli-subgaussian model).
    bool entrywise_subgaussian() const;
    std::string name() const;
};

EnsembleVariant ensemble_variant_from_name(const std::string& name);

// p x d matrix drawn per spec, deterministic given seed. Throws
// std::invalid_argument on parameter/dimension mismatch (e.g. Sigma not p x p).
Matrix sample_matrix(const EnsembleSpec& spec, Eigen::Index p, Eigen::Index d, SeedSpec seed);

// Bernoulli(beta) 0/1 mask Hadamard-multiplied with a base-ensemble draw;
// mask and values come from independent derived streams.
Matrix sample_sparse(double beta, const EnsembleSpec& base, Eigen::Index p, Eigen::Index d,
                     SeedSpec seed);

}  // namespace xrip
