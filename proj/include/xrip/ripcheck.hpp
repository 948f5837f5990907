#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xrip/ensembles.hpp"
#include "xrip/matrix.hpp"

namespace xrip {

// Result of a restricted-isometry constant computation. In sampled mode
// eps_hat is a lower bound on the true constant (max over a subset of
// supports).
struct RipReport {
    Eigen::Index k = 0;
    double scale = 1.0;  // the ||X||_F normalizer; 1 recovers the unscaled form
    double eps_hat = 0.0;
    std::vector<Eigen::Index> worst_support;  // 0-based column indices
    double sigma_min_worst = 0.0;
    double sigma_max_worst = 0.0;
    bool exact = false;
    std::uint64_t supports_examined = 0;
};

// Evaluation of one theorem's stable-rank hypothesis.
struct ConditionReport {
    std::string model;
    double sr_actual = 0.0;    // 0 when no X was supplied
    double sr_required = 0.0;  // right-hand side with the configurable C_abs
    double ratio = 0.0;        // sr_actual / sr_required
};

// Parameters of the stable-rank condition formulas. K is the psi_2 bound,
// tau the almost-sure bound, beta the Bernoulli parameter, ell the
// Hadamard-product order.
struct ConditionParams {
    Eigen::Index k = 0;
    Eigen::Index d = 0;
    double eps = 0.0;
    double K = 1.0;
    double tau = 1.0;
    double beta = 1.0;
    Eigen::Index ell = 1;
};

struct TrialSummary {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double eps_target = 0.0;
    std::vector<double> eps_hats;  // one per trial
    double success_fraction() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

// Exact RIP constant with respect to `scale`: enumerates every size-k column
// support of M, takes the worst deviation of sigma_{min,max}(M_I)/scale
// from 1. Throws ResourceError when C(d, k) exceeds the enumeration cap.
RipReport rip_constant_exact(const Matrix& M, Eigen::Index k, double scale,
                             std::uint64_t enumeration_cap = 1000000);

// Same over n_supports distinct supports sampled uniformly (seeded Floyd
// sampling); a lower bound on the exact constant.
RipReport rip_constant_sampled(const Matrix& M, Eigen::Index k, double scale,
                               std::uint64_t n_supports, SeedSpec seed);

// Stable-rank hypothesis evaluator. Models: subgaussian, kwise, sparse, ccp,
// hadamard2, hadamardl. Pass sr_actual = 0 when X is not available.
ConditionReport required_stable_rank(const std::string& model, const ConditionParams& params,
                                     double C_abs = 1.0, double sr_actual = 0.0);

enum class ProductKind { plain, hadamard };

struct TrialOptions {
    ProductKind product = ProductKind::plain;
    Eigen::Index ell = 2;       // Hadamard order (product == hadamard)
    Eigen::Index d = 0;         // column count of R
    Eigen::Index k = 0;         // sparsity
    double eps_target = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t n_supports = 0;
    int threads = 1;            // 0 = hardware concurrency
};

// Monte Carlo success-probability estimate: per trial draws R from spec,
// evaluates the sampled RIP constant of XR (or XR^(ell)) at scale ||X||_F,
// counts trials with eps_hat <= eps_target. Per-trial streams are derived
// from the trial number, so the estimate is independent of execution order.
TrialSummary rip_success_probability(const Matrix& X, const EnsembleSpec& spec,
                                     const TrialOptions& opt, SeedSpec seed);

// Empirical tail of | ||XRu|| - s ||X||_F | > t s ||X||_F where s = sqrt(beta)
// for the Bernoulli-subgaussian model and 1 otherwise. Returns one fraction
// per threshold. u must be a unit vector to 1e-10.
std::vector<double> concentration_tail(const Matrix& X, const EnsembleSpec& spec, const Vector& u,
                                       const std::vector<double>& thresholds,
                                       std::uint64_t n_trials, SeedSpec seed);

// Empirical psi_2 norm: max over even moment orders a = 2p of
// p^(-1/2) (mean |x|^a)^(1/a), so +-1 variables score 1. The sampler maps a
// counter to one draw.
double psi2_estimate(const std::function<double(std::uint64_t)>& sampler,
                     std::uint64_t n_samples, const std::vector<int>& moments = {2, 4, 6, 8});

// Flips each column sign of M with a seeded fair coin and returns the
// maximum relative pairwise distortion of the mapped points,
// | ||M'(a-b)||/scale - ||a-b|| | / ||a-b||. Coincident pairs are skipped.
double jl_check(const Matrix& M, const std::vector<Vector>& points, SeedSpec seed,
                double scale = 1.0);

}  // namespace xrip
