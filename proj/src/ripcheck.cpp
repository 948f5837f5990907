#include "xrip/ripcheck.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "xrip/errors.hpp"
#include "xrip/hadamard.hpp"

namespace xrip {

namespace {

struct SupportStats {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

SupportStats support_singulars(const Matrix& M, const std::vector<Eigen::Index>& support) {
    Matrix sub(M.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) {
        sub.col(static_cast<Eigen::Index>(c)) = M.col(support[c]);
    }
    const SingularSummary s = extreme_singular_values(sub);
    return {s.sigma_min, s.sigma_max};
}

void fold_support(RipReport& report, const std::vector<Eigen::Index>& support,
                  const SupportStats& s) {
    const double dev = std::max(s.sigma_max / report.scale - 1.0, 1.0 - s.sigma_min / report.scale);
    ++report.supports_examined;
    if (report.supports_examined == 1 || dev > report.eps_hat) {
        report.eps_hat = std::max(dev, 0.0);
        report.worst_support = support;
        report.sigma_min_worst = s.sigma_min;
        report.sigma_max_worst = s.sigma_max;
    }
}

// Floyd's algorithm: k distinct values from [0, d), order-normalized.
std::vector<Eigen::Index> sample_support(Eigen::Index d, Eigen::Index k, const CounterRng& rng,
                                         std::uint64_t& counter) {
    std::set<Eigen::Index> chosen;
    for (Eigen::Index j = d - k; j < d; ++j) {
        const auto t = static_cast<Eigen::Index>(rng.bits(counter++) % static_cast<std::uint64_t>(j + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    return {chosen.begin(), chosen.end()};
}

void run_parallel(std::uint64_t n, int threads, const std::function<void(std::uint64_t)>& body) {
    unsigned nthreads = threads == 0 ? std::thread::hardware_concurrency()
                                     : static_cast<unsigned>(threads);
    nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(n ? n : 1)));
    if (nthreads == 1) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (std::uint64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

RipReport rip_constant_exact(const Matrix& M, Eigen::Index k, double scale,
                             std::uint64_t enumeration_cap) {
    validate_matrix(M);
    if (scale <= 0.0) throw std::domain_error("rip_constant_exact: scale must be positive");
    if (k < 1 || k > M.cols()) throw std::domain_error("rip_constant_exact: k out of range");
    const std::uint64_t total = binomial(M.cols(), k);
    if (total > enumeration_cap) {
        throw ResourceError("rip_constant_exact: " + std::to_string(total) +
                            " supports exceed the enumeration cap; use rip_constant_sampled");
    }

    RipReport report;
    report.k = k;
    report.scale = scale;
    report.exact = true;

    std::vector<Eigen::Index> support(k);
    for (Eigen::Index i = 0; i < k; ++i) support[i] = i;
    while (true) {
        fold_support(report, support, support_singulars(M, support));
        Eigen::Index i = k;
        while (i > 0 && support[i - 1] == M.cols() - k + i - 1) --i;
        if (i == 0) break;
        ++support[i - 1];
        for (Eigen::Index j = i; j < k; ++j) support[j] = support[j - 1] + 1;
    }
    return report;
}

RipReport rip_constant_sampled(const Matrix& M, Eigen::Index k, double scale,
                               std::uint64_t n_supports, SeedSpec seed) {
    validate_matrix(M);
    if (scale <= 0.0) throw std::domain_error("rip_constant_sampled: scale must be positive");
    if (k < 1 || k > M.cols()) throw std::domain_error("rip_constant_sampled: k out of range");
    if (n_supports < 1) throw std::domain_error("rip_constant_sampled: n_supports must be >= 1");

    RipReport report;
    report.k = k;
    report.scale = scale;
    report.exact = false;

    // Without replacement across supports: n_supports >= C(d, k) degenerates
    // to exhaustive enumeration.
    std::uint64_t total = std::numeric_limits<std::uint64_t>::max();
    try {
        total = binomial(M.cols(), k);
    } catch (const ResourceError&) {
    }
    if (n_supports >= total) {
        RipReport exact = rip_constant_exact(M, k, scale, total);
        exact.exact = false;
        return exact;
    }

    CounterRng rng(seed);
    std::uint64_t counter = 0;
    std::set<std::vector<Eigen::Index>> seen;
    while (seen.size() < n_supports) {
        const auto support = sample_support(M.cols(), k, rng, counter);
        if (!seen.insert(support).second) continue;
        fold_support(report, support, support_singulars(M, support));
    }
    return report;
}

ConditionReport required_stable_rank(const std::string& model, const ConditionParams& p,
                                     double C_abs, double sr_actual) {
    if (p.k < 1 || p.k >= p.d) throw std::domain_error("required_stable_rank: need 1 <= k < d");
    if (p.eps <= 0.0 || p.eps >= 1.0) {
        throw std::domain_error("required_stable_rank: eps must be in (0, 1)");
    }
    const double k = static_cast<double>(p.k);
    const double d = static_cast<double>(p.d);
    const double e2 = p.eps * p.eps;
    double required;
    if (model == "subgaussian") {
        required = C_abs * std::pow(p.K, 4) * (k / e2) * std::log(d / k);
    } else if (model == "kwise") {
        required = C_abs * (k / e2) * std::log(d / k);
    } else if (model == "sparse") {
        if (p.beta <= 0.0 || p.beta > 1.0) {
            throw std::domain_error("required_stable_rank: beta must be in (0, 1]");
        }
        required = C_abs * std::pow(p.K, 4) * k / (p.beta * e2) * std::log(d / k);
    } else if (model == "ccp") {
        required = C_abs * std::pow(p.K, 4) * (k / e2) * std::log(d / k);
    } else if (model == "hadamard2") {
        required = C_abs * std::pow(p.tau, 8) * (k * k / e2) * std::log(d * d / k);
    } else if (model == "hadamardl") {
        required = C_abs * std::pow(p.tau, 4.0 * static_cast<double>(p.ell)) * (k * k * k / e2) *
                   std::log(std::pow(d, static_cast<double>(p.ell)) / k);
    } else {
        throw std::domain_error("required_stable_rank: unknown model '" + model + "'");
    }
    ConditionReport report;
    report.model = model;
    report.sr_actual = sr_actual;
    report.sr_required = required;
    report.ratio = required > 0.0 ? sr_actual / required : 0.0;
    return report;
}

TrialSummary rip_success_probability(const Matrix& X, const EnsembleSpec& spec,
                                     const TrialOptions& opt, SeedSpec seed) {
    validate_matrix(X);
    if (opt.d < 1 || opt.k < 1 || opt.n_trials < 1 || opt.n_supports < 1) {
        throw std::domain_error("rip_success_probability: invalid trial options");
    }
    const Eigen::Index p = X.cols();
    const double scale = frobenius_norm(X);
    const std::uint64_t ncols = opt.product == ProductKind::plain
                                    ? static_cast<std::uint64_t>(opt.d)
                                    : binomial(opt.d, opt.ell);
    if (static_cast<std::uint64_t>(opt.k) > ncols) {
        throw std::domain_error("rip_success_probability: k exceeds column count");
    }

    TrialSummary summary;
    summary.trials = opt.n_trials;
    summary.eps_target = opt.eps_target;
    summary.eps_hats.assign(opt.n_trials, 0.0);

    run_parallel(opt.n_trials, opt.threads, [&](std::uint64_t trial) {
        // Trial t uses stream_index = t for reproducible Monte Carlo.
        const SeedSpec trial_seed{seed.master_seed, seed.stream_index + trial};
        const Matrix R = sample_matrix(spec, p, opt.d, trial_seed);
        double eps_hat;
        if (opt.product == ProductKind::plain) {
            const Matrix M = X * R;
            eps_hat = rip_constant_sampled(M, opt.k, scale, opt.n_supports,
                                           trial_seed.derived(0x5edULL))
                          .eps_hat;
        } else {
            // Sample supports over the C(d, ell) Hadamard columns and build
            // only the restricted submatrices of XR^(ell).
            CounterRng rng(trial_seed.derived(0x5edULL));
            std::uint64_t counter = 0;
            eps_hat = 0.0;
            for (std::uint64_t s = 0; s < opt.n_supports; ++s) {
                const auto support =
                    sample_support(static_cast<Eigen::Index>(ncols), opt.k, rng, counter);
                Matrix sub(X.rows(), opt.k);
                for (Eigen::Index c = 0; c < opt.k; ++c) {
                    sub.col(c) = X * hadamard_column(
                                         R, unrank_subset(opt.d, opt.ell,
                                                          static_cast<std::uint64_t>(support[c])));
                }
                const SingularSummary sv = extreme_singular_values(sub);
                eps_hat = std::max(
                    eps_hat, std::max(sv.sigma_max / scale - 1.0, 1.0 - sv.sigma_min / scale));
            }
            eps_hat = std::max(eps_hat, 0.0);
        }
        summary.eps_hats[trial] = eps_hat;
    });

    for (const double e : summary.eps_hats) {
        if (e <= opt.eps_target) ++summary.successes;
    }
    return summary;
}

std::vector<double> concentration_tail(const Matrix& X, const EnsembleSpec& spec, const Vector& u,
                                       const std::vector<double>& thresholds,
                                       std::uint64_t n_trials, SeedSpec seed) {
    validate_matrix(X);
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        throw std::domain_error("concentration_tail: u must be a unit vector");
    }
    const double s =
        spec.variant == EnsembleVariant::bernoulli_subgaussian ? std::sqrt(spec.beta) : 1.0;
    const double center = s * frobenius_norm(X);
    std::vector<std::uint64_t> exceed(thresholds.size(), 0);
    for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
        const SeedSpec trial_seed{seed.master_seed, seed.stream_index + trial};
        const Matrix R = sample_matrix(spec, X.cols(), u.size(), trial_seed);
        const double dev = std::abs((X * (R * u)).norm() - center);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (dev > thresholds[i] * center) ++exceed[i];
        }
    }
    std::vector<double> tails(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        tails[i] = static_cast<double>(exceed[i]) / static_cast<double>(n_trials);
    }
    return tails;
}

double psi2_estimate(const std::function<double(std::uint64_t)>& sampler,
                     std::uint64_t n_samples, const std::vector<int>& moments) {
    if (n_samples < 1000) {
        throw std::domain_error("psi2_estimate: need at least 1000 samples");
    }
    if (moments.empty()) throw std::domain_error("psi2_estimate: no moment orders");
    std::vector<double> sums(moments.size(), 0.0);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double x = std::abs(sampler(i));
        for (std::size_t a = 0; a < moments.size(); ++a) {
            sums[a] += std::pow(x, moments[a]);
        }
    }
    double best = 0.0;
    for (std::size_t a = 0; a < moments.size(); ++a) {
        const double order = moments[a];
        if (order < 2) throw std::domain_error("psi2_estimate: moment order must be >= 2");
        const double mean = sums[a] / static_cast<double>(n_samples);
        // Order a = 2p contributes p^(-1/2) (E|x|^(2p))^(1/(2p)); the p = 1
        // term is the standard deviation, so +-1 variables score exactly 1.
        best = std::max(best, std::pow(mean, 1.0 / order) / std::sqrt(order / 2.0));
    }
    return best;
}

double jl_check(const Matrix& M, const std::vector<Vector>& points, SeedSpec seed, double scale) {
    validate_matrix(M);
    if (points.size() < 2) throw std::domain_error("jl_check: need at least 2 points");
    if (scale <= 0.0) throw std::domain_error("jl_check: scale must be positive");
    CounterRng rng(seed);
    Matrix flipped = M;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        flipped.col(j) *= rng.sign(static_cast<std::uint64_t>(j));
    }
    double worst = 0.0;
    bool any = false;
    for (std::size_t a = 0; a + 1 < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            const Vector diff = points[a] - points[b];
            const double dist = diff.norm();
            if (dist == 0.0) continue;  // coincident pair carries no constraint
            any = true;
            worst = std::max(worst, std::abs((flipped * diff).norm() / scale - dist) / dist);
        }
    }
    if (!any) throw std::domain_error("jl_check: fewer than 2 distinct points");
    return worst;
}

}  // namespace xrip
