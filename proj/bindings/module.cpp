#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "xrip/disclearn.hpp"
#include "xrip/ensembles.hpp"
#include "xrip/gf2.hpp"
#include "xrip/hadamard.hpp"
#include "xrip/matrix.hpp"
#include "xrip/recovery.hpp"
#include "xrip/ripcheck.hpp"

namespace py = pybind11;
using namespace xrip;

namespace {

EnsembleSpec make_spec(const std::string& variant, std::size_t l, double beta,
                       const std::string& base, const std::optional<Matrix>& covariance) {
    const EnsembleVariant v = ensemble_variant_from_name(variant);
    switch (v) {
        case EnsembleVariant::gaussian: return EnsembleSpec::Gaussian();
        case EnsembleVariant::rademacher: return EnsembleSpec::Rademacher();
        case EnsembleVariant::uniform_bounded: return EnsembleSpec::UniformBounded();
        case EnsembleVariant::kwise_signs: return EnsembleSpec::KwiseSigns(l);
        case EnsembleVariant::bernoulli_subgaussian: {
            EnsembleSpec b;
            const EnsembleVariant bv = ensemble_variant_from_name(base);
            if (bv == EnsembleVariant::gaussian) b = EnsembleSpec::Gaussian();
            else if (bv == EnsembleVariant::rademacher) b = EnsembleSpec::Rademacher();
            else if (bv == EnsembleVariant::uniform_bounded) b = EnsembleSpec::UniformBounded();
            else throw std::invalid_argument("base must be entrywise subgaussian");
            return EnsembleSpec::BernoulliSubgaussian(beta, b);
        }
        case EnsembleVariant::ccp_gaussian:
            if (!covariance) throw std::invalid_argument("ccp_gaussian needs covariance");
            return EnsembleSpec::CcpGaussian(*covariance);
        case EnsembleVariant::ccp_sphere: return EnsembleSpec::CcpSphere();
    }
    throw std::invalid_argument("unknown variant");
}

py::dict rip_dict(const RipReport& r) {
    py::dict d;
    d["k"] = r.k;
    d["scale"] = r.scale;
    d["eps_hat"] = r.eps_hat;
    d["worst_support"] = r.worst_support;
    d["sigma_min_worst"] = r.sigma_min_worst;
    d["sigma_max_worst"] = r.sigma_max_worst;
    d["exact"] = r.exact;
    d["supports_examined"] = r.supports_examined;
    return d;
}

}  // namespace

PYBIND11_MODULE(_xrip, m) {
    m.doc() = "RIP verification laboratory: core numerics";

    m.def("frobenius_norm", &frobenius_norm, py::arg("M"));
    m.def("spectral_norm",
          [](const Matrix& M) { return spectral_norm(M); }, py::arg("M"));
    m.def("stable_rank",
          [](const Matrix& M) { return stable_rank(M); }, py::arg("M"));
    m.def("extreme_singular_values",
          [](const Matrix& M) {
              const SingularSummary s = extreme_singular_values(M);
              return py::make_tuple(s.sigma_min, s.sigma_max, s.frobenius);
          },
          py::arg("M"));

    m.def("sample_matrix",
          [](const std::string& variant, Eigen::Index p, Eigen::Index d, std::uint64_t seed,
             std::uint64_t stream, std::size_t l, double beta, const std::string& base,
             const std::optional<Matrix>& covariance) {
              return sample_matrix(make_spec(variant, l, beta, base, covariance), p, d,
                                   SeedSpec{seed, stream});
          },
          py::arg("variant"), py::arg("p"), py::arg("d"), py::arg("seed"), py::arg("stream") = 0,
          py::arg("l") = 0, py::arg("beta") = 1.0, py::arg("base") = "gaussian",
          py::arg("covariance") = std::nullopt);

    m.def("sample_kwise_signs",
          [](std::size_t l, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
              return sample_kwise_signs(l, n, SeedSpec{seed, stream});
          },
          py::arg("l"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
    m.def("verify_kwise", &verify_kwise, py::arg("l"), py::arg("n"), py::arg("field_bits"));

    m.def("rip_constant_exact",
          [](const Matrix& M, Eigen::Index k, double scale, std::uint64_t cap) {
              return rip_dict(rip_constant_exact(M, k, scale, cap));
          },
          py::arg("M"), py::arg("k"), py::arg("scale") = 1.0, py::arg("cap") = 1000000);
    m.def("rip_constant_sampled",
          [](const Matrix& M, Eigen::Index k, double scale, std::uint64_t n_supports,
             std::uint64_t seed, std::uint64_t stream) {
              return rip_dict(rip_constant_sampled(M, k, scale, n_supports, SeedSpec{seed, stream}));
          },
          py::arg("M"), py::arg("k"), py::arg("scale"), py::arg("n_supports"), py::arg("seed"),
          py::arg("stream") = 0);

    m.def("required_stable_rank",
          [](const std::string& model, Eigen::Index k, Eigen::Index d, double eps, double K,
             double tau, double beta, Eigen::Index ell, double C_abs, double sr_actual) {
              ConditionParams p{k, d, eps, K, tau, beta, ell};
              const ConditionReport r = required_stable_rank(model, p, C_abs, sr_actual);
              py::dict out;
              out["model"] = r.model;
              out["sr_actual"] = r.sr_actual;
              out["sr_required"] = r.sr_required;
              out["ratio"] = r.ratio;
              return out;
          },
          py::arg("model"), py::arg("k"), py::arg("d"), py::arg("eps"), py::arg("K") = 1.0,
          py::arg("tau") = 1.0, py::arg("beta") = 1.0, py::arg("ell") = 1, py::arg("C_abs") = 1.0,
          py::arg("sr_actual") = 0.0);

    m.def("hadamard_power",
          [](const Matrix& M, Eigen::Index ell, std::uint64_t cap) {
              return hadamard_power(M, ell, cap);
          },
          py::arg("M"), py::arg("ell"), py::arg("cap") = std::uint64_t(1) << 20);
    m.def("hadamard_column", &hadamard_column, py::arg("M"), py::arg("members"));
    m.def("rank_subset", &rank_subset, py::arg("d"), py::arg("members"));
    m.def("unrank_subset", &unrank_subset, py::arg("d"), py::arg("ell"), py::arg("rank"));
    m.def("binomial", &binomial, py::arg("d"), py::arg("ell"));

    m.def("support_decompose",
          [](const std::vector<IndexPair>& support, const std::vector<Eigen::Index>& I) {
              const SupportDecomposition dec =
                  support_decompose(std::set<IndexPair>(support.begin(), support.end()),
                                    std::set<Eigen::Index>(I.begin(), I.end()));
              return py::make_tuple(dec.U_sets, dec.W_sets);
          },
          py::arg("support"), py::arg("I"));

    m.def("bpdn_solve",
          [](const Matrix& M, const Vector& y, double delta, double tol, std::uint64_t max_iter) {
              RecoveryProblem prob{M, y, delta};
              SolverOptions opt;
              opt.tol = tol;
              opt.max_iter = max_iter;
              const RecoveryResult r = bpdn_solve(prob, opt);
              py::dict out;
              out["x_hat"] = r.x_hat;
              out["residual_norm"] = r.residual_norm;
              out["l1_value"] = r.l1_value;
              out["iterations"] = r.iterations;
              out["converged"] = r.converged;
              out["infeasible"] = r.infeasible;
              out["min_residual"] = r.min_residual;
              return out;
          },
          py::arg("M"), py::arg("y"), py::arg("delta") = 0.0, py::arg("tol") = 1e-8,
          py::arg("max_iter") = 50000);
    m.def("candes_constants", &candes_constants, py::arg("eps"));
    m.def("sigma_k_1", &sigma_k_1, py::arg("x"), py::arg("k"));
    m.def("recovery_bound", &recovery_bound, py::arg("eps"), py::arg("delta"), py::arg("x"),
          py::arg("k"));

    m.def("jl_check",
          [](const Matrix& M, const std::vector<Vector>& points, std::uint64_t seed, double scale) {
              return jl_check(M, points, SeedSpec{seed, 0}, scale);
          },
          py::arg("M"), py::arg("points"), py::arg("seed"), py::arg("scale") = 1.0);
}
