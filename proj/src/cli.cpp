#include "xrip/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xrip/disclearn.hpp"
#include "xrip/ensembles.hpp"
#include "xrip/errors.hpp"
#include "xrip/gf2.hpp"
#include "xrip/hadamard.hpp"
#include "xrip/matrix.hpp"
#include "xrip/mmio.hpp"
#include "xrip/recovery.hpp"
#include "xrip/ripcheck.hpp"

namespace xrip::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const std::string& ExperimentConfig::get(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

namespace {

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
    }
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(to_double(key, tok));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

long ExperimentConfig::get_long(const std::string& key) const { return to_long(key, get(key)); }

long ExperimentConfig::get_long_or(const std::string& key, long fallback) const {
    return has(key) ? get_long(key) : fallback;
}

unsigned long long ExperimentConfig::get_u64_or(const std::string& key,
                                                unsigned long long fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stoull(get(key));
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected unsigned integer");
    }
}

double ExperimentConfig::get_double(const std::string& key) const {
    return to_double(key, get(key));
}

double ExperimentConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& subcommand) {
    ExperimentConfig config;
    config.subcommand = subcommand;
    std::istringstream in(text);
    std::string line;
    bool in_ensemble = false;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[ensemble]") {
            in_ensemble = true;
            continue;
        }
        if (t.front() == '[') {
            throw ConfigError("unknown section '" + t + "' at line " + std::to_string(lineno));
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value' at line " + std::to_string(lineno));
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
        (in_ensemble ? config.ensemble : config.params)[key] = value;
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path, const std::string& subcommand) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), subcommand);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    }
    std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.rfind("ensemble.", 0) == 0) {
        config.ensemble[key.substr(9)] = value;
    } else {
        config.params[key] = value;
    }
}

namespace {

// ---- ensemble block -------------------------------------------------------

EnsembleSpec build_ensemble(const std::map<std::string, std::string>& block) {
    const auto it = block.find("variant");
    if (it == block.end()) throw ConfigError("[ensemble] block missing 'variant'");
    const EnsembleVariant variant = ensemble_variant_from_name(it->second);

    static const std::map<EnsembleVariant, std::set<std::string>> allowed = {
        {EnsembleVariant::gaussian, {"variant"}},
        {EnsembleVariant::rademacher, {"variant"}},
        {EnsembleVariant::uniform_bounded, {"variant"}},
        {EnsembleVariant::kwise_signs, {"variant", "l"}},
        {EnsembleVariant::bernoulli_subgaussian, {"variant", "beta", "base"}},
        {EnsembleVariant::ccp_gaussian, {"variant", "covariance"}},
        {EnsembleVariant::ccp_sphere, {"variant"}},
    };
    for (const auto& [key, value] : block) {
        if (!allowed.at(variant).count(key)) {
            throw ConfigError("ensemble variant '" + it->second + "' does not take key '" + key +
                              "'");
        }
    }
    switch (variant) {
        case EnsembleVariant::gaussian: return EnsembleSpec::Gaussian();
        case EnsembleVariant::rademacher: return EnsembleSpec::Rademacher();
        case EnsembleVariant::uniform_bounded: return EnsembleSpec::UniformBounded();
        case EnsembleVariant::kwise_signs: {
            const auto lit = block.find("l");
            if (lit == block.end()) throw ConfigError("kwise_signs requires ensemble key 'l'");
            return EnsembleSpec::KwiseSigns(static_cast<std::size_t>(to_long("l", lit->second)));
        }
        case EnsembleVariant::bernoulli_subgaussian: {
            const auto bit = block.find("beta");
            if (bit == block.end())
                throw ConfigError("bernoulli_subgaussian requires ensemble key 'beta'");
            const auto base_it = block.find("base");
            const std::string base_name = base_it == block.end() ? "gaussian" : base_it->second;
            EnsembleSpec base;
            base.variant = ensemble_variant_from_name(base_name);
            if (!base.entrywise_subgaussian()) {
                throw ConfigError("base variant '" + base_name + "' is not entrywise subgaussian");
            }
            if (base.variant == EnsembleVariant::uniform_bounded) base = EnsembleSpec::UniformBounded();
            if (base.variant == EnsembleVariant::rademacher) base = EnsembleSpec::Rademacher();
            if (base.variant == EnsembleVariant::gaussian) base = EnsembleSpec::Gaussian();
            return EnsembleSpec::BernoulliSubgaussian(to_double("beta", bit->second), base);
        }
        case EnsembleVariant::ccp_gaussian: {
            const auto cit = block.find("covariance");
            if (cit == block.end())
                throw ConfigError("ccp_gaussian requires ensemble key 'covariance' (matrix file)");
            return EnsembleSpec::CcpGaussian(read_matrix_file(cit->second));
        }
        case EnsembleVariant::ccp_sphere: return EnsembleSpec::CcpSphere();
    }
    throw ConfigError("unhandled ensemble variant");
}

json ensemble_json(const std::map<std::string, std::string>& block) {
    json j = json::object();
    for (const auto& [k, v] : block) j[k] = v;
    return j;
}

// ---- report emission ------------------------------------------------------

class Report {
  public:
    Report(const ExperimentConfig& config, const fs::path& out_dir) : out_dir_(out_dir) {
        fs::create_directories(out_dir_);
        stream_.open(out_dir_ / "report.jsonl");
        if (!stream_) {
            throw std::runtime_error("cannot open '" + (out_dir_ / "report.jsonl").string() +
                                     "' for writing");
        }
        json cfg;
        cfg["record"] = "config";
        cfg["subcommand"] = config.subcommand;
        cfg["version"] = kVersion;
        json params = json::object();
        for (const auto& [k, v] : config.params) params[k] = v;
        cfg["params"] = params;
        if (!config.ensemble.empty()) cfg["ensemble"] = ensemble_json(config.ensemble);
        emit(cfg);
    }

    ~Report() {
        // timestamps live outside the deterministic report
        std::ofstream meta(out_dir_ / "meta.json");
        json m;
        m["written_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count();
        meta << m.dump() << "\n";
    }

    void emit(const json& record) { stream_ << record.dump() << "\n"; }
    const fs::path& dir() const { return out_dir_; }

  private:
    fs::path out_dir_;
    std::ofstream stream_;
};

SeedSpec seed_of(const ExperimentConfig& c) {
    return SeedSpec{c.get_u64_or("seed", 0), c.get_u64_or("stream", 0)};
}

double scale_of(const ExperimentConfig& c, const Matrix& M, const std::string& fallback) {
    const std::string s = c.get_or("scale", fallback);
    if (s == "fro") return frobenius_norm(M);
    return to_double("scale", s);
}

json rip_report_json(const RipReport& r) {
    json j;
    j["record"] = "rip";
    j["k"] = r.k;
    j["scale"] = r.scale;
    j["eps_hat"] = r.eps_hat;
    j["worst_support"] = r.worst_support;
    j["sigma_min_worst"] = r.sigma_min_worst;
    j["sigma_max_worst"] = r.sigma_max_worst;
    j["mode"] = r.exact ? "exact" : "sampled";
    j["supports_examined"] = r.supports_examined;
    return j;
}

// ---- sparse vector files (`d ell nnz` header, `rank value` lines) ---------

std::map<std::uint64_t, double> read_sparse_vector(const std::string& path, Eigen::Index& d,
                                                   Eigen::Index& ell) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    long nnz = 0;
    if (!(in >> d >> ell >> nnz) || d < 1 || ell < 1 || nnz < 0) {
        throw ParseError("invalid sparse vector header in '" + path + "'", 1);
    }
    std::map<std::uint64_t, double> u;
    for (long i = 0; i < nnz; ++i) {
        std::uint64_t rank;
        double value;
        if (!(in >> rank >> value)) {
            throw ParseError("sparse vector body ended early in '" + path + "'", i + 2);
        }
        u[rank] = value;
    }
    return u;
}

// ---- subcommand bodies ----------------------------------------------------

void run_gen(const ExperimentConfig& c, Report& report) {
    const EnsembleSpec spec = build_ensemble(c.ensemble);
    const Eigen::Index p = c.get_long("p"), d = c.get_long("d");
    const Matrix R = sample_matrix(spec, p, d, seed_of(c));
    const std::string out_path =
        c.get_or("matrix_out", (report.dir() / "matrix.mtx").string());
    write_matrix_file(R, out_path);
    json j;
    j["record"] = "gen";
    j["variant"] = spec.name();
    j["rows"] = p;
    j["cols"] = d;
    j["frobenius"] = frobenius_norm(R);
    j["matrix_out"] = out_path;
    report.emit(j);
}

void run_srank(const ExperimentConfig& c, Report& report) {
    const Matrix M = read_matrix_file(c.get("matrix_in"));
    const double sr = stable_rank(M);
    json j;
    j["record"] = "srank";
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    j["frobenius_norm"] = frobenius_norm(M);
    j["spectral_norm"] = spectral_norm(M);
    j["stable_rank"] = sr;
    report.emit(j);
    if (c.has("model")) {
        ConditionParams params;
        params.k = c.get_long("k");
        params.d = c.get_long("d");
        params.eps = c.get_double("eps");
        params.K = c.get_double_or("K", 1.0);
        params.tau = c.get_double_or("tau", 1.0);
        params.beta = c.get_double_or("beta", 1.0);
        params.ell = c.get_long_or("ell", 1);
        const ConditionReport cond =
            required_stable_rank(c.get("model"), params, c.get_double_or("C_abs", 1.0), sr);
        json r;
        r["record"] = "condition";
        r["model"] = cond.model;
        r["sr_actual"] = cond.sr_actual;
        r["sr_required"] = cond.sr_required;
        r["ratio"] = cond.ratio;
        report.emit(r);
    }
}

void run_rip_exact(const ExperimentConfig& c, Report& report) {
    const Matrix M = read_matrix_file(c.get("matrix_in"));
    const auto r = rip_constant_exact(M, c.get_long("k"), scale_of(c, M, "1"),
                                      c.get_u64_or("cap", 1000000));
    report.emit(rip_report_json(r));
}

void run_rip_sample(const ExperimentConfig& c, Report& report) {
    const Matrix M = read_matrix_file(c.get("matrix_in"));
    const auto r = rip_constant_sampled(M, c.get_long("k"), scale_of(c, M, "1"),
                                        c.get_u64_or("supports", 100), seed_of(c));
    report.emit(rip_report_json(r));
}

void run_trial(const ExperimentConfig& c, Report& report) {
    const Matrix X = read_matrix_file(c.get("matrix_in"));
    const EnsembleSpec spec = build_ensemble(c.ensemble);
    TrialOptions opt;
    const std::string product = c.get_or("product", "plain");
    if (product == "plain") {
        opt.product = ProductKind::plain;
    } else if (product == "hadamard") {
        opt.product = ProductKind::hadamard;
    } else {
        throw ConfigError("key 'product': expected plain|hadamard, got '" + product + "'");
    }
    opt.ell = c.get_long_or("ell", 2);
    opt.d = c.get_long("d");
    opt.k = c.get_long("k");
    opt.eps_target = c.get_double("eps");
    opt.n_trials = c.get_u64_or("trials", 50);
    opt.n_supports = c.get_u64_or("supports", 200);
    opt.threads = static_cast<int>(c.get_long_or("threads", 1));
    const TrialSummary s = rip_success_probability(X, spec, opt, seed_of(c));
    for (std::size_t t = 0; t < s.eps_hats.size(); ++t) {
        json j;
        j["record"] = "trial";
        j["trial"] = t;
        j["eps_hat"] = s.eps_hats[t];
        j["success"] = s.eps_hats[t] <= s.eps_target;
        report.emit(j);
    }
    json j;
    j["record"] = "summary";
    j["trials"] = s.trials;
    j["successes"] = s.successes;
    j["eps_target"] = s.eps_target;
    j["success_fraction"] = s.success_fraction();
    j["sr_X"] = stable_rank(X);
    report.emit(j);
}

void run_tail(const ExperimentConfig& c, Report& report) {
    const Matrix X = read_matrix_file(c.get("matrix_in"));
    const EnsembleSpec spec = build_ensemble(c.ensemble);
    const Eigen::Index d = c.get_long("d");
    Vector u;
    if (c.has("u_in")) {
        const Matrix U = read_matrix_file(c.get("u_in"));
        u = U.col(0);
    } else {
        u = Vector::Zero(d);
        u(0) = 1.0;
    }
    const auto thresholds = to_double_list("thresholds", c.get("thresholds"));
    const auto tails =
        concentration_tail(X, spec, u, thresholds, c.get_u64_or("trials", 1000), seed_of(c));
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        json j;
        j["record"] = "tail";
        j["t"] = thresholds[i];
        j["tail_probability"] = tails[i];
        report.emit(j);
    }
    if (c.has("csv_out")) {
        std::ofstream csv(c.get("csv_out"));
        csv << "t,tail\n";
        char buf[80];
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", thresholds[i], tails[i]);
            csv << buf;
        }
    }
}

// Chaos sampler of the psi_2 harness: y = sum_{i != j} r_i r_j u_ij over a
// sqrt(k) x sqrt(k) grid support with uniform weights u_ij = k^{-1/2} and one
// fresh sign vector per draw; equals (S^2 - sqrt(k)) / sqrt(k) for S = sum r_i.
std::function<double(std::uint64_t)> chaos_sampler(Eigen::Index k, SeedSpec seed) {
    const auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(k))));
    if (side * side != k) throw ConfigError("chaos sampler needs a perfect-square k");
    CounterRng rng(seed);
    return [side, rng](std::uint64_t counter) {
        const std::uint64_t base = counter * static_cast<std::uint64_t>(side);
        double s = 0.0;
        for (Eigen::Index i = 0; i < side; ++i) s += rng.sign(base + i);
        return (s * s - static_cast<double>(side)) / static_cast<double>(side);
    };
}

void run_psi2(const ExperimentConfig& c, Report& report) {
    const std::string sampler_name = c.get("sampler");
    const std::uint64_t n = c.get_u64_or("samples", 100000);
    std::vector<int> moments;
    for (const double m : to_double_list("moments", c.get_or("moments", "2,4,6,8"))) {
        moments.push_back(static_cast<int>(m));
    }
    const SeedSpec seed = seed_of(c);
    std::vector<std::pair<double, double>> table;  // (k or 0, estimate)
    if (sampler_name == "chaos") {
        for (const double kd : to_double_list("chaos_k", c.get("chaos_k"))) {
            const auto k = static_cast<Eigen::Index>(kd);
            const double est = psi2_estimate(chaos_sampler(k, seed), n, moments);
            table.emplace_back(static_cast<double>(k), est);
        }
    } else {
        CounterRng rng(seed);
        std::function<double(std::uint64_t)> sampler;
        if (sampler_name == "rademacher") {
            sampler = [rng](std::uint64_t i) { return static_cast<double>(rng.sign(i)); };
        } else if (sampler_name == "gaussian") {
            sampler = [rng](std::uint64_t i) { return rng.normal(i); };
        } else if (sampler_name == "uniform_bounded") {
            sampler = [rng](std::uint64_t i) {
                return std::sqrt(3.0) * (2.0 * rng.uniform(i) - 1.0);
            };
        } else {
            throw ConfigError("key 'sampler': unknown sampler '" + sampler_name + "'");
        }
        table.emplace_back(0.0, psi2_estimate(sampler, n, moments));
    }
    for (const auto& [k, est] : table) {
        json j;
        j["record"] = "psi2";
        if (sampler_name == "chaos") j["k"] = k;
        j["sampler"] = sampler_name;
        j["samples"] = n;
        j["estimate"] = est;
        report.emit(j);
    }
    if (c.has("csv_out")) {
        std::ofstream csv(c.get("csv_out"));
        csv << "k,psi2\n";
        char buf[80];
        for (const auto& [k, est] : table) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", k, est);
            csv << buf;
        }
    }
}

void run_hadamard(const ExperimentConfig& c, Report& report) {
    const Matrix M = read_matrix_file(c.get("matrix_in"));
    const Eigen::Index ell = c.get_long("ell");
    const std::string mode = c.get_or("mode", "power");
    json j;
    j["record"] = "hadamard";
    j["ell"] = ell;
    if (mode == "power") {
        const Matrix P = hadamard_power(M, ell, c.get_u64_or("cap", std::uint64_t(1) << 20));
        const std::string out_path =
            c.get_or("matrix_out", (report.dir() / "hadamard_power.mtx").string());
        write_matrix_file(P, out_path);
        j["cols"] = P.cols();
        j["matrix_out"] = out_path;
    } else if (mode == "apply") {
        Eigen::Index d = 0, file_ell = 0;
        const auto u = read_sparse_vector(c.get("u_in"), d, file_ell);
        if (d != M.cols() || file_ell != ell) {
            throw ConfigError("sparse vector header (d, ell) does not match matrix/ell");
        }
        const Vector v = apply_hadamard(M, ell, u);
        const std::string out_path =
            c.get_or("vector_out", (report.dir() / "applied.mtx").string());
        write_matrix_file(v, out_path);
        j["nnz"] = u.size();
        j["vector_out"] = out_path;
        j["norm"] = v.norm();
    } else {
        throw ConfigError("key 'mode': expected power|apply, got '" + mode + "'");
    }
    report.emit(j);
}

void run_decomp(const ExperimentConfig& c, Report& report) {
    std::ifstream in(c.get("support_in"));
    if (!in) throw std::runtime_error("cannot open '" + c.get("support_in") + "' for reading");
    std::set<IndexPair> support;
    Eigen::Index i, jdx;
    while (in >> i >> jdx) support.emplace(i, jdx);
    std::set<Eigen::Index> I;
    for (const double v : to_double_list("I", c.get("I"))) {
        I.insert(static_cast<Eigen::Index>(v));
    }
    const SupportDecomposition dec = support_decompose(support, I);
    json j;
    j["record"] = "decomp";
    j["k"] = support.size();
    j["s"] = dec.steps();
    json us = json::array(), ws = json::array();
    for (const auto& U : dec.U_sets) {
        json set = json::array();
        for (const auto& [a, b] : U) set.push_back({a, b});
        us.push_back(set);
    }
    for (const auto& W : dec.W_sets) {
        json set = json::array();
        for (const auto& [a, b] : W) set.push_back({a, b});
        ws.push_back(set);
    }
    j["U_sets"] = us;
    j["W_sets"] = ws;
    report.emit(j);
}

void run_recover(const ExperimentConfig& c, Report& report) {
    RecoveryProblem prob;
    prob.M = read_matrix_file(c.get("matrix_in"));
    prob.y = read_matrix_file(c.get("y_in")).col(0);
    prob.delta = c.get_double_or("delta", 0.0);
    SolverOptions opt;
    opt.tol = c.get_double_or("tol", 1e-8);
    opt.max_iter = c.get_u64_or("max_iter", 50000);
    const RecoveryResult r = bpdn_solve(prob, opt);
    if (c.has("x_out")) write_matrix_file(r.x_hat, c.get("x_out"));
    json j;
    j["record"] = "recover";
    j["residual_norm"] = r.residual_norm;
    j["l1_value"] = r.l1_value;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["infeasible"] = r.infeasible;
    j["min_residual"] = r.min_residual;
    report.emit(j);
    if (!r.converged && !r.infeasible) {
        throw ConvergenceError("bpdn_solve did not converge", r.residual_norm);
    }
}

void run_sepsim(const ExperimentConfig& c, Report& report) {
    const Eigen::Index n1 = c.get_long("n1"), a = c.get_long("a"), b = c.get_long("b"),
                       cc = c.get_long("c");
    const long sparsity = c.get_long_or("sparsity", 1);
    const double delta = c.get_double_or("delta", 0.0);
    const std::uint64_t trials = c.get_u64_or("trials", 10);
    const double success_tol = c.get_double_or("success_tol", 1e-3);
    const EnsembleSpec phi_spec =
        c.ensemble.empty() ? EnsembleSpec::Gaussian() : build_ensemble(c.ensemble);
    const SeedSpec seed = seed_of(c);

    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const SeedSpec ts{seed.master_seed, seed.stream_index + t};
        const Matrix M = sample_matrix(EnsembleSpec::Gaussian(), n1, a, ts.derived(1));
        const Matrix Phi = sample_matrix(phi_spec, b, cc, ts.derived(2));
        Matrix C = Matrix::Zero(a, b);
        CounterRng rng(ts.derived(3));
        for (long s = 0; s < sparsity; ++s) {
            const auto idx = rng.bits(2 * s) % static_cast<std::uint64_t>(a * b);
            C(static_cast<Eigen::Index>(idx) / b, static_cast<Eigen::Index>(idx) % b) =
                rng.normal(s + 1);
        }
        const SourceSepSystem sys = sourcesep_build(M, C, Phi);
        const RecoveryResult r = sourcesep_recover(sys, delta);
        const double err = (r.x_hat - sys.c_vec).norm();
        const bool ok = err <= success_tol;
        if (ok) ++successes;
        json j;
        j["record"] = "sepsim_trial";
        j["trial"] = t;
        j["error"] = err;
        j["success"] = ok;
        j["build_residual"] = (sys.s_vec - sys.X_block * sys.R_block * sys.c_vec).norm();
        report.emit(j);
    }
    json j;
    j["record"] = "summary";
    j["trials"] = trials;
    j["successes"] = successes;
    j["success_fraction"] = static_cast<double>(successes) / static_cast<double>(trials);
    report.emit(j);
}

std::vector<LabeledSequence> read_dataset(const std::string& path, Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::vector<LabeledSequence> docs;
    std::set<std::string> tokens;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string label;
        ls >> label;
        LabeledSequence doc;
        if (label == "+1") {
            doc.label = 1;
        } else if (label == "-1") {
            doc.label = -1;
        } else {
            throw ParseError("expected leading +1/-1 label", lineno);
        }
        std::string tok;
        while (ls >> tok) {
            doc.tokens.push_back(tok);
            tokens.insert(tok);
        }
        if (doc.tokens.empty()) throw ParseError("document has no tokens", lineno);
        docs.push_back(std::move(doc));
    }
    vocab = Vocabulary(std::vector<std::string>(tokens.begin(), tokens.end()));
    return docs;
}

void run_disc(const ExperimentConfig& c, Report& report) {
    Vocabulary vocab;
    const auto docs = read_dataset(c.get("dataset_in"), vocab);
    const Eigen::Index L = c.get_long("L");
    Matrix V;
    if (c.has("v_in")) {
        V = read_matrix_file(c.get("v_in"));
    } else {
        const EnsembleSpec spec =
            c.ensemble.empty() ? EnsembleSpec::Rademacher() : build_ensemble(c.ensemble);
        V = sample_matrix(spec, c.get_long("p"), vocab.size(), seed_of(c));
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const DiscEmbedding e = disc_embed(docs[i].tokens, V, L, vocab);
        json j;
        j["record"] = "disc";
        j["doc"] = i;
        j["label"] = docs[i].label;
        json norms = json::array();
        for (const auto& blk : e.blocks) norms.push_back(blk.norm());
        j["block_norms"] = norms;
        if (c.has("emb_out_dir")) {
            const fs::path dir(c.get("emb_out_dir"));
            fs::create_directories(dir);
            const std::string path = (dir / ("doc" + std::to_string(i) + ".mtx")).string();
            write_matrix_file(e.concatenated(), path);
            j["emb_out"] = path;
        }
        report.emit(j);
    }
    json j;
    j["record"] = "summary";
    j["docs"] = docs.size();
    j["vocab_size"] = vocab.size();
    j["L"] = L;
    report.emit(j);
}

void run_learn(const ExperimentConfig& c, Report& report) {
    Vocabulary vocab;
    const auto docs = read_dataset(c.get("dataset_in"), vocab);
    const Eigen::Index L = c.get_long("L");
    const Eigen::Index p = c.get_long("p");
    const Eigen::Index n = c.get_long_or("n", p);
    const long m = c.get_long_or("m", n);  // number of retained directions in X

    const SeedSpec seed = seed_of(c);
    const EnsembleSpec vspec =
        c.ensemble.empty() ? EnsembleSpec::Rademacher() : build_ensemble(c.ensemble);
    const Matrix V = sample_matrix(vspec, p, vocab.size(), seed.derived(11));

    // X^(ell) = diag(m ones)/sqrt(m) embedded in n x p: stable rank m.
    Matrix X = Matrix::Zero(n, p);
    for (long i = 0; i < m && i < std::min(n, p); ++i) X(i, i) = 1.0 / std::sqrt(double(m));
    std::vector<Matrix> X_list(L, X);

    LossSpec loss;
    loss.kind = loss_kind_from_name(c.get_or("loss", "hinge"));
    loss.lipschitz = c.get_double_or("lipschitz", 1.0);
    loss.regularizer = c.get_double_or("C", 1.0);
    ErmOptions opt;
    opt.steps = c.get_u64_or("steps", 500);
    opt.rate = c.get_double_or("rate", 1.0);

    const GapResult g = compressed_learning_gap(docs, vocab, V, X_list, L, loss, seed, opt);
    json j;
    j["record"] = "learn";
    j["loss_original"] = g.loss_original;
    j["loss_compressed"] = g.loss_compressed;
    j["gap"] = g.gap;
    j["alpha"] = g.alpha;
    j["m"] = m;
    report.emit(j);
}

void run_jl(const ExperimentConfig& c, Report& report) {
    const Matrix M = read_matrix_file(c.get("matrix_in"));
    const Matrix P = read_matrix_file(c.get("points_in"));
    std::vector<Vector> points;
    points.reserve(P.cols());
    for (Eigen::Index j = 0; j < P.cols(); ++j) points.push_back(P.col(j));
    const double distortion = jl_check(M, points, seed_of(c), scale_of(c, M, "1"));
    json j;
    j["record"] = "jl";
    j["points"] = points.size();
    j["max_distortion"] = distortion;
    report.emit(j);
}

// ---- dispatch table -------------------------------------------------------

struct Subcommand {
    void (*fn)(const ExperimentConfig&, Report&);
    std::set<std::string> allowed;
    bool takes_ensemble;
};

const std::set<std::string> kCommon = {"out", "seed", "stream", "threads"};

const std::map<std::string, Subcommand>& table() {
    static const std::map<std::string, Subcommand> t = {
        {"gen", {run_gen, {"p", "d", "matrix_out"}, true}},
        {"srank", {run_srank, {"matrix_in", "model", "k", "d", "eps", "K", "tau", "beta", "ell",
                               "C_abs"}, false}},
        {"rip-exact", {run_rip_exact, {"matrix_in", "k", "scale", "cap"}, false}},
        {"rip-sample", {run_rip_sample, {"matrix_in", "k", "scale", "supports"}, false}},
        {"trial",
         {run_trial, {"matrix_in", "k", "d", "eps", "trials", "supports", "product", "ell"},
          true}},
        {"tail", {run_tail, {"matrix_in", "d", "u_in", "thresholds", "trials", "csv_out"}, true}},
        {"psi2", {run_psi2, {"sampler", "samples", "moments", "chaos_k", "csv_out"}, false}},
        {"hadamard", {run_hadamard, {"matrix_in", "ell", "mode", "u_in", "matrix_out",
                                     "vector_out", "cap"}, false}},
        {"decomp", {run_decomp, {"support_in", "I"}, false}},
        {"recover", {run_recover, {"matrix_in", "y_in", "delta", "tol", "max_iter", "x_out"},
                     false}},
        {"sepsim", {run_sepsim, {"n1", "a", "b", "c", "sparsity", "delta", "trials",
                                 "success_tol"}, true}},
        {"disc", {run_disc, {"dataset_in", "L", "p", "v_in", "emb_out_dir"}, true}},
        {"learn", {run_learn, {"dataset_in", "L", "p", "n", "m", "loss", "lipschitz", "C",
                               "steps", "rate"}, true}},
        {"jl", {run_jl, {"matrix_in", "points_in", "scale"}, false}},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, sub] : table()) out.push_back(name);
        return out;
    }();
    return names;
}

int run(const ExperimentConfig& config) {
    try {
        const auto it = table().find(config.subcommand);
        if (it == table().end()) {
            std::cerr << "error: unknown subcommand '" << config.subcommand << "'\n";
            return kUsage;
        }
        for (const auto& [key, value] : config.params) {
            if (!it->second.allowed.count(key) && !kCommon.count(key)) {
                std::cerr << "error: subcommand '" << config.subcommand
                          << "' does not take key '" << key << "'\n";
                return kUsage;
            }
        }
        if (!config.ensemble.empty() && !it->second.takes_ensemble) {
            std::cerr << "error: subcommand '" << config.subcommand
                      << "' does not take an [ensemble] block\n";
            return kUsage;
        }
        Report report(config, fs::path(config.get_or("out", ".")));
        it->second.fn(config, report);
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kIo;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kNumeric;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.find("cannot open") != std::string::npos ? kIo : kNumeric;
    }
}

}  // namespace xrip::cli
