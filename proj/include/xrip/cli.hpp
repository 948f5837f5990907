#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace xrip::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 2 usage, 3 numeric/convergence failure, 4 I/O.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat key = value parameters plus one optional [ensemble] block.
struct ExperimentConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::map<std::string, std::string> ensemble;

    bool has(const std::string& key) const { return params.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    long get_long(const std::string& key) const;
    long get_long_or(const std::string& key, long fallback) const;
    unsigned long long get_u64_or(const std::string& key, unsigned long long fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
};

// Parses the `key = value` config format; later assignments win, so CLI
// --set overrides are applied by re-assigning.
ExperimentConfig parse_config_text(const std::string& text, const std::string& subcommand);
ExperimentConfig parse_config_file(const std::string& path, const std::string& subcommand);

// Applies `key=value` (or `ensemble.key=value`) overrides.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Validates keys for the subcommand, dispatches, writes <out>/report.jsonl
// (deterministic) and <out>/meta.json (timestamps). Returns an exit code and
// never throws.
int run(const ExperimentConfig& config);

const std::vector<std::string>& subcommand_names();

}  // namespace xrip::cli
