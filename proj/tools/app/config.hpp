#pragma once

#include "hglass/params.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hglass::app {

/// Invalid configuration value; `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& detail)
        : std::runtime_error("config error in '" + field + "': " + detail), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class RunMethod { Auto, Enumerate, Mc };

struct ExperimentConfig {
    ModelKind model = ModelKind::Hrem;
    std::vector<int> depths{1, 2, 3};
    std::vector<double> sigmas{1.0};
    std::vector<double> betas{1.0};
    int p = 3;
    std::size_t n_samples = 2000;
    std::uint64_t seed = 1;
    RunMethod method = RunMethod::Auto;
    double memory_mb = 1.0;
    double time_cap_s = 0.0;
    std::uint64_t sweeps = 20000;
    unsigned workers = 1;
    bool long_run = false;
    std::string out_dir = "hglass-out";
    std::size_t t_points = 11;
    std::size_t coupling_samples = 100000;
    std::string pair = "random";
    bool trace = false;
};

using KeyValues = std::map<std::string, std::string>;

/// Every recognised key with a one-line description, in file order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Parses "key = value" lines ('#' starts a comment).
KeyValues parse_key_values(const std::string& text);

/// Reads a key=value file, or the "config" object of a run manifest.
KeyValues load_config_file(const std::string& path);

/// Applies `kv` on top of `base`, validating every touched field.
ExperimentConfig apply(ExperimentConfig base, const KeyValues& kv);

/// Cross-field checks against the model preconditions.
void validate(const ExperimentConfig& config);

/// Canonical key=value form (round-trips through apply()).
KeyValues to_key_values(const ExperimentConfig& config);
std::string to_config_text(const ExperimentConfig& config);

ModelParams model_params(const ExperimentConfig& config, int depth, double sigma, double beta);

std::string to_string(RunMethod method);

/// "0:3:0.1" (inclusive), "0.5,1,2" or a single value.
std::vector<double> parse_real_list(const std::string& field, const std::string& text);

/// "1-4", "1:4" or "1,2,3".
std::vector<int> parse_int_list(const std::string& field, const std::string& text);

} // namespace hglass::app
