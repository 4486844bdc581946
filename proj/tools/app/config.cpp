#include "config.hpp"

#include "hglass/errors.hpp"
#include "hglass/records.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hglass::app {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

double parse_real(const std::string& field, const std::string& text)
{
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw ConfigError(field, "'" + text + "' is not a finite number");
    }
    return v;
}

template <class Int>
Int parse_integer(const std::string& field, const std::string& text)
{
    Int v{};
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
        throw ConfigError(field, "'" + text + "' is not a valid integer");
    }
    return v;
}

bool parse_bool(const std::string& field, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(field, "'" + text + "' is not a boolean");
}

double snap(double x)
{
    return std::round(x * 1e10) / 1e10;
}

template <class T>
std::string join(const std::vector<T>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            out += ',';
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_number(xs[i]);
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

} // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys()
{
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"model", "hrem or hps"},
        {"k", "hierarchy depth K: single value, list 1,2,3 or range 1-4"},
        {"sigma", "decay exponent(s), list or range start:stop:step"},
        {"beta", "inverse temperature(s), list or range start:stop:step"},
        {"p", "interaction order of the HPS (>= 3)"},
        {"n", "number of disorder samples"},
        {"seed", "master seed; every random stream is derived from it"},
        {"method", "auto, enumerate or mc"},
        {"memory_mb", "memory budget for enumeration tables, MiB"},
        {"time_cap_s", "wall-clock cap in seconds, 0 for none"},
        {"sweeps", "Monte Carlo sweeps per replica"},
        {"workers", "worker threads (outputs do not depend on it)"},
        {"long_run", "allow enumeration of HPS systems above nine spins"},
        {"out", "output directory"},
        {"t_points", "points on the interpolation grid t in [0, 1]"},
        {"coupling_samples", "coupling realizations for covariance checks"},
        {"pair", "covariance pair: random, same, opposite or two +- strings a:b"},
        {"trace", "write per-sweep energy traces for mc-run"},
    };
    return keys;
}

std::string to_string(RunMethod method)
{
    switch (method) {
    case RunMethod::Auto:
        return "auto";
    case RunMethod::Enumerate:
        return "enumerate";
    case RunMethod::Mc:
        return "mc";
    }
    return "auto";
}

std::vector<double> parse_real_list(const std::string& field, const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty()) {
        throw ConfigError(field, "empty value");
    }
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) {
            throw ConfigError(field, "range must be start:stop:step");
        }
        const double a = parse_real(field, parts[0]);
        const double b = parse_real(field, parts[1]);
        const double h = parse_real(field, parts[2]);
        if (!(h > 0.0) || b < a) {
            throw ConfigError(field, "range needs step > 0 and stop >= start");
        }
        const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
        if (count > 100000) {
            throw ConfigError(field, "range has too many points");
        }
        for (long i = 0; i <= count; ++i) {
            out.push_back(snap(a + static_cast<double>(i) * h));
        }
        return out;
    }
    for (const auto& part : split(t, ',')) {
        out.push_back(parse_real(field, part));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text)
{
    const std::string t = trim(text);
    std::vector<int> out;
    const auto dash = t.find_first_of("-:", 1);
    if (dash != std::string::npos && t.find(',') == std::string::npos) {
        const int a = parse_integer<int>(field, trim(t.substr(0, dash)));
        const int b = parse_integer<int>(field, trim(t.substr(dash + 1)));
        if (b < a) {
            throw ConfigError(field, "empty range");
        }
        for (int k = a; k <= b; ++k) {
            out.push_back(k);
        }
        return out;
    }
    for (const auto& part : split(t, ',')) {
        out.push_back(parse_integer<int>(field, part));
    }
    return out;
}

KeyValues parse_key_values(const std::string& text)
{
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.contains("config") || !j["config"].is_object()) {
            throw ConfigError("config", "'" + path + "' is not a run manifest");
        }
        KeyValues kv;
        for (const auto& [k, v] : j["config"].items()) {
            kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        return kv;
    }
    return parse_key_values(text);
}

ExperimentConfig apply(ExperimentConfig c, const KeyValues& kv)
{
    for (const auto& [key, value] : kv) {
        if (key == "model") {
            try {
                c.model = parse_model_kind(value);
            } catch (const std::exception&) {
                throw ConfigError(key, "'" + value + "' is not hrem or hps");
            }
        } else if (key == "k") {
            c.depths = parse_int_list(key, value);
        } else if (key == "sigma") {
            c.sigmas = parse_real_list(key, value);
        } else if (key == "beta") {
            c.betas = parse_real_list(key, value);
        } else if (key == "p") {
            c.p = parse_integer<int>(key, value);
        } else if (key == "n") {
            c.n_samples = parse_integer<std::size_t>(key, value);
        } else if (key == "seed") {
            c.seed = parse_integer<std::uint64_t>(key, value);
        } else if (key == "method") {
            if (value == "auto") {
                c.method = RunMethod::Auto;
            } else if (value == "enumerate") {
                c.method = RunMethod::Enumerate;
            } else if (value == "mc") {
                c.method = RunMethod::Mc;
            } else {
                throw ConfigError(key, "'" + value + "' is not auto, enumerate or mc");
            }
        } else if (key == "memory_mb") {
            c.memory_mb = parse_real(key, value);
        } else if (key == "time_cap_s") {
            c.time_cap_s = parse_real(key, value);
        } else if (key == "sweeps") {
            c.sweeps = parse_integer<std::uint64_t>(key, value);
        } else if (key == "workers") {
            c.workers = parse_integer<unsigned>(key, value);
        } else if (key == "long_run") {
            c.long_run = parse_bool(key, value);
        } else if (key == "out") {
            c.out_dir = value;
        } else if (key == "t_points") {
            c.t_points = parse_integer<std::size_t>(key, value);
        } else if (key == "coupling_samples") {
            c.coupling_samples = parse_integer<std::size_t>(key, value);
        } else if (key == "pair") {
            c.pair = value;
        } else if (key == "trace") {
            c.trace = parse_bool(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    return c;
}

void validate(const ExperimentConfig& c)
{
    if (c.depths.empty()) {
        throw ConfigError("k", "no depth given");
    }
    if (c.sigmas.empty()) {
        throw ConfigError("sigma", "no sigma given");
    }
    if (c.betas.empty()) {
        throw ConfigError("beta", "no beta given");
    }
    for (double b : c.betas) {
        if (b < 0.0) {
            throw ConfigError("beta", "inverse temperatures must be non-negative");
        }
    }
    if (!std::is_sorted(c.betas.begin(), c.betas.end()) ||
        std::adjacent_find(c.betas.begin(), c.betas.end()) != c.betas.end()) {
        throw ConfigError("beta", "beta grid must be strictly increasing");
    }
    if (c.n_samples < 1) {
        throw ConfigError("n", "need at least one sample");
    }
    if (c.workers < 1 || c.workers > 1024) {
        throw ConfigError("workers", "must lie in [1, 1024]");
    }
    if (!(c.memory_mb > 0.0)) {
        throw ConfigError("memory_mb", "must be positive");
    }
    if (c.time_cap_s < 0.0) {
        throw ConfigError("time_cap_s", "must be non-negative");
    }
    if (c.t_points < 2) {
        throw ConfigError("t_points", "need at least two grid points");
    }
    if (c.model == ModelKind::Hps && c.p < 3) {
        throw ConfigError("p", "HPS needs p >= 3");
    }
    for (int k : c.depths) {
        for (double s : c.sigmas) {
            try {
                hglass::validate(model_params(c, k, s, 0.0));
            } catch (const RangeError& e) {
                throw ConfigError(e.field() == "K" ? "k" : e.field(), e.what());
            } catch (const std::exception& e) {
                throw ConfigError("sigma", e.what());
            }
        }
    }
}

KeyValues to_key_values(const ExperimentConfig& c)
{
    KeyValues kv;
    kv["model"] = c.model == ModelKind::Hrem ? "hrem" : "hps";
    kv["k"] = join(c.depths);
    kv["sigma"] = join(c.sigmas);
    kv["beta"] = join(c.betas);
    kv["p"] = std::to_string(c.p);
    kv["n"] = std::to_string(c.n_samples);
    kv["seed"] = std::to_string(c.seed);
    kv["method"] = to_string(c.method);
    kv["memory_mb"] = format_number(c.memory_mb);
    kv["time_cap_s"] = format_number(c.time_cap_s);
    kv["sweeps"] = std::to_string(c.sweeps);
    kv["workers"] = std::to_string(c.workers);
    kv["long_run"] = c.long_run ? "true" : "false";
    kv["out"] = c.out_dir;
    kv["t_points"] = std::to_string(c.t_points);
    kv["coupling_samples"] = std::to_string(c.coupling_samples);
    kv["pair"] = c.pair;
    kv["trace"] = c.trace ? "true" : "false";
    return kv;
}

std::string to_config_text(const ExperimentConfig& c)
{
    const KeyValues kv = to_key_values(c);
    std::string out = "# hglass experiment configuration\n";
    for (const auto& [key, help] : config_keys()) {
        out += "\n# " + help + "\n" + key + " = " + kv.at(key) + "\n";
    }
    return out;
}

ModelParams model_params(const ExperimentConfig& c, int depth, double sigma, double beta)
{
    return ModelParams{c.model, depth, sigma, c.p, beta};
}

} // namespace hglass::app
