#include "hglass/records.hpp"

#include "hglass/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hglass {

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::ExactTable:
        return "exact-table";
    case Method::ExactStream:
        return "exact-stream";
    case Method::MonteCarlo:
        return "mc";
    }
    return "unknown";
}

Method parse_method(std::string_view text)
{
    if (text == "exact-table") {
        return Method::ExactTable;
    }
    if (text == "exact-stream") {
        return Method::ExactStream;
    }
    if (text == "mc") {
        return Method::MonteCarlo;
    }
    throw RangeError("method", "unknown method tag '" + std::string(text) + "'");
}

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

nlohmann::json to_json(const SampleRecord& r)
{
    nlohmann::json j;
    j["model"] = std::string(to_string(r.model));
    j["K"] = r.depth;
    if (r.model == ModelKind::Hps) {
        j["p"] = r.p;
    }
    j["sigma"] = r.sigma;
    j["beta"] = r.beta;
    j["sample"] = r.sample_index;
    j["seed"] = r.seed;
    j["method"] = std::string(to_string(r.method));
    j["n_spins"] = r.n_spins;
    j["log_z"] = r.log_z;
    j["log_z_per_spin"] = r.log_z_per_spin;
    j["mean_energy"] = r.mean_energy;
    if (std::isnan(r.min_energy)) {
        j["min_energy"] = nullptr;
    } else {
        j["min_energy"] = r.min_energy;
    }
    j["stderr"] = r.std_err;
    return j;
}

SampleRecord sample_record_from_json(const nlohmann::json& j)
{
    SampleRecord r;
    r.model = parse_model_kind(j.at("model").get<std::string>());
    r.depth = j.at("K").get<int>();
    r.p = j.value("p", 0);
    r.sigma = j.at("sigma").get<double>();
    r.beta = j.at("beta").get<double>();
    r.sample_index = j.at("sample").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.n_spins = j.at("n_spins").get<std::uint64_t>();
    r.log_z = j.at("log_z").get<double>();
    r.log_z_per_spin = j.at("log_z_per_spin").get<double>();
    r.mean_energy = j.at("mean_energy").get<double>();
    const auto min_it = j.find("min_energy");
    r.min_energy = (min_it == j.end() || min_it->is_null()) ? std::nan("")
                                                             : min_it->get<double>();
    r.std_err = j.at("stderr").get<double>();
    return r;
}

std::string aggregate_csv_header(ModelKind model)
{
    std::string header = "model,K,sigma,beta,n,f_mean,f_stderr,s_mean,s_stderr,method";
    if (model == ModelKind::Hps) {
        header += ",p";
    }
    return header;
}

std::string aggregate_csv_line(const AggregateRow& row)
{
    std::string line;
    line += to_string(row.model);
    line += ',' + std::to_string(row.depth);
    line += ',' + format_number(row.sigma);
    line += ',' + format_number(row.beta);
    line += ',' + std::to_string(row.n);
    line += ',' + format_number(row.f_mean);
    line += ',' + format_number(row.f_stderr);
    line += ',' + format_number(row.s_mean);
    line += ',' + format_number(row.s_stderr);
    line += ',';
    line += to_string(row.method);
    if (row.model == ModelKind::Hps) {
        line += ',' + std::to_string(row.p);
    }
    return line;
}

namespace {

double parse_double(const std::string& field, const std::string& name)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) {
            throw std::invalid_argument(field);
        }
        return v;
    } catch (const std::exception&) {
        throw RangeError(name, "not a number: '" + field + "'");
    }
}

} // namespace

std::vector<AggregateRow> parse_aggregate_csv(std::string_view text)
{
    std::vector<AggregateRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            header = false;
            if (line.rfind("model,", 0) == 0) {
                continue;
            }
        }
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 10 && f.size() != 11) {
            throw DimensionError("aggregate CSV row has " + std::to_string(f.size()) +
                                 " columns: " + line);
        }
        AggregateRow row;
        row.model = parse_model_kind(f[0]);
        row.depth = static_cast<int>(parse_double(f[1], "K"));
        row.sigma = parse_double(f[2], "sigma");
        row.beta = parse_double(f[3], "beta");
        row.n = static_cast<std::size_t>(parse_double(f[4], "n"));
        row.f_mean = parse_double(f[5], "f_mean");
        row.f_stderr = parse_double(f[6], "f_stderr");
        row.s_mean = parse_double(f[7], "s_mean");
        row.s_stderr = parse_double(f[8], "s_stderr");
        row.method = parse_method(f[9]);
        row.p = f.size() == 11 ? static_cast<int>(parse_double(f[10], "p")) : 0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace hglass
