#pragma once

#include "hglass/params.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hglass {

enum class Method { ExactTable, ExactStream, MonteCarlo };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

/// One disorder realization at one inverse temperature.
struct SampleRecord {
    ModelKind model = ModelKind::Hrem;
    int depth = 0;
    int p = 0; // 0 for HREM
    double sigma = 0.0;
    double beta = 0.0;
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;
    Method method = Method::ExactStream;
    std::uint64_t n_spins = 0;
    double log_z = 0.0;
    double mean_energy = 0.0;
    double log_z_per_spin = 0.0;
    double std_err = 0.0; // 0 for exact enumeration
    double min_energy = 0.0;
};

nlohmann::json to_json(const SampleRecord& record);
SampleRecord sample_record_from_json(const nlohmann::json& j);

/// One row of the aggregate CSV. HPS rows carry an extra trailing `p` column.
struct AggregateRow {
    ModelKind model = ModelKind::Hrem;
    int depth = 0;
    double sigma = 0.0;
    double beta = 0.0;
    std::size_t n = 0;
    double f_mean = 0.0;
    double f_stderr = 0.0;
    double s_mean = 0.0;
    double s_stderr = 0.0;
    Method method = Method::ExactStream;
    int p = 0;
};

std::string aggregate_csv_header(ModelKind model);
std::string aggregate_csv_line(const AggregateRow& row);

/// Parses an aggregate CSV written by aggregate_csv_line (either schema).
std::vector<AggregateRow> parse_aggregate_csv(std::string_view text);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

} // namespace hglass
