#include "hglass/params.hpp"

#include "hglass/errors.hpp"

#include <cmath>

namespace hglass {

std::string_view to_string(ModelKind kind) noexcept
{
    return kind == ModelKind::Hrem ? "HREM" : "HPS";
}

ModelKind parse_model_kind(std::string_view text)
{
    if (text == "hrem" || text == "HREM") {
        return ModelKind::Hrem;
    }
    if (text == "hps" || text == "HPS") {
        return ModelKind::Hps;
    }
    throw RangeError("model", "expected 'hrem' or 'hps', got '" + std::string(text) + "'");
}

std::uint64_t ModelParams::block_size(int level) const noexcept
{
    std::uint64_t size = 1;
    for (int l = 0; l < level; ++l) {
        size *= static_cast<std::uint64_t>(branching());
    }
    return size;
}

std::uint64_t ModelParams::block_count(int level) const noexcept
{
    return block_size(depth - level);
}

int max_depth(const ModelParams& params) noexcept
{
    // HREM block codes of the top level must fit a 64-bit local index.
    // HPS is capped at 100 sites (81 for p = 3) so per-site coupling
    // incidence lists stay small.
    if (params.kind == ModelKind::Hrem) {
        return 6;
    }
    int depth = 0;
    std::uint64_t n = 1;
    while (n * static_cast<std::uint64_t>(params.p) <= 100) {
        n *= static_cast<std::uint64_t>(params.p);
        ++depth;
    }
    return depth;
}

void validate(const ModelParams& params)
{
    if (params.kind == ModelKind::Hps && params.p < 3) {
        throw RangeError("p", "the hierarchical p-spin model requires p >= 3, got " +
                                  std::to_string(params.p));
    }
    const int min_depth = params.kind == ModelKind::Hrem ? 1 : 0;
    if (params.depth < min_depth || params.depth > max_depth(params)) {
        throw RangeError("K", "depth " + std::to_string(params.depth) + " outside [" +
                                  std::to_string(min_depth) + ", " +
                                  std::to_string(max_depth(params)) + "]");
    }
    if (!std::isfinite(params.sigma)) {
        throw DomainError("sigma must be finite");
    }
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
        throw DomainError("beta must be a finite non-negative number");
    }
}

} // namespace hglass
