#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hglass {

enum class ModelKind { Hrem, Hps };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

/// Parameters shared by both hierarchical models.
///
/// `depth` is the number of hierarchical levels above single spins, so the
/// HREM has 2^depth spins and the HPS p^depth spins. Level 0 always denotes
/// single spins.
struct ModelParams {
    ModelKind kind = ModelKind::Hrem;
    int depth = 1;
    double sigma = 1.0;
    int p = 3;
    double beta = 1.0;

    int branching() const noexcept { return kind == ModelKind::Hrem ? 2 : p; }

    // Number of spins in a block at `level` (level 0 = one spin).
    std::uint64_t block_size(int level) const noexcept;

    // Number of blocks at `level`.
    std::uint64_t block_count(int level) const noexcept;

    std::uint64_t n_spins() const noexcept { return block_size(depth); }

    ModelParams with_beta(double b) const
    {
        ModelParams out = *this;
        out.beta = b;
        return out;
    }

    ModelParams with_depth(int k) const
    {
        ModelParams out = *this;
        out.depth = k;
        return out;
    }
};

// Throws DomainError/RangeError for parameters no model operation accepts.
// The thermodynamic-limit conditions (sigma > 0, sigma > 1/2) are not enforced
// here; finite-size computations are well defined for any real sigma.
void validate(const ModelParams& params);

// Largest depth whose spin count fits the 64-bit block-code layout.
int max_depth(const ModelParams& params) noexcept;

} // namespace hglass
