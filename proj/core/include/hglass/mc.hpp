#pragma once

#include "hglass/disorder.hpp"
#include "hglass/hps.hpp"
#include "hglass/hrem.hpp"
#include "hglass/params.hpp"
#include "hglass/philox.hpp"
#include "hglass/records.hpp"
#include "hglass/spins.hpp"
#include "hglass/stats.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace hglass {

/// Either model bound to one disorder realization, behind one interface.
class Hamiltonian {
public:
    Hamiltonian(const ModelParams& params, const DisorderOracle& oracle);

    const ModelParams& params() const noexcept;
    std::size_t n_spins() const noexcept;
    double energy(const SpinConfiguration& config) const;
    double flip_delta(const SpinConfiguration& config, std::size_t site) const;

private:
    std::variant<HremSystem, HpsSystem> system_;
};

struct ChainState {
    SpinConfiguration config;
    double energy = 0.0;
    PhiloxEngine rng;
    std::uint64_t sweeps = 0;
    double beta = 0.0;
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;

    bool operator==(const ChainState&) const = default;
};

/// Chain started from a uniformly random configuration drawn from `rng`.
ChainState make_chain(const Hamiltonian& h, double beta, PhiloxEngine rng);

/// N single-spin-flip proposals at uniformly random sites, each accepted with
/// probability min(1, exp(-beta dH)).
void metropolis_sweep(ChainState& state, const Hamiltonian& h);

/// Recomputes the energy, throws IntegrityError if the stored value has drifted
/// by more than 1e-8 relative, and otherwise resynchronizes it.
void check_energy_drift(ChainState& state, const Hamiltonian& h);

/// min(1, exp((beta_i - beta_j)(E_i - E_j))).
double swap_acceptance(double beta_i, double beta_j, double energy_i, double energy_j) noexcept;

struct SwapStats {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;

    double rate() const noexcept
    {
        return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
    }
};

/// Replicas at strictly increasing inverse temperatures. Replica r draws from
/// its own stream derived from the master seed; exchanges use another.
class TemperingLadder {
public:
    TemperingLadder(const Hamiltonian& h, std::vector<double> betas, std::uint64_t seed);

    std::span<const double> betas() const noexcept { return betas_; }
    std::size_t size() const noexcept { return replicas_.size(); }
    const ChainState& replica(std::size_t r) const noexcept { return replicas_[r]; }
    ChainState& replica(std::size_t r) noexcept { return replicas_[r]; }
    std::span<const SwapStats> swap_stats() const noexcept { return stats_; }

    /// One Metropolis sweep of every replica, spread over `workers` threads.
    void sweep(const Hamiltonian& h, unsigned workers = 1);

    /// Attempts swaps on alternately the even and odd adjacent pairs.
    void exchange();

    void check_drift(const Hamiltonian& h);

private:
    std::vector<double> betas_;
    std::vector<ChainState> replicas_;
    std::vector<SwapStats> stats_;
    PhiloxEngine rng_;
    std::uint64_t exchanges_ = 0;
};

struct McOptions {
    std::uint64_t sweeps = 20000;
    double burn_in_fraction = 0.2;
    std::size_t bins = 16;
    std::uint64_t checkpoint_interval = 1000;
    unsigned workers = 1;
    bool record_trace = false;
};

struct LadderMeasurement {
    std::vector<double> betas;
    std::vector<Estimate> mean_energy;          // <H> per replica, jackknife error
    std::vector<double> swap_rates;             // per adjacent pair
    std::vector<std::vector<double>> trace;     // [replica][sweep] energies, if recorded
};

LadderMeasurement run_tempering(const Hamiltonian& h, std::span<const double> betas,
                                std::uint64_t seed, const McOptions& options = {});

struct ThermoIntegration {
    std::vector<double> betas;
    std::vector<Estimate> energy_per_spin;  // disorder mean of <H>/N
    std::vector<Estimate> free_energy;      // log 2 - int_0^beta E<H>/N
    std::vector<double> grid_error;         // |T_h - T_2h| / 3 at each grid point
    std::vector<std::uint64_t> seeds;       // disorder seed of each sample
    // Per-sample curves [sample][grid point] and their chain error bars.
    std::vector<std::vector<double>> sample_energy;
    std::vector<std::vector<double>> sample_free_energy;
    std::vector<std::vector<double>> sample_free_energy_err;
};

/// Free-energy curve over `grid` (which must start at 0) by parallel tempering
/// on the grid itself and trapezoidal integration, averaged over disorder
/// samples derived exactly as in the enumeration path.
ThermoIntegration thermo_integration_free_energy(const ModelParams& params,
                                                 std::span<const double> grid,
                                                 std::size_t n_samples,
                                                 const DisorderOracle& base,
                                                 const McOptions& options = {});

/// SampleRecords with method tag "mc" for the grid points of one run.
std::vector<SampleRecord> mc_records(const ModelParams& params, const ThermoIntegration& run);

/// Geometric ladder of `count` values between beta_min > 0 and beta_max.
std::vector<double> geometric_ladder(double beta_min, double beta_max, std::size_t count);

} // namespace hglass
