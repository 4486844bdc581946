#include "hglass/mc.hpp"

#include "hglass/errors.hpp"
#include "hglass/parallel.hpp"
#include "hglass/quenched.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hglass {

namespace {

std::variant<HremSystem, HpsSystem> make_system(const ModelParams& params,
                                                const DisorderOracle& oracle)
{
    validate(params);
    if (params.kind == ModelKind::Hrem) {
        return HremSystem(params, oracle);
    }
    return HpsSystem(params, oracle);
}

void require_ladder(std::span<const double> betas)
{
    if (betas.empty()) {
        throw RangeError("beta", "empty inverse-temperature ladder");
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] >= 0.0) || !std::isfinite(betas[i])) {
            throw DomainError("beta must be finite and non-negative");
        }
        if (i > 0 && !(betas[i] > betas[i - 1])) {
            throw RangeError("beta", "ladder must be strictly increasing");
        }
    }
}

} // namespace

Hamiltonian::Hamiltonian(const ModelParams& params, const DisorderOracle& oracle)
    : system_(make_system(params, oracle))
{
}

const ModelParams& Hamiltonian::params() const noexcept
{
    return std::visit([](const auto& s) -> const ModelParams& { return s.params(); }, system_);
}

std::size_t Hamiltonian::n_spins() const noexcept
{
    return std::visit([](const auto& s) { return s.n_spins(); }, system_);
}

double Hamiltonian::energy(const SpinConfiguration& config) const
{
    return std::visit([&](const auto& s) { return s.energy(config); }, system_);
}

double Hamiltonian::flip_delta(const SpinConfiguration& config, std::size_t site) const
{
    return std::visit([&](const auto& s) { return s.flip_delta(config, site); }, system_);
}

ChainState make_chain(const Hamiltonian& h, double beta, PhiloxEngine rng)
{
    ChainState st{SpinConfiguration(h.n_spins()), 0.0, rng, 0, beta, 0, 0};
    for (std::size_t i = 0; i < h.n_spins(); ++i) {
        if (st.rng() >> 63) {
            st.config.flip(i);
        }
    }
    st.energy = h.energy(st.config);
    return st;
}

void metropolis_sweep(ChainState& state, const Hamiltonian& h)
{
    const std::size_t n = h.n_spins();
    for (std::size_t step = 0; step < n; ++step) {
        const auto site = static_cast<std::size_t>(
            (state.rng() >> 32) * static_cast<std::uint64_t>(n) >> 32);
        const double delta = h.flip_delta(state.config, site);
        const double u = state.rng.uniform();
        ++state.proposed;
        if (delta <= 0.0 || u < std::exp(-state.beta * delta)) {
            state.config.flip(site);
            state.energy += delta;
            ++state.accepted;
        }
    }
    ++state.sweeps;
}

void check_energy_drift(ChainState& state, const Hamiltonian& h)
{
    const double fresh = h.energy(state.config);
    const double drift = std::abs(fresh - state.energy);
    if (drift > 1e-8 * std::max(1.0, std::abs(fresh))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "energy drift after " << state.sweeps << " sweeps at beta " << state.beta
            << ": stored " << state.energy << ", recomputed " << fresh << " (config "
            << state.config.to_string() << ")";
        throw IntegrityError(msg.str());
    }
    state.energy = fresh;
}

double swap_acceptance(double beta_i, double beta_j, double energy_i, double energy_j) noexcept
{
    const double x = (beta_i - beta_j) * (energy_i - energy_j);
    return x >= 0.0 ? 1.0 : std::exp(x);
}

TemperingLadder::TemperingLadder(const Hamiltonian& h, std::vector<double> betas,
                                 std::uint64_t seed)
    : betas_(std::move(betas)),
      rng_(derive_seed(seed, SeedPurpose::Auxiliary, 0), 0)
{
    require_ladder(betas_);
    replicas_.reserve(betas_.size());
    for (std::size_t r = 0; r < betas_.size(); ++r) {
        replicas_.push_back(
            make_chain(h, betas_[r], PhiloxEngine(derive_seed(seed, SeedPurpose::ChainStream, r), 0)));
    }
    stats_.resize(betas_.size() > 1 ? betas_.size() - 1 : 0);
}

void TemperingLadder::sweep(const Hamiltonian& h, unsigned workers)
{
    parallel_for(replicas_.size(), workers,
                 [&](std::size_t r) { metropolis_sweep(replicas_[r], h); });
}

void TemperingLadder::exchange()
{
    const std::size_t first = exchanges_ % 2;
    for (std::size_t i = first; i + 1 < replicas_.size(); i += 2) {
        ChainState& a = replicas_[i];
        ChainState& b = replicas_[i + 1];
        ++stats_[i].attempts;
        const double acc = swap_acceptance(a.beta, b.beta, a.energy, b.energy);
        if (acc >= 1.0 || rng_.uniform() < acc) {
            // Configurations move between temperatures; RNG streams stay with the slot.
            std::swap(a.config, b.config);
            std::swap(a.energy, b.energy);
            ++stats_[i].accepted;
        }
    }
    ++exchanges_;
}

void TemperingLadder::check_drift(const Hamiltonian& h)
{
    for (auto& r : replicas_) {
        check_energy_drift(r, h);
    }
}

LadderMeasurement run_tempering(const Hamiltonian& h, std::span<const double> betas,
                                std::uint64_t seed, const McOptions& options)
{
    if (options.sweeps < 2 * options.bins || options.bins < 2) {
        throw RangeError("sweeps", "need at least two sweeps per jackknife bin");
    }
    if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0)) {
        throw RangeError("burn_in", "burn-in fraction must lie in [0, 1)");
    }
    TemperingLadder ladder(h, std::vector<double>(betas.begin(), betas.end()), seed);
    const auto burn = static_cast<std::uint64_t>(
        std::floor(options.burn_in_fraction * static_cast<double>(options.sweeps)));
    const std::uint64_t kept = options.sweeps - burn;
    if (kept < 2 * options.bins) {
        throw RangeError("sweeps", "too few sweeps left after burn-in");
    }

    const std::size_t n_rep = ladder.size();
    std::vector<std::vector<double>> series(n_rep);
    for (auto& s : series) {
        s.reserve(kept);
    }
    LadderMeasurement out;
    if (options.record_trace) {
        out.trace.assign(n_rep, {});
    }

    for (std::uint64_t t = 1; t <= options.sweeps; ++t) {
        ladder.sweep(h, options.workers);
        ladder.exchange();
        if (options.checkpoint_interval > 0 && t % options.checkpoint_interval == 0) {
            ladder.check_drift(h);
        }
        for (std::size_t r = 0; r < n_rep; ++r) {
            const double e = ladder.replica(r).energy;
            if (t > burn) {
                series[r].push_back(e);
            }
            if (options.record_trace) {
                out.trace[r].push_back(e);
            }
        }
    }
    ladder.check_drift(h);

    out.betas.assign(betas.begin(), betas.end());
    for (std::size_t r = 0; r < n_rep; ++r) {
        out.mean_energy.push_back(jackknife_mean(series[r], options.bins));
    }
    for (const auto& s : ladder.swap_stats()) {
        out.swap_rates.push_back(s.rate());
    }
    return out;
}

namespace {

// Trapezoid on the full grid and on every other point, up to each index.
void integrate_curve(std::span<const double> grid, std::span<const double> y,
                     std::span<const double> y_err, std::vector<double>& integral,
                     std::vector<double>& integral_err, std::vector<double>& grid_error)
{
    const std::size_t m = grid.size();
    integral.assign(m, 0.0);
    integral_err.assign(m, 0.0);
    grid_error.assign(m, 0.0);
    double var = 0.0;
    std::vector<double> weight(m, 0.0);
    double coarse = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
        const double h = grid[j] - grid[j - 1];
        integral[j] = integral[j - 1] + 0.5 * h * (y[j] + y[j - 1]);
        weight[j - 1] += 0.5 * h;
        weight[j] += 0.5 * h;
        var = 0.0;
        for (std::size_t k = 0; k <= j; ++k) {
            const double w = k == j ? 0.5 * h : weight[k];
            var += w * w * y_err[k] * y_err[k];
        }
        integral_err[j] = std::sqrt(var);
        if (j % 2 == 0) {
            coarse += 0.5 * (grid[j] - grid[j - 2]) * (y[j] + y[j - 2]);
            grid_error[j] = std::abs(integral[j] - coarse) / 3.0;
        } else {
            const double partial = coarse + 0.5 * h * (y[j] + y[j - 1]);
            grid_error[j] = std::abs(integral[j] - partial) / 3.0;
        }
    }
}

} // namespace

ThermoIntegration thermo_integration_free_energy(const ModelParams& params,
                                                 std::span<const double> grid,
                                                 std::size_t n_samples,
                                                 const DisorderOracle& base,
                                                 const McOptions& options)
{
    if (grid.empty() || grid.front() != 0.0) {
        throw RangeError("beta_grid", "thermodynamic integration grid must start at beta = 0");
    }
    require_ladder(grid);
    if (n_samples < 1) {
        throw RangeError("n", "need at least one disorder sample");
    }
    validate(params);

    const std::size_t m = grid.size();
    const auto n_spins = static_cast<double>(params.n_spins());
    ThermoIntegration out;
    out.betas.assign(grid.begin(), grid.end());
    out.seeds.resize(n_samples);
    out.sample_energy.assign(n_samples, std::vector<double>(m));
    out.sample_free_energy.assign(n_samples, std::vector<double>(m));
    out.sample_free_energy_err.assign(n_samples, std::vector<double>(m));

    McOptions inner = options;
    unsigned outer = 1;
    if (n_samples > 1) {
        outer = options.workers;
        inner.workers = 1;
    }
    std::vector<std::vector<double>> sample_grid_error(n_samples);

    parallel_for(n_samples, outer, [&](std::size_t i) {
        const DisorderOracle oracle = sample_oracle(base, i);
        out.seeds[i] = oracle.seed();
        const Hamiltonian h(params, oracle);
        const LadderMeasurement lm =
            run_tempering(h, grid, derive_seed(base.seed(), SeedPurpose::ChainStream, i), inner);
        std::vector<double> e(m);
        std::vector<double> e_err(m);
        for (std::size_t j = 0; j < m; ++j) {
            e[j] = lm.mean_energy[j].mean / n_spins;
            e_err[j] = lm.mean_energy[j].std_err / n_spins;
        }
        std::vector<double> integral;
        std::vector<double> integral_err;
        integrate_curve(grid, e, e_err, integral, integral_err, sample_grid_error[i]);
        for (std::size_t j = 0; j < m; ++j) {
            out.sample_energy[i][j] = e[j];
            out.sample_free_energy[i][j] = std::numbers::ln2 - integral[j];
            out.sample_free_energy_err[i][j] = integral_err[j];
        }
        out.sample_free_energy[i][0] = std::numbers::ln2;
    });

    for (std::size_t j = 0; j < m; ++j) {
        MeanAccumulator e_acc;
        MeanAccumulator f_acc;
        MeanAccumulator g_acc;
        double chain_var = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            e_acc.add(out.sample_energy[i][j]);
            f_acc.add(out.sample_free_energy[i][j]);
            g_acc.add(sample_grid_error[i][j]);
            chain_var += out.sample_free_energy_err[i][j] * out.sample_free_energy_err[i][j];
        }
        Estimate f = f_acc.estimate();
        if (n_samples == 1) {
            f.std_err = std::sqrt(chain_var);
        }
        out.energy_per_spin.push_back(e_acc.estimate());
        out.free_energy.push_back(f);
        out.grid_error.push_back(g_acc.mean());
    }
    return out;
}

std::vector<SampleRecord> mc_records(const ModelParams& params, const ThermoIntegration& run)
{
    std::vector<SampleRecord> out;
    const auto n = static_cast<double>(params.n_spins());
    for (std::size_t j = 0; j < run.betas.size(); ++j) {
        for (std::size_t i = 0; i < run.seeds.size(); ++i) {
            SampleRecord r;
            r.model = params.kind;
            r.depth = params.depth;
            r.p = params.kind == ModelKind::Hps ? params.p : 0;
            r.sigma = params.sigma;
            r.beta = run.betas[j];
            r.sample_index = i;
            r.seed = run.seeds[i];
            r.method = Method::MonteCarlo;
            r.n_spins = params.n_spins();
            r.log_z_per_spin = run.sample_free_energy[i][j];
            r.log_z = r.log_z_per_spin * n;
            r.mean_energy = run.sample_energy[i][j] * n;
            r.std_err = run.sample_free_energy_err[i][j];
            r.min_energy = std::nan("");
            out.push_back(r);
        }
    }
    return out;
}

std::vector<double> geometric_ladder(double beta_min, double beta_max, std::size_t count)
{
    if (!(beta_min > 0.0) || !(beta_max > beta_min) || !std::isfinite(beta_max)) {
        throw RangeError("beta", "geometric ladder needs 0 < beta_min < beta_max");
    }
    if (count < 2) {
        throw RangeError("replicas", "geometric ladder needs at least two points");
    }
    std::vector<double> out(count);
    const double ratio = std::pow(beta_max / beta_min, 1.0 / static_cast<double>(count - 1));
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = beta_min * std::pow(ratio, static_cast<double>(i));
    }
    out.back() = beta_max;
    return out;
}

} // namespace hglass
