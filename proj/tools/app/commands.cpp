#include "commands.hpp"

#include "output.hpp"
#include "svg.hpp"

#include "hglass/analysis.hpp"
#include "hglass/errors.hpp"
#include "hglass/hps.hpp"
#include "hglass/hrem.hpp"
#include "hglass/mc.hpp"
#include "hglass/quenched.hpp"
#include "hglass/records.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

namespace hglass::app {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
public:
    explicit Deadline(double seconds) : seconds_(seconds), start_(Clock::now()) {}

    void check(const std::string& what) const
    {
        if (seconds_ <= 0.0) {
            return;
        }
        const double used = std::chrono::duration<double>(Clock::now() - start_).count();
        if (used > seconds_) {
            throw CapacityError("time cap of " + format_number(seconds_) +
                                " s exceeded before " + what);
        }
    }

private:
    double seconds_;
    Clock::time_point start_;
};

EnumerationOptions enumeration_options(const ExperimentConfig& c)
{
    EnumerationOptions o;
    o.table_memory_bytes = static_cast<std::uint64_t>(c.memory_mb * 1024.0 * 1024.0);
    o.long_run = c.long_run;
    o.workers = c.workers;
    return o;
}

McOptions mc_options(const ExperimentConfig& c)
{
    McOptions o;
    o.sweeps = c.sweeps;
    o.workers = c.workers;
    return o;
}

void check_capacity(const ModelParams& params, const EnumerationOptions& options)
{
    if (params.kind == ModelKind::Hrem) {
        hrem_enumeration_method(params, options);
    } else {
        check_hps_capacity(params, options);
    }
}

bool use_enumeration(const ExperimentConfig& c, const ModelParams& params)
{
    if (c.method == RunMethod::Mc) {
        return false;
    }
    if (c.method == RunMethod::Enumerate) {
        check_capacity(params, enumeration_options(c));
        return true;
    }
    try {
        check_capacity(params, enumeration_options(c));
        return true;
    } catch (const CapacityError&) {
        return false;
    }
}

std::string model_tag(ModelKind k)
{
    return k == ModelKind::Hrem ? "hrem" : "hps";
}

void warn_degraded(const ExperimentConfig& c, std::ostream& err)
{
    for (double b : c.betas) {
        if (degraded_accuracy(b)) {
            err << "warning: beta " << format_number(b) << " exceeds "
                << format_number(kQuadratureBetaCap) << "; quadrature accuracy is degraded\n";
            return;
        }
    }
}

// --- quenched aggregates -------------------------------------------------

struct EntropyCurveRow {
    ModelKind model;
    int depth;
    double sigma;
    double beta;
    Estimate s;
    double bound_mean_field;
    double bound_improved;
};

struct QuenchedOutput {
    std::vector<AggregateRow> rows;
    std::vector<std::string> record_lines;
    std::vector<EntropyCurveRow> entropy;
};

std::vector<double> integration_grid(std::span<const double> betas)
{
    std::vector<double> g;
    const double top = betas.empty() ? 0.0 : betas.back();
    const auto steps = static_cast<int>(std::ceil(top / 0.05 - 1e-9));
    for (int i = 0; i <= steps; ++i) {
        g.push_back(std::round(i * 0.05 * 1e10) / 1e10);
    }
    g.insert(g.end(), betas.begin(), betas.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            g.end());
    return g;
}

void quenched_unit(const ExperimentConfig& c, int depth, double sigma, QuenchedOutput& out)
{
    const ModelParams params = model_params(c, depth, sigma, 0.0);
    const DisorderOracle base(c.seed, params);
    auto add_entropy_row = [&](double beta, const Estimate& s) {
        EntropyCurveRow e{c.model, depth, sigma, beta, s, std::nan(""), std::nan("")};
        if (sigma > 0.0) {
            const EntropyBounds b = entropy_lower_bounds(sigma, beta);
            e.bound_mean_field = b.mean_field;
            e.bound_improved = b.improved;
        }
        out.entropy.push_back(e);
    };

    if (use_enumeration(c, params)) {
        const QuenchedRun run =
            run_quenched(params, c.betas, c.n_samples, base, enumeration_options(c));
        for (std::size_t j = 0; j < c.betas.size(); ++j) {
            const Estimate f = run.free_energy(j);
            const Estimate s = run.entropy(j);
            out.rows.push_back(AggregateRow{c.model, depth, sigma, c.betas[j], c.n_samples, f.mean,
                                            f.std_err, s.mean, s.std_err, run.method(),
                                            c.model == ModelKind::Hps ? c.p : 0});
            add_entropy_row(c.betas[j], s);
        }
        for (const auto& r : run.records()) {
            out.record_lines.push_back(to_json(r).dump());
        }
        return;
    }

    const std::vector<double> grid = integration_grid(c.betas);
    const ThermoIntegration ti =
        thermo_integration_free_energy(params, grid, c.n_samples, base, mc_options(c));
    const std::vector<SampleRecord> all = mc_records(params, ti);
    for (double beta : c.betas) {
        const auto j = static_cast<std::size_t>(
            std::find_if(grid.begin(), grid.end(), [&](double g) { return std::abs(g - beta) < 1e-12; }) -
            grid.begin());
        MeanAccumulator s_acc;
        for (std::size_t i = 0; i < c.n_samples; ++i) {
            s_acc.add(beta * ti.sample_energy[i][j] + ti.sample_free_energy[i][j]);
        }
        Estimate s = s_acc.estimate();
        const Estimate f = ti.free_energy[j];
        if (c.n_samples == 1) {
            s.std_err = f.std_err;
        }
        out.rows.push_back(AggregateRow{c.model, depth, sigma, beta, c.n_samples, f.mean, f.std_err,
                                        s.mean, s.std_err, Method::MonteCarlo,
                                        c.model == ModelKind::Hps ? c.p : 0});
        add_entropy_row(beta, s);
        for (std::size_t i = 0; i < c.n_samples; ++i) {
            out.record_lines.push_back(to_json(all[j * c.n_samples + i]).dump());
        }
    }
}

QuenchedOutput run_quenched_grid(const ExperimentConfig& c)
{
    const Deadline deadline(c.time_cap_s);
    QuenchedOutput out;
    for (int k : c.depths) {
        for (double s : c.sigmas) {
            deadline.check("K=" + std::to_string(k) + ", sigma=" + format_number(s));
            quenched_unit(c, k, s, out);
        }
    }
    return out;
}

std::string aggregates_csv(ModelKind model, const std::vector<AggregateRow>& rows)
{
    std::string csv = aggregate_csv_header(model) + "\n";
    for (const auto& r : rows) {
        csv += aggregate_csv_line(r) + "\n";
    }
    return csv;
}

constexpr const char* kEntropyCurvesHeader =
    "model,K,sigma,beta,s_mean,s_stderr,bound_mean_field,bound_improved";

std::string entropy_curves_csv(const std::vector<EntropyCurveRow>& rows)
{
    std::string csv = std::string(kEntropyCurvesHeader) + "\n";
    for (const auto& e : rows) {
        csv += std::string(to_string(e.model)) + "," + std::to_string(e.depth) + "," +
               format_number(e.sigma) + "," + format_number(e.beta) + "," + format_number(e.s.mean) +
               "," + format_number(e.s.std_err) + "," + format_number(e.bound_mean_field) + "," +
               format_number(e.bound_improved) + "\n";
    }
    return csv;
}

// --- CSV reading ----------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    }

    double real(std::size_t row, const std::string& name) const
    {
        const auto c = column(name);
        if (!c || *c >= rows[row].size()) {
            return std::nan("");
        }
        const std::string& v = rows[row][*c];
        if (v == "nan" || v.empty()) {
            return std::nan("");
        }
        return std::stod(v);
    }

    std::string text(std::size_t row, const std::string& name) const
    {
        const auto c = column(name);
        return c && *c < rows[row].size() ? rows[row][*c] : std::string();
    }
};

std::optional<CsvTable> read_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("aggregates", "cannot open '" + path.string() + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// --- verification rows ---------------------------------------------------

struct VerifyRow {
    std::string check;
    std::string model;
    int depth = 0;
    double sigma = 0.0;
    double beta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double allowance = 0.0; // statistical slack granted (z * stderr)
    double slack = 0.0;     // margin left after the allowance; negative fails
    bool raw_ok = false;    // holds without any statistical allowance
    bool pass = false;
};

VerifyRow upper_row(std::string check, ModelKind model, int depth, double sigma, double beta,
                    double lhs, double rhs, double allowance)
{
    VerifyRow r{std::move(check), std::string(to_string(model)), depth, sigma, beta, lhs, rhs, allowance};
    r.slack = rhs + allowance - lhs;
    r.raw_ok = lhs <= rhs;
    r.pass = r.slack >= 0.0;
    return r;
}

VerifyRow lower_row(std::string check, ModelKind model, int depth, double sigma, double beta,
                    double lhs, double rhs, double allowance)
{
    VerifyRow r{std::move(check), std::string(to_string(model)), depth, sigma, beta, lhs, rhs, allowance};
    r.slack = lhs + allowance - rhs;
    r.raw_ok = lhs >= rhs;
    r.pass = r.slack >= 0.0;
    return r;
}

VerifyRow equal_row(std::string check, ModelKind model, int depth, double sigma, double beta,
                    double lhs, double rhs, double allowance)
{
    VerifyRow r{std::move(check), std::string(to_string(model)), depth, sigma, beta, lhs, rhs, allowance};
    r.slack = allowance - std::abs(lhs - rhs);
    r.raw_ok = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
    r.pass = r.raw_ok || r.slack >= 0.0;
    return r;
}

constexpr const char* kVerifyHeader =
    "check,model,K,sigma,beta,lhs,rhs,allowance,slack,raw_ok,verdict";

std::string verify_csv(const std::vector<VerifyRow>& rows)
{
    std::string csv = std::string(kVerifyHeader) + "\n";
    for (const auto& r : rows) {
        csv += r.check + "," + r.model + "," + std::to_string(r.depth) + "," + format_number(r.sigma) +
               "," + format_number(r.beta) + "," + format_number(r.lhs) + "," + format_number(r.rhs) +
               "," + format_number(r.allowance) + "," + format_number(r.slack) + "," +
               (r.raw_ok ? "true" : "false") + "," + (r.pass ? "PASS" : "FAIL") + "\n";
    }
    return csv;
}

using AggKey = std::tuple<ModelKind, int, double, double>;

void aggregate_rows_checks(const std::map<AggKey, AggregateRow>& agg, ModelKind model,
                           const ExperimentConfig& c, const std::vector<int>& depths,
                           std::vector<VerifyRow>& rows)
{
    for (double sigma : c.sigmas) {
        for (double beta : c.betas) {
            for (std::size_t i = 0; i < depths.size(); ++i) {
                const AggregateRow& a = agg.at({model, depths[i], sigma, beta});
                if (i > 0) {
                    const AggregateRow& prev = agg.at({model, depths[i - 1], sigma, beta});
                    rows.push_back(lower_row(model == ModelKind::Hrem ? "hrem-monotone" : "hps-monotone",
                                             model, a.depth, sigma, beta, a.f_mean, prev.f_mean,
                                             3.0 * std::hypot(a.f_stderr, prev.f_stderr)));
                }
                rows.push_back(upper_row(model == ModelKind::Hrem ? "hrem-jensen" : "hps-jensen", model,
                                         a.depth, sigma, beta, a.f_mean,
                                         jensen_upper_bound(model, sigma, beta, c.p),
                                         3.0 * a.f_stderr));
                if (model == ModelKind::Hrem && sigma > 0.0) {
                    rows.push_back(lower_row("entropy-bound", model, a.depth, sigma, beta, a.s_mean,
                                             a.f_mean - beta * entropy_slope(sigma),
                                             3.0 * a.s_stderr));
                    rows.push_back(lower_row("finite-k-lower", model, a.depth, sigma, beta, a.f_mean,
                                             finite_k_lower_bound(sigma, beta, a.depth),
                                             3.0 * a.f_stderr));
                }
            }
        }
    }
}

void interpolation_rows(const ExperimentConfig& c, int depth, double sigma, double beta,
                        std::vector<VerifyRow>& rows)
{
    const ModelParams params = model_params(c, depth, sigma, beta);
    const DisorderOracle base(c.seed, params);
    const EnumerationOptions opt = enumeration_options(c);
    std::vector<std::vector<double>> per_t;
    for (std::size_t k = 0; k < c.t_points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(c.t_points - 1);
        const QuenchedRun run = run_quenched(params, std::span(&beta, 1), c.n_samples, base, opt, std::sqrt(t));
        std::vector<double> v(c.n_samples);
        for (std::size_t i = 0; i < c.n_samples; ++i) {
            v[i] = run.log_z_per_spin(i, 0);
        }
        per_t.push_back(std::move(v));
    }
    for (std::size_t k = 1; k < per_t.size(); ++k) {
        MeanAccumulator d;
        MeanAccumulator cur;
        MeanAccumulator prev;
        for (std::size_t i = 0; i < c.n_samples; ++i) {
            d.add(per_t[k][i] - per_t[k - 1][i]);
            cur.add(per_t[k][i]);
            prev.add(per_t[k - 1][i]);
        }
        VerifyRow r = lower_row("interp-monotone-t" + format_number(static_cast<double>(k) /
                                                                    static_cast<double>(c.t_points - 1)),
                                ModelKind::Hrem, depth, sigma, beta, cur.mean(), prev.mean(),
                                3.0 * d.std_err());
        rows.push_back(r);
    }
    // t = 0 decouples the halves: compare with the depth K-1 free energy.
    const ModelParams lower = params.with_depth(depth - 1);
    const Estimate f_lower = quenched_free_energy(lower, c.n_samples,
                                                  DisorderOracle(derive_seed(c.seed, SeedPurpose::Auxiliary, 1), lower),
                                                  opt);
    MeanAccumulator t0;
    for (double v : per_t.front()) {
        t0.add(v);
    }
    const double allowance = 3.0 * std::hypot(t0.std_err(), f_lower.std_err);
    rows.push_back(equal_row("interp-endpoint-t0", ModelKind::Hrem, depth, sigma, beta, t0.mean(),
                             f_lower.mean, allowance));
    const Estimate f_full = quenched_free_energy(params, c.n_samples, base, opt);
    MeanAccumulator t1;
    for (double v : per_t.back()) {
        t1.add(v);
    }
    rows.push_back(equal_row("interp-endpoint-t1", ModelKind::Hrem, depth, sigma, beta, t1.mean(),
                             f_full.mean, 0.0));
}

std::optional<SpinConfiguration> parse_spins(const std::string& s)
{
    std::vector<int> v;
    for (char ch : s) {
        if (ch == '+') {
            v.push_back(1);
        } else if (ch == '-') {
            v.push_back(-1);
        } else {
            return std::nullopt;
        }
    }
    return SpinConfiguration::from_spins(v);
}

OverlapPair make_pair(const ExperimentConfig& c, const ModelParams& params)
{
    const std::size_t n = params.n_spins();
    PhiloxEngine rng(derive_seed(c.seed, SeedPurpose::Auxiliary, static_cast<std::uint64_t>(params.depth) + 16), 0);
    auto random_config = [&] {
        SpinConfiguration s(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() >> 63) {
                s.flip(i);
            }
        }
        return s;
    };
    if (c.pair == "random") {
        SpinConfiguration a = random_config();
        SpinConfiguration b = random_config();
        return OverlapPair(std::move(a), std::move(b));
    }
    if (c.pair == "same" || c.pair == "opposite") {
        SpinConfiguration a = random_config();
        SpinConfiguration b = a;
        if (c.pair == "opposite") {
            for (std::size_t i = 0; i < n; ++i) {
                b.flip(i);
            }
        }
        return OverlapPair(std::move(a), std::move(b));
    }
    const auto colon = c.pair.find(':');
    if (colon != std::string::npos) {
        auto a = parse_spins(c.pair.substr(0, colon));
        auto b = parse_spins(c.pair.substr(colon + 1));
        if (a && b && a->size() == n && b->size() == n) {
            return OverlapPair(std::move(*a), std::move(*b));
        }
    }
    throw ConfigError("pair", "expected random, same, opposite or two +- strings of length " +
                                  std::to_string(n) + " joined by ':'");
}

struct CovarianceRow {
    int depth;
    double sigma;
    double q;
    double exact;
    double asymptotic;
    Estimate empirical;
};

CovarianceRow covariance_row(const ExperimentConfig& c, int depth, double sigma, const OverlapPair& pair)
{
    ExperimentConfig hc = c;
    hc.model = ModelKind::Hps;
    const ModelParams params = model_params(hc, depth, sigma, 0.0);
    CovarianceRow r{depth, sigma, pair.overlap(), eta_covariance_exact(pair, params),
                    eta_covariance_asymptotic(pair, params), {}};
    r.empirical = empirical_eta_covariance(pair, params, c.coupling_samples,
                                           DisorderOracle(derive_seed(c.seed, SeedPurpose::Auxiliary, 2), params));
    return r;
}

std::string svg_name(const std::string& stem, const std::vector<std::pair<std::string, double>>& parts)
{
    std::string name = stem;
    for (const auto& [k, v] : parts) {
        name += "_" + k + format_number(v);
    }
    return name + ".svg";
}

} // namespace

ExperimentConfig command_defaults(const std::string& command)
{
    ExperimentConfig c;
    if (command == "entropy-scan") {
        c.betas = parse_real_list("beta", "0:3:0.1");
    } else if (command == "bounds") {
        c.betas = parse_real_list("beta", "0:3:0.1");
        c.depths = {3};
    } else if (command == "concentration") {
        c.depths = {3};
        c.n_samples = 10000;
    } else if (command == "interpolate") {
        c.depths = {2};
        c.n_samples = 5000;
    } else if (command == "hps-covariance") {
        c.model = ModelKind::Hps;
        c.depths = {1};
    } else if (command == "mc-run") {
        c.betas = parse_real_list("beta", "0:1:0.05");
        c.depths = {2};
        c.n_samples = 20;
        c.method = RunMethod::Mc;
    }
    return c;
}

int cmd_gen_config(CommandContext& ctx, const std::string& file)
{
    const std::string text = to_config_text(ctx.config);
    if (file.empty() || file == "-") {
        ctx.out << text;
    } else {
        atomic_write(file, text);
        ctx.out << "wrote " << file << "\n";
    }
    return kExitOk;
}

int cmd_free_energy(CommandContext& ctx, bool entropy_scan)
{
    const ExperimentConfig& c = ctx.config;
    if (entropy_scan) {
        warn_degraded(c, ctx.err);
    }
    RunWriter writer(c.out_dir, entropy_scan ? "entropy-scan" : "free-energy", c);
    const QuenchedOutput q = run_quenched_grid(c);
    const std::string agg = aggregates_csv(c.model, q.rows);
    writer.write_records("records.jsonl", q.record_lines);
    writer.write("aggregates.csv", agg);
    if (entropy_scan) {
        writer.write("entropy_curves.csv", entropy_curves_csv(q.entropy));
    }
    writer.finish();
    ctx.out << agg;
    return kExitOk;
}

int cmd_bounds(CommandContext& ctx)
{
    const ExperimentConfig& c = ctx.config;
    warn_degraded(c, ctx.err);
    RunWriter writer(c.out_dir, "bounds", c);
    const int depth = *std::max_element(c.depths.begin(), c.depths.end());
    for (double sigma : c.sigmas) {
        const BoundReport r = make_bound_report(c.model, sigma, c.betas, std::max(depth, 1), c.p);
        const std::string stem = "_" + model_tag(c.model) + "_sigma" + format_number(sigma);
        writer.write("bound_report" + stem + ".json", r.to_json().dump(2) + "\n");
        writer.write("curves" + stem + ".csv", r.curves_csv());
        ctx.out << "sigma=" << format_number(sigma) << " c=" << format_number(r.c)
                << " beta_mf=" << format_number(r.beta_mf)
                << " beta_star=" << format_number(r.beta_star.value)
                << " residual=" << format_number(r.beta_star.residual)
                << " beta_star>beta_mf=" << (r.beta_star.value > r.beta_mf ? "yes" : "NO") << "\n";
    }
    writer.finish();
    return kExitOk;
}

int cmd_beta_star(CommandContext& ctx)
{
    ctx.out << "sigma,c,beta_mf,beta_star,residual,ratio\n";
    for (double sigma : ctx.config.sigmas) {
        const RootResult r = beta_star(sigma);
        const double mf = mean_field_beta(sigma);
        ctx.out << format_number(sigma) << "," << format_number(disorder_scale(sigma)) << ","
                << format_number(mf) << "," << format_number(r.value) << ","
                << format_number(r.residual) << "," << format_number(r.value / mf) << "\n";
    }
    return kExitOk;
}

int cmd_interpolate(CommandContext& ctx)
{
    const ExperimentConfig& c = ctx.config;
    if (c.model != ModelKind::Hrem) {
        throw ConfigError("model", "the interpolation is defined for the HREM only");
    }
    if (c.n_samples < 2) {
        throw ConfigError("n", "need at least two samples");
    }
    RunWriter writer(c.out_dir, "interpolate", c);
    std::string csv = "model,K,sigma,beta,t,f_mean,f_stderr,diff_mean,diff_stderr\n";
    const Deadline deadline(c.time_cap_s);
    for (int depth : c.depths) {
        for (double sigma : c.sigmas) {
            for (double beta : c.betas) {
                deadline.check("interpolation at K=" + std::to_string(depth));
                const ModelParams params = model_params(c, depth, sigma, beta);
                const DisorderOracle base(c.seed, params);
                std::vector<double> prev;
                for (std::size_t k = 0; k < c.t_points; ++k) {
                    const double t = static_cast<double>(k) / static_cast<double>(c.t_points - 1);
                    const QuenchedRun run = run_quenched(params, std::span(&beta, 1), c.n_samples, base,
                                                         enumeration_options(c), std::sqrt(t));
                    std::vector<double> v(c.n_samples);
                    MeanAccumulator f;
                    MeanAccumulator d;
                    for (std::size_t i = 0; i < c.n_samples; ++i) {
                        v[i] = run.log_z_per_spin(i, 0);
                        f.add(v[i]);
                        if (!prev.empty()) {
                            d.add(v[i] - prev[i]);
                        }
                    }
                    csv += "HREM," + std::to_string(depth) + "," + format_number(sigma) + "," +
                           format_number(beta) + "," + format_number(t) + "," + format_number(f.mean()) +
                           "," + format_number(f.std_err()) + "," +
                           (prev.empty() ? std::string("nan") : format_number(d.mean())) + "," +
                           (prev.empty() ? std::string("nan") : format_number(d.std_err())) + "\n";
                    prev = std::move(v);
                }
            }
        }
    }
    writer.write("interpolation.csv", csv);
    writer.finish();
    ctx.out << csv;
    return kExitOk;
}

int cmd_concentration(CommandContext& ctx)
{
    const ExperimentConfig& c = ctx.config;
    if (c.model != ModelKind::Hrem) {
        throw ConfigError("model", "the concentration probe is defined for the HREM only");
    }
    RunWriter writer(c.out_dir, "concentration", c);
    std::string csv = "model,K,sigma,beta,n,threshold,fraction,fraction_stderr,bound,f_hat\n";
    const Deadline deadline(c.time_cap_s);
    for (int depth : c.depths) {
        for (double sigma : c.sigmas) {
            for (double beta : c.betas) {
                deadline.check("concentration at K=" + std::to_string(depth));
                const ModelParams params = model_params(c, depth, sigma, beta);
                const ConcentrationResult r = concentration_probe(
                    params, c.n_samples, DisorderOracle(c.seed, params), enumeration_options(c));
                csv += "HREM," + std::to_string(depth) + "," + format_number(sigma) + "," +
                       format_number(beta) + "," + std::to_string(r.n) + "," + format_number(r.threshold) +
                       "," + format_number(r.fraction) + "," + format_number(r.fraction_stderr) + "," +
                       format_number(r.bound) + "," + format_number(r.f_hat) + "\n";
            }
        }
    }
    writer.write("concentration.csv", csv);
    writer.finish();
    ctx.out << csv;
    return kExitOk;
}

int cmd_hps_covariance(CommandContext& ctx)
{
    ExperimentConfig c = ctx.config;
    c.model = ModelKind::Hps;
    RunWriter writer(c.out_dir, "hps-covariance", c);
    std::string csv =
        "model,p,K,sigma,Q,exact,asymptotic,rel_deviation,empirical,empirical_stderr\n";
    for (int depth : c.depths) {
        if (depth < 1) {
            throw ConfigError("k", "the covariance needs K >= 1");
        }
        for (double sigma : c.sigmas) {
            const ModelParams params = model_params(c, depth, sigma, 0.0);
            const OverlapPair pair = make_pair(c, params);
            const CovarianceRow r = covariance_row(c, depth, sigma, pair);
            const double rel = r.asymptotic != 0.0 ? std::abs(r.exact - r.asymptotic) / std::abs(r.asymptotic)
                                                   : std::nan("");
            csv += "HPS," + std::to_string(c.p) + "," + std::to_string(depth) + "," + format_number(sigma) +
                   "," + format_number(r.q) + "," + format_number(r.exact) + "," +
                   format_number(r.asymptotic) + "," + format_number(rel) + "," +
                   format_number(r.empirical.mean) + "," + format_number(r.empirical.std_err) + "\n";
        }
    }
    writer.write("covariance.csv", csv);
    writer.finish();
    ctx.out << csv;
    return kExitOk;
}

int cmd_mc_run(CommandContext& ctx)
{
    const ExperimentConfig& c = ctx.config;
    if (c.betas.front() != 0.0) {
        throw ConfigError("beta", "thermodynamic integration grid must start at 0");
    }
    RunWriter writer(c.out_dir, "mc-run", c);
    std::vector<AggregateRow> rows;
    std::vector<std::string> lines;
    std::string curve = "model,K,sigma,beta,e_mean,e_stderr,f_mean,f_stderr,grid_error\n";
    const Deadline deadline(c.time_cap_s);
    for (int depth : c.depths) {
        for (double sigma : c.sigmas) {
            deadline.check("mc-run at K=" + std::to_string(depth));
            const ModelParams params = model_params(c, depth, sigma, 0.0);
            const DisorderOracle base(c.seed, params);
            const ThermoIntegration ti =
                thermo_integration_free_energy(params, c.betas, c.n_samples, base, mc_options(c));
            for (const auto& r : mc_records(params, ti)) {
                lines.push_back(to_json(r).dump());
            }
            for (std::size_t j = 0; j < c.betas.size(); ++j) {
                MeanAccumulator s;
                for (std::size_t i = 0; i < c.n_samples; ++i) {
                    s.add(c.betas[j] * ti.sample_energy[i][j] + ti.sample_free_energy[i][j]);
                }
                rows.push_back(AggregateRow{c.model, depth, sigma, c.betas[j], c.n_samples,
                                            ti.free_energy[j].mean, ti.free_energy[j].std_err, s.mean(),
                                            c.n_samples > 1 ? s.std_err() : ti.free_energy[j].std_err,
                                            Method::MonteCarlo, c.model == ModelKind::Hps ? c.p : 0});
                curve += std::string(to_string(c.model)) + "," + std::to_string(depth) + "," +
                         format_number(sigma) + "," + format_number(c.betas[j]) + "," +
                         format_number(ti.energy_per_spin[j].mean) + "," +
                         format_number(ti.energy_per_spin[j].std_err) + "," +
                         format_number(ti.free_energy[j].mean) + "," +
                         format_number(ti.free_energy[j].std_err) + "," + format_number(ti.grid_error[j]) +
                         "\n";
            }
            if (c.trace) {
                McOptions opt = mc_options(c);
                opt.record_trace = true;
                const Hamiltonian h(params, sample_oracle(base, 0));
                const LadderMeasurement m =
                    run_tempering(h, c.betas, derive_seed(c.seed, SeedPurpose::ChainStream, 0), opt);
                std::string trace = "sweep";
                for (double b : c.betas) {
                    trace += ",beta" + format_number(b);
                }
                trace += "\n";
                for (std::size_t t = 0; t < m.trace.front().size(); ++t) {
                    trace += std::to_string(t + 1);
                    for (const auto& r : m.trace) {
                        trace += "," + format_number(r[t]);
                    }
                    trace += "\n";
                }
                writer.write("trace_" + model_tag(c.model) + "_K" + std::to_string(depth) + "_sigma" +
                                 format_number(sigma) + ".csv",
                             trace);
            }
        }
    }
    const std::string agg = aggregates_csv(c.model, rows);
    writer.write_records("records.jsonl", lines);
    writer.write("aggregates.csv", agg);
    writer.write("ti_curve.csv", curve);
    writer.finish();
    ctx.out << agg;
    return kExitOk;
}

int cmd_verify(CommandContext& ctx, const std::vector<std::string>& aggregate_files,
               bool only_aggregates)
{
    ExperimentConfig c = ctx.config;
    const Deadline deadline(c.time_cap_s);
    std::vector<VerifyRow> rows;
    std::map<AggKey, AggregateRow> agg;

    auto add_rows = [&](const std::vector<AggregateRow>& rs) {
        for (const auto& r : rs) {
            agg[{r.model, r.depth, r.sigma, r.beta}] = r;
        }
    };
    for (const auto& file : aggregate_files) {
        add_rows(parse_aggregate_csv(read_file(file)));
    }

    std::vector<int> hrem_depths = c.depths;
    std::sort(hrem_depths.begin(), hrem_depths.end());
    std::vector<int> hps_depths{0, 1, 2};

    // Inputs for the HREM inequalities come from the files or are computed here.
    std::vector<std::string> missing;
    auto need = [&](ModelKind model, const std::vector<int>& depths) {
        for (int k : depths) {
            for (double s : c.sigmas) {
                for (double b : c.betas) {
                    if (!agg.count({model, k, s, b})) {
                        missing.push_back("hglass free-energy --model " + model_tag(model) + " --k " +
                                          std::to_string(k) + " --sigma " + format_number(s) +
                                          " --beta " + format_number(b) + " --n " +
                                          std::to_string(c.n_samples) + " --seed " +
                                          std::to_string(c.seed) +
                                          (model == ModelKind::Hps ? " --p " + std::to_string(c.p) : ""));
                    }
                }
            }
        }
    };

    const bool have_hps = std::any_of(agg.begin(), agg.end(), [](const auto& kv) {
        return std::get<0>(kv.first) == ModelKind::Hps;
    });
    if (aggregate_files.empty()) {
        ExperimentConfig hc = c;
        hc.model = ModelKind::Hrem;
        hc.depths = hrem_depths;
        add_rows(run_quenched_grid(hc).rows);
        deadline.check("HPS runs");
        hc.model = ModelKind::Hps;
        hc.depths = hps_depths;
        hc.method = RunMethod::Enumerate;
        add_rows(run_quenched_grid(hc).rows);
    } else {
        need(ModelKind::Hrem, hrem_depths);
        if (have_hps || !only_aggregates) {
            need(ModelKind::Hps, hps_depths);
        }
        if (!missing.empty()) {
            ctx.err << "verify: missing inputs; required runs:\n";
            for (const auto& m : missing) {
                ctx.err << "  " << m << "\n";
            }
            return kExitVerifyFailed;
        }
    }

    aggregate_rows_checks(agg, ModelKind::Hrem, c, hrem_depths, rows);
    if (aggregate_files.empty() || have_hps || !only_aggregates) {
        aggregate_rows_checks(agg, ModelKind::Hps, c, hps_depths, rows);
    }

    if (!only_aggregates) {
        for (double sigma : c.sigmas) {
            for (double beta : c.betas) {
                deadline.check("interpolation checks");
                const int interp_depth = std::clamp(hrem_depths.back(), 2, 3);
                ExperimentConfig ic = c;
                ic.model = ModelKind::Hrem;
                interpolation_rows(ic, interp_depth, sigma, beta, rows);

                deadline.check("concentration checks");
                const int conc_depth = std::clamp(hrem_depths.back(), 1, 4);
                const ModelParams cp = model_params(ic, conc_depth, sigma, beta);
                const ConcentrationResult r =
                    concentration_probe(cp, std::max<std::size_t>(c.n_samples, 1000),
                                        DisorderOracle(c.seed, cp), enumeration_options(c));
                rows.push_back(upper_row("concentration", ModelKind::Hrem, conc_depth, sigma, beta,
                                         r.fraction, r.bound, 2.0 * r.fraction_stderr));
            }
            deadline.check("covariance checks");
            if (sigma > 0.0) {
                ExperimentConfig hc = c;
                hc.model = ModelKind::Hps;
                const SpinConfiguration s(hc.p);
                const CovarianceRow cov = covariance_row(hc, 1, sigma, OverlapPair(s, s));
                rows.push_back(equal_row("eta-covariance", ModelKind::Hps, 1, sigma, 0.0,
                                         cov.empirical.mean, cov.exact, 3.0 * cov.empirical.std_err));
            }
        }
    }

    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
    }
    const std::string csv = verify_csv(rows);
    RunWriter writer(c.out_dir, "verify", c);
    writer.write("verify.csv", csv);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        j.push_back({{"check", r.check},   {"model", r.model}, {"K", r.depth},
                     {"sigma", r.sigma},   {"beta", r.beta},   {"lhs", r.lhs},
                     {"rhs", r.rhs},       {"allowance", r.allowance},
                     {"slack", r.slack},   {"raw_ok", r.raw_ok},
                     {"verdict", r.pass ? "PASS" : "FAIL"}});
    }
    writer.write("verify.json", nlohmann::json{{"rows", j}, {"all_pass", all}}.dump(2) + "\n");
    writer.finish();
    ctx.out << csv;
    ctx.out << (all ? "verify: all " : "verify: FAIL among ") << rows.size() << " rows\n";
    return all ? kExitOk : kExitVerifyFailed;
}

int cmd_plot(CommandContext& ctx, const std::string& input_dir)
{
    const fs::path in = input_dir.empty() ? fs::path(ctx.config.out_dir) : fs::path(input_dir);
    const fs::path out = ctx.config.out_dir.empty() ? in : fs::path(ctx.config.out_dir);
    std::size_t written = 0;
    auto emit = [&](const std::string& name, const std::string& svg) {
        atomic_write(out / name, svg);
        ctx.out << "wrote " << (out / name).string() << "\n";
        ++written;
    };

    if (const auto t = read_csv(in / "entropy_curves.csv")) {
        std::map<std::tuple<std::string, int, double>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            groups[{t->text(i, "model"), static_cast<int>(t->real(i, "K")), t->real(i, "sigma")}].push_back(i);
        }
        for (const auto& [key, idx] : groups) {
            Series s{"entropy estimate", {}, {}, {}};
            Series mf{"mean-field bound", {}, {}, {}};
            Series im{"improved bound", {}, {}, {}};
            for (std::size_t i : idx) {
                const double b = t->real(i, "beta");
                s.x.push_back(b);
                s.y.push_back(t->real(i, "s_mean"));
                s.err.push_back(t->real(i, "s_stderr"));
                mf.x.push_back(b);
                mf.y.push_back(t->real(i, "bound_mean_field"));
                im.x.push_back(b);
                im.y.push_back(t->real(i, "bound_improved"));
            }
            const auto& [model, k, sigma] = key;
            emit(svg_name("entropy_" + model + "_K" + std::to_string(k), {{"sigma", sigma}}),
                 render_line_chart("Entropy vs beta (" + model + ", K=" + std::to_string(k) +
                                       ", sigma=" + format_number(sigma) + ")",
                                   "beta", "entropy per spin", {s, mf, im}));
        }
    }

    if (const auto t = read_csv(in / "aggregates.csv")) {
        std::map<std::tuple<std::string, double, double>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            groups[{t->text(i, "model"), t->real(i, "sigma"), t->real(i, "beta")}].push_back(i);
        }
        for (const auto& [key, idx] : groups) {
            if (idx.size() < 2) {
                continue;
            }
            const auto& [model, sigma, beta] = key;
            Series f{"free energy estimate", {}, {}, {}};
            Series j{"Jensen upper bound", {}, {}, {}};
            std::vector<std::size_t> order = idx;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return t->real(a, "K") < t->real(b, "K"); });
            const ModelKind kind = parse_model_kind(model);
            const double p = kind == ModelKind::Hps ? t->real(order.front(), "p") : 3.0;
            for (std::size_t i : order) {
                f.x.push_back(t->real(i, "K"));
                f.y.push_back(t->real(i, "f_mean"));
                f.err.push_back(t->real(i, "f_stderr"));
                j.x.push_back(t->real(i, "K"));
                j.y.push_back(sigma > 0.0 ? jensen_upper_bound(kind, sigma, beta, static_cast<int>(p))
                                          : std::nan(""));
            }
            emit(svg_name("free_energy_vs_K_" + model, {{"sigma", sigma}, {"beta", beta}}),
                 render_line_chart("Free energy vs depth (" + model + ", sigma=" + format_number(sigma) +
                                       ", beta=" + format_number(beta) + ")",
                                   "K", "free energy per spin", {f, j}));
        }
    }

    if (const auto t = read_csv(in / "concentration.csv")) {
        std::map<std::tuple<int, double>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            groups[{static_cast<int>(t->real(i, "K")), t->real(i, "sigma")}].push_back(i);
        }
        for (const auto& [key, idx] : groups) {
            const auto& [k, sigma] = key;
            Series tail{"tail fraction", {}, {}, {}};
            Series bound{"bound", {}, {}, {}};
            for (std::size_t i : idx) {
                tail.x.push_back(t->real(i, "beta"));
                tail.y.push_back(t->real(i, "fraction"));
                tail.err.push_back(t->real(i, "fraction_stderr"));
                bound.x.push_back(t->real(i, "beta"));
                bound.y.push_back(t->real(i, "bound"));
            }
            emit(svg_name("concentration_K" + std::to_string(k), {{"sigma", sigma}}),
                 render_line_chart("Concentration tail vs bound (K=" + std::to_string(k) +
                                       ", sigma=" + format_number(sigma) + ")",
                                   "beta", "probability", {tail, bound}));
        }
    }

    if (written == 0) {
        ctx.err << "warning: no plottable data in '" << in.string() << "'; nothing written\n";
    }
    return kExitOk;
}

} // namespace hglass::app
