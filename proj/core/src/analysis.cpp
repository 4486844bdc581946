#include "hglass/analysis.hpp"

#include "hglass/errors.hpp"
#include "hglass/records.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hglass {

namespace {

void require_sigma(double sigma)
{
    if (!(sigma > 0.0) || std::isnan(sigma)) {
        throw DomainError("sigma must be positive");
    }
}

void require_beta(double beta)
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be finite and non-negative");
    }
}

} // namespace

bool degraded_accuracy(double beta) noexcept
{
    return beta > kQuadratureBetaCap;
}

double disorder_scale(double sigma)
{
    require_sigma(sigma);
    // 2^sigma / (2^sigma - 1) = 1 / (1 - 2^-sigma); expm1 keeps small sigma exact.
    return std::sqrt(-1.0 / std::expm1(-sigma * std::numbers::ln2));
}

double phi(double sigma, double beta, int panel_order)
{
    require_beta(beta);
    const double c = disorder_scale(sigma);
    return log_cosh_expectation(beta * c / std::numbers::sqrt2, panel_order);
}

double phi_derivative(double sigma, double beta, int panel_order)
{
    require_beta(beta);
    const double k = disorder_scale(sigma) / std::numbers::sqrt2;
    return k * log_cosh_expectation_derivative(beta * k, panel_order);
}

double phi_gauss_hermite(double sigma, double beta, int n)
{
    require_beta(beta);
    const double a = beta * disorder_scale(sigma);
    const QuadratureRule rule = QuadratureRule::gauss_hermite(n, 2);
    return rule.gaussian_expectation([a](double x, double y) {
        const double u = -a * x;
        const double v = -a * y;
        const double m = std::max(u, v);
        return m + std::log1p(std::exp(std::min(u, v) - m));
    });
}

double mean_field_beta(double sigma)
{
    return std::sqrt(0.5 * std::numbers::ln2) / disorder_scale(sigma);
}

double entropy_slope(double sigma)
{
    return disorder_scale(sigma) * std::sqrt(2.0 * std::numbers::ln2);
}

RootResult beta_star(double sigma)
{
    const double slope = entropy_slope(sigma);
    auto g = [&](double b) { return phi(sigma, b) - b * slope; };

    RootResult out;
    double lo = mean_field_beta(sigma);
    double hi = 2.0 * lo;
    double g_lo = g(lo);
    double g_hi = g(hi);
    while (g_hi > 0.0) {
        if (out.doublings == 60) {
            throw IntegrityError("beta* bracket failed: no sign change after 60 doublings");
        }
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = g(hi);
        ++out.doublings;
    }
    if (!(g_lo > 0.0)) {
        throw IntegrityError("beta* bracket failed: phi - beta c sqrt(2 log 2) <= 0 at the "
                             "mean-field point");
    }
    while (hi - lo >= 1e-10 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if (g_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++out.iterations;
        if (out.iterations > 400) {
            break;
        }
    }
    const double root = 0.5 * (lo + hi);
    out.value = root;
    out.residual = std::abs(g(root));
    return out;
}

EntropyBounds entropy_lower_bounds(double sigma, double beta)
{
    require_beta(beta);
    const double linear = beta * entropy_slope(sigma);
    return {std::numbers::ln2 - linear, phi(sigma, beta) - linear};
}

double finite_k_lower_bound(double sigma, double beta, int depth)
{
    require_sigma(sigma);
    require_beta(beta);
    if (depth < 1) {
        throw RangeError("K", "finite-depth bound needs K >= 1");
    }
    double sum = 1.0;
    double term = 1.0;
    const double ratio = std::exp2(-sigma);
    for (int l = 1; l <= depth; ++l) {
        term *= ratio;
        sum += term;
        if (term < 1e-18 * sum) {
            break;
        }
    }
    return log_cosh_expectation(beta * std::sqrt(sum) / std::numbers::sqrt2);
}

double single_site_bound_terms(double sigma, double beta, ModelKind model)
{
    require_sigma(sigma);
    require_beta(beta);
    return model == ModelKind::Hrem ? log_cosh_expectation(beta / std::numbers::sqrt2)
                                    : log_cosh_expectation(beta);
}

double jensen_upper_bound(ModelKind model, double sigma, double beta, int p)
{
    const double single = single_site_bound_terms(sigma, beta, model);
    if (model == ModelKind::Hrem) {
        return single + beta * beta / (2.0 * std::expm1(sigma * std::numbers::ln2));
    }
    const double exponent = 2.0 * sigma - 1.0;
    if (!(exponent > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return single + beta * beta / (2.0 * std::expm1(exponent * std::log(static_cast<double>(p))));
}

BoundCheck check_upper(std::string name, const Estimate& lhs, double rhs, double z)
{
    BoundCheck out{std::move(name), lhs.mean, rhs, 0.0, false};
    out.slack = rhs + z * lhs.std_err - lhs.mean;
    out.pass = out.slack >= 0.0;
    return out;
}

BoundCheck check_lower(std::string name, const Estimate& lhs, double rhs, double z)
{
    BoundCheck out{std::move(name), lhs.mean, rhs, 0.0, false};
    out.slack = lhs.mean + z * lhs.std_err - rhs;
    out.pass = out.slack >= 0.0;
    return out;
}

nlohmann::json to_json(const BoundCheck& check)
{
    return {{"name", check.name},
            {"lhs", check.lhs},
            {"rhs", check.rhs},
            {"slack", check.slack},
            {"verdict", check.pass ? "PASS" : "FAIL"}};
}

bool BoundReport::all_pass() const noexcept
{
    for (const auto& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

nlohmann::json BoundReport::to_json() const
{
    nlohmann::json j;
    j["model"] = to_string(model);
    j["sigma"] = sigma;
    if (model == ModelKind::Hps) {
        j["p"] = p;
    }
    j["K"] = depth;
    j["c"] = c;
    j["beta_mf"] = beta_mf;
    j["beta_star"] = beta_star.value;
    j["beta_star_residual"] = beta_star.residual;
    j["degraded_accuracy"] = degraded;
    nlohmann::json curve_json = nlohmann::json::array();
    for (const auto& pt : curve) {
        curve_json.push_back({{"beta", pt.beta},
                              {"phi", pt.phi},
                              {"dphi", pt.dphi},
                              {"entropy_mean_field", pt.entropy_mean_field},
                              {"entropy_improved", pt.entropy_improved},
                              {"finite_k", pt.finite_k},
                              {"jensen_upper", pt.jensen_upper}});
    }
    j["curve"] = std::move(curve_json);
    nlohmann::json checks_json = nlohmann::json::array();
    for (const auto& chk : checks) {
        checks_json.push_back(hglass::to_json(chk));
    }
    j["checks"] = std::move(checks_json);
    return j;
}

std::string BoundReport::curves_csv() const
{
    std::string out = kCurvesCsvHeader;
    out += '\n';
    for (const auto& pt : curve) {
        out += format_number(pt.beta);
        for (double v : {pt.phi, pt.dphi, pt.entropy_mean_field, pt.entropy_improved,
                         pt.finite_k, pt.jensen_upper}) {
            out += ',';
            out += format_number(v);
        }
        out += '\n';
    }
    return out;
}

BoundReport make_bound_report(ModelKind model, double sigma, std::span<const double> betas,
                              int depth, int p)
{
    BoundReport r;
    r.model = model;
    r.sigma = sigma;
    r.p = p;
    r.depth = depth;
    r.c = disorder_scale(sigma);
    r.beta_mf = mean_field_beta(sigma);
    r.beta_star = beta_star(sigma);
    for (double b : betas) {
        require_beta(b);
        BoundCurvePoint pt;
        pt.beta = b;
        pt.phi = phi(sigma, b);
        pt.dphi = phi_derivative(sigma, b);
        const EntropyBounds e = entropy_lower_bounds(sigma, b);
        pt.entropy_mean_field = e.mean_field;
        pt.entropy_improved = e.improved;
        pt.finite_k = finite_k_lower_bound(sigma, b, std::max(depth, 1));
        pt.jensen_upper = jensen_upper_bound(model, sigma, b, p);
        r.degraded = r.degraded || degraded_accuracy(b);
        r.curve.push_back(pt);
    }
    return r;
}

} // namespace hglass
