#pragma once

#include "hglass/params.hpp"
#include "hglass/quadrature.hpp"
#include "hglass/stats.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hglass {

/// Largest beta at which the quadrature meets its accuracy target; callers
/// may go further but should warn about degraded accuracy.
inline constexpr double kQuadratureBetaCap = 5.0;

bool degraded_accuracy(double beta) noexcept;

/// c(sigma) = sqrt(2^sigma / (2^sigma - 1)).
double disorder_scale(double sigma);

/// Effective single-site free energy E[log sum_S exp(-beta c eps[S])] with
/// two independent standard normal energies.
double phi(double sigma, double beta, int panel_order = kDefaultPanelOrder);

double phi_derivative(double sigma, double beta, int panel_order = kDefaultPanelOrder);

/// Same expectation on a tensor Gauss-Hermite grid; only trustworthy for
/// small beta and kept as a cross-check.
double phi_gauss_hermite(double sigma, double beta, int n = 64);

double mean_field_beta(double sigma);

/// c sqrt(2 log 2): the slope of the linear term in the entropy bounds.
double entropy_slope(double sigma);

struct RootResult {
    double value = 0.0;
    double residual = 0.0;
    int doublings = 0;
    int iterations = 0;
};

/// Root of phi(beta) - beta c sqrt(2 log 2).
RootResult beta_star(double sigma);

struct EntropyBounds {
    double mean_field = 0.0;
    double improved = 0.0;
};

EntropyBounds entropy_lower_bounds(double sigma, double beta);

/// E[log sum_S exp(-beta sqrt(1 + sum_{l=1}^K 2^{-l sigma}) eps[S])].
double finite_k_lower_bound(double sigma, double beta, int depth);

/// Single-site term of the Jensen bound: two-energy log-sum-exp for HREM,
/// E[log 2cosh(beta h)] for HPS.
double single_site_bound_terms(double sigma, double beta, ModelKind model);

/// Jensen upper bound on the quenched free energy at any depth.
double jensen_upper_bound(ModelKind model, double sigma, double beta, int p = 3);

/// One inequality checked against a measured estimate with 3-sigma slack.
struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // signed margin left after the statistical allowance
    bool pass = false;
};

/// lhs <= rhs + z * stderr(lhs).
BoundCheck check_upper(std::string name, const Estimate& lhs, double rhs, double z = 3.0);

/// lhs >= rhs - z * stderr(lhs).
BoundCheck check_lower(std::string name, const Estimate& lhs, double rhs, double z = 3.0);

nlohmann::json to_json(const BoundCheck& check);

struct BoundCurvePoint {
    double beta = 0.0;
    double phi = 0.0;
    double dphi = 0.0;
    double entropy_mean_field = 0.0;
    double entropy_improved = 0.0;
    double finite_k = 0.0;
    double jensen_upper = 0.0;
};

struct BoundReport {
    ModelKind model = ModelKind::Hrem;
    double sigma = 1.0;
    int p = 3;
    int depth = 1;
    double c = 0.0;
    double beta_mf = 0.0;
    RootResult beta_star;
    std::vector<BoundCurvePoint> curve;
    std::vector<BoundCheck> checks;
    bool degraded = false;

    bool all_pass() const noexcept;
    nlohmann::json to_json() const;
    std::string curves_csv() const;
};

inline constexpr const char* kCurvesCsvHeader =
    "beta,phi,dphi,entropy_mean_field,entropy_improved,finite_k,jensen_upper";

BoundReport make_bound_report(ModelKind model, double sigma, std::span<const double> betas,
                              int depth = 1, int p = 3);

} // namespace hglass
