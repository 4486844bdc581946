#include "doctest.h"

#include "hglass/analysis.hpp"
#include "hglass/errors.hpp"
#include "hglass/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hglass;

namespace {

// Composite Simpson rule of phi(x) log(2 cosh(b x)) over [-12, 12].
double simpson_log_cosh(double b)
{
    constexpr int n = 240'000;
    const double h = 24.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -12.0 + i * h;
        const double ax = std::abs(b * x);
        const double f = std::exp(-0.5 * x * x) * (ax + std::log1p(std::exp(-2.0 * ax)));
        s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

struct McResult {
    double mean;
    double err;
};

template <class F>
McResult monte_carlo(F&& f, int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = f(rng, normal);
        s += v;
        s2 += v * v;
    }
    const double mean = s / n;
    return {mean, std::sqrt((s2 / n - mean * mean) / (n - 1))};
}

} // namespace

TEST_CASE("Gauss-Hermite integrates low-degree polynomials exactly")
{
    const QuadratureRule gh = QuadratureRule::gauss_hermite(32);
    for (int d = 0; d <= 9; ++d) {
        const double exact = d % 2 ? 0.0 : std::tgamma((d + 1) / 2.0);
        CHECK(gh.integrate([d](double x) { return std::pow(x, d); }) ==
              doctest::Approx(exact).epsilon(1e-12));
    }
    const QuadratureRule gh2 = QuadratureRule::gauss_hermite(32, 2);
    CHECK(gh2.integrate([](double x, double y) { return x * x * y * y; }) ==
          doctest::Approx(0.25 * std::numbers::pi).epsilon(1e-12));
    CHECK(gh2.gaussian_expectation([](double x, double y) { return x * x + y * y * y * y; }) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(QuadratureRule::gauss_hermite(64).gaussian_expectation(
              [](double x) { return std::pow(x, 8); }) == doctest::Approx(105.0).epsilon(1e-12));
    CHECK_THROWS_AS(gh.integrate([](double, double) { return 1.0; }), DimensionError);
}

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n - 1")
{
    const QuadratureRule gl = QuadratureRule::gauss_legendre(10);
    for (int d = 0; d <= 19; ++d) {
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(gl.integrate([d](double x) { return std::pow(x, d); }) ==
              doctest::Approx(exact).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gl.gaussian_expectation([](double) { return 1.0; }), DomainError);
    CHECK_THROWS_AS(QuadratureRule::gauss_hermite(0), RangeError);
}

TEST_CASE("log-cosh expectation against a dense Simpson rule")
{
    for (double b : {0.05, 0.3, 1.0, 2.5, 4.0, 6.6}) {
        CHECK(std::abs(log_cosh_expectation(b) - simpson_log_cosh(b)) < 1e-10);
    }
    CHECK(log_cosh_expectation(0.0) == std::numbers::ln2);
}

TEST_CASE("phi at zero and its strict growth")
{
    for (double sigma : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(phi(sigma, 0.0) - std::numbers::ln2) < 1e-12);
    }
    CHECK(phi(1.0, 1.0) > std::numbers::ln2);
    CHECK_THROWS_AS(phi(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(phi(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(phi(1.0, -0.5), DomainError);
}

TEST_CASE("asymptotic slope of phi")
{
    CHECK(std::abs(phi(1.0, 30.0) / 30.0 - std::sqrt(2.0 / std::numbers::pi)) < 1e-2);
}

TEST_CASE("two panel orders agree")
{
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (double beta = 0.0; beta <= 5.0; beta += 0.25) {
            CHECK(std::abs(phi(sigma, beta, 10) - phi(sigma, beta, 20)) < 1e-10);
            CHECK(std::abs(phi_derivative(sigma, beta, 10) - phi_derivative(sigma, beta, 20)) < 1e-9);
        }
    }
}

TEST_CASE("tensor Gauss-Hermite agrees at small beta")
{
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (double beta : {0.1, 0.5, 1.0}) {
            CHECK(std::abs(phi_gauss_hermite(sigma, beta, 64) - phi(sigma, beta)) < 1e-10);
        }
    }
}

TEST_CASE("phi against Monte Carlo of the two-energy log-sum-exp")
{
    for (double beta : {1.0, 2.0}) {
        const double c = disorder_scale(1.0);
        const McResult mc = monte_carlo(
            [&](std::mt19937_64& r, std::normal_distribution<double>& n) {
                const double a = -beta * c * n(r);
                const double b = -beta * c * n(r);
                const double m = std::max(a, b);
                return m + std::log(std::exp(a - m) + std::exp(b - m));
            },
            10'000'000, 17);
        CHECK(std::abs(mc.mean - phi(1.0, beta)) <= 3.0 * mc.err);
    }
}

TEST_CASE("derivative of phi")
{
    CHECK(phi_derivative(1.0, 0.0) == 0.0);
    const double h = 1e-5;
    CHECK(std::abs((phi(1.0, 1.0 + h) - phi(1.0, 1.0 - h)) / (2 * h) - phi_derivative(1.0, 1.0)) <
          1e-6);
    for (double sigma : {0.1, 0.5, 1.0, 2.0, 8.0}) {
        for (double beta = 0.0; beta <= 3.0; beta += 0.1) {
            CHECK(phi_derivative(sigma, beta) <= entropy_slope(sigma));
        }
    }
}

TEST_CASE("sandwich between the linear asymptote and its log 2 shift")
{
    for (double sigma : {0.5, 1.0, 2.0}) {
        const double lower = disorder_scale(sigma) / std::sqrt(std::numbers::pi);
        for (double beta : {1.0, 2.0, 4.0}) {
            const double ratio = phi(sigma, beta) / beta;
            CHECK(ratio >= lower);
            CHECK(ratio <= lower + std::numbers::ln2 / beta);
        }
    }
}

TEST_CASE("mean-field inverse temperature")
{
    CHECK(std::abs(mean_field_beta(1.0) - std::sqrt(std::numbers::ln2 / 4.0)) < 1e-9);
    CHECK(std::abs(mean_field_beta(1.0) - 0.41628) < 1e-5);
    CHECK(std::abs(mean_field_beta(60.0) - std::sqrt(std::numbers::ln2 / 2.0)) < 1e-9);
    CHECK(mean_field_beta(0.01) < 0.05);
    CHECK_THROWS_AS(mean_field_beta(0.0), DomainError);
}

TEST_CASE("beta star")
{
    for (double sigma : {0.5, 1.0, 2.0}) {
        const RootResult r = beta_star(sigma);
        CHECK(r.residual < 1e-9);
        CHECK(std::abs(phi(sigma, r.value) - r.value * entropy_slope(sigma)) < 1e-9);
        CHECK(r.value > mean_field_beta(sigma));
    }
    CHECK(beta_star(0.01).value < 0.07);
    CHECK_THROWS_AS(beta_star(0.0), DomainError);
}

TEST_CASE("entropy lower bounds")
{
    const EntropyBounds zero = entropy_lower_bounds(1.0, 0.0);
    CHECK(zero.mean_field == std::numbers::ln2);
    CHECK(std::abs(zero.improved - std::numbers::ln2) < 1e-15);
    const EntropyBounds one = entropy_lower_bounds(1.0, 1.0);
    CHECK(one.improved > one.mean_field);
    for (double sigma : {0.5, 1.0, 2.0}) {
        double prev = INFINITY;
        for (double beta = 0.0; beta <= 3.0 + 1e-12; beta += 0.05) {
            const EntropyBounds e = entropy_lower_bounds(sigma, beta);
            CHECK(e.improved <= prev + 1e-13);
            CHECK(e.improved >= e.mean_field);
            prev = e.improved;
        }
    }
}

TEST_CASE("finite-depth lower bound")
{
    CHECK(finite_k_lower_bound(1.0, 0.0, 3) == std::numbers::ln2);
    CHECK(std::abs(finite_k_lower_bound(1.0, 1.0, 200) - phi(1.0, 1.0)) < 1e-9);
    double prev = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double v = finite_k_lower_bound(0.5, 1.0, k);
        CHECK(v > prev);
        CHECK(v <= phi(0.5, 1.0) + 1e-15);
        prev = v;
    }
    CHECK_THROWS_AS(finite_k_lower_bound(1.0, 1.0, 0), RangeError);
}

TEST_CASE("single-site terms")
{
    CHECK(single_site_bound_terms(1.0, 0.0, ModelKind::Hrem) == std::numbers::ln2);
    CHECK(single_site_bound_terms(1.0, 0.0, ModelKind::Hps) == std::numbers::ln2);
    // HREM term is phi with c = 1, i.e. the sigma -> infinity limit.
    CHECK(std::abs(single_site_bound_terms(1.0, 1.0, ModelKind::Hrem) - phi(200.0, 1.0)) < 1e-14);
    const McResult mc = monte_carlo(
        [](std::mt19937_64& r, std::normal_distribution<double>& n) {
            return std::log(2.0 * std::cosh(n(r)));
        },
        10'000'000, 23);
    CHECK(std::abs(mc.mean - single_site_bound_terms(1.0, 1.0, ModelKind::Hps)) <= 3.0 * mc.err);
}

TEST_CASE("Jensen bounds")
{
    CHECK(jensen_upper_bound(ModelKind::Hrem, 1.0, 1.0) ==
          doctest::Approx(0.5 + log_cosh_expectation(1.0 / std::numbers::sqrt2)).epsilon(1e-14));
    CHECK(jensen_upper_bound(ModelKind::Hps, 1.0, 1.0, 3) ==
          doctest::Approx(0.25 + log_cosh_expectation(1.0)).epsilon(1e-14));
    CHECK(std::isinf(jensen_upper_bound(ModelKind::Hps, 0.5, 1.0, 3)));
}

TEST_CASE("bound checks and report")
{
    const BoundCheck up = check_upper("x", {1.0, 0.1}, 0.8);
    CHECK(up.pass);
    CHECK(up.slack == doctest::Approx(0.1));
    CHECK_FALSE(check_upper("x", {1.0, 0.01}, 0.8).pass);
    CHECK(check_lower("y", {0.5, 0.0}, 0.5).pass);
    CHECK_FALSE(check_lower("y", {0.4, 0.0}, 0.5).pass);

    const double betas[] = {0.0, 0.5, 1.0, 6.0};
    const BoundReport r = make_bound_report(ModelKind::Hrem, 1.0, betas, 3);
    CHECK(r.beta_mf == doctest::Approx(0.41628).epsilon(1e-5));
    CHECK(r.beta_star.value > r.beta_mf);
    CHECK(r.degraded);
    CHECK(r.curve.size() == 4);
    CHECK(r.curve[0].phi == std::numbers::ln2);
    for (const auto& pt : r.curve) {
        CHECK(pt.entropy_improved >= pt.entropy_mean_field);
    }
    const nlohmann::json j = r.to_json();
    CHECK(j.at("model") == "HREM");
    CHECK(j.at("curve").size() == 4);
    const std::string csv = r.curves_csv();
    CHECK(csv.rfind(std::string(kCurvesCsvHeader) + "\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK_THROWS_AS(make_bound_report(ModelKind::Hrem, -1.0, betas), DomainError);
}
