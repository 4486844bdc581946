#include "hglass/quadrature.hpp"

#include "hglass/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hglass {

namespace {

void require_order(int n, int dimension)
{
    if (n < 1 || n > 512) {
        throw RangeError("n", "quadrature order " + std::to_string(n) + " not in [1, 512]");
    }
    if (dimension != 1 && dimension != 2) {
        throw RangeError("dimension", "only 1D and 2D rules exist");
    }
}

} // namespace

QuadratureRule::QuadratureRule(Kind kind, int dimension, std::vector<double> nodes,
                               std::vector<double> weights)
    : kind_(kind), dimension_(dimension), nodes_(std::move(nodes)), weights_(std::move(weights))
{
}

QuadratureRule QuadratureRule::gauss_hermite(int n, int dimension)
{
    require_order(n, dimension);
    // Newton iteration on the orthonormal Hermite recurrence, with the
    // classical asymptotic initial guesses for the largest roots.
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
                break;
            }
        }
        // Refresh the derivative at the converged root.
        double p1 = pim4;
        double p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = z;
        x[hi] = -z;
        w[lo] = 2.0 / (pp * pp);
        w[hi] = w[lo];
    }
    if (n % 2 == 1) {
        x[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return QuadratureRule(Kind::Hermite, dimension, std::move(x), std::move(w));
}

QuadratureRule QuadratureRule::gauss_legendre(int n, int dimension)
{
    require_order(n, dimension);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-16) {
                break;
            }
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[hi] = w[lo];
    }
    if (n % 2 == 1) {
        x[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return QuadratureRule(Kind::Legendre, dimension, std::move(x), std::move(w));
}

double QuadratureRule::integrate(const std::function<double(double)>& g) const
{
    if (dimension_ != 1) {
        throw DimensionError("1D integrand passed to a 2D quadrature rule");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        sum += weights_[i] * g(nodes_[i]);
    }
    return sum;
}

double QuadratureRule::integrate(const std::function<double(double, double)>& g) const
{
    if (dimension_ != 2) {
        throw DimensionError("2D integrand passed to a 1D quadrature rule");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            row += weights_[j] * g(nodes_[i], nodes_[j]);
        }
        sum += weights_[i] * row;
    }
    return sum;
}

double QuadratureRule::gaussian_expectation(const std::function<double(double)>& g) const
{
    if (kind_ != Kind::Hermite) {
        throw DomainError("Gaussian expectations need a Gauss-Hermite rule");
    }
    const double s = std::numbers::sqrt2;
    return integrate([&](double x) { return g(s * x); }) / std::sqrt(std::numbers::pi);
}

double QuadratureRule::gaussian_expectation(const std::function<double(double, double)>& g) const
{
    if (kind_ != Kind::Hermite) {
        throw DomainError("Gaussian expectations need a Gauss-Hermite rule");
    }
    const double s = std::numbers::sqrt2;
    return integrate([&](double x, double y) { return g(s * x, s * y); }) / std::numbers::pi;
}

namespace {

constexpr double kTail = 12.0;

const QuadratureRule& panel_rule(int order)
{
    static const QuadratureRule r10 = QuadratureRule::gauss_legendre(10);
    static const QuadratureRule r20 = QuadratureRule::gauss_legendre(20);
    static const QuadratureRule r40 = QuadratureRule::gauss_legendre(40);
    switch (order) {
    case 10:
        return r10;
    case 20:
        return r20;
    case 40:
        return r40;
    default:
        throw RangeError("panel_order", "supported panel orders are 10, 20 and 40");
    }
}

// 2 int_0^tail phi(x) g(x) dx on panels resolving both the Gaussian weight
// (width 1/2) and the 1/b scale of the integrand near the origin.
template <class F>
double half_line_gaussian(double b, int order, F&& g)
{
    const QuadratureRule& rule = panel_rule(order);
    const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi);
    double total = 0.0;
    auto panel = [&](double a, double c) {
        const double mid = 0.5 * (a + c);
        const double half = 0.5 * (c - a);
        double s = 0.0;
        for (int i = 0; i < rule.order(); ++i) {
            const double x = mid + half * rule.nodes()[static_cast<std::size_t>(i)];
            s += rule.weights()[static_cast<std::size_t>(i)] * std::exp(-0.5 * x * x) * g(x);
        }
        total += half * s;
    };

    const double fine_width = b > 1.0 ? 0.5 / b : 0.5;
    const double fine_end = b > 0.0 ? std::min(kTail, 40.0 / b) : kTail;
    double x = 0.0;
    while (x < fine_end) {
        const double next = std::min(fine_end, x + fine_width);
        panel(x, next);
        x = next;
    }
    while (x < kTail) {
        const double next = std::min(kTail, x + 0.5);
        panel(x, next);
        x = next;
    }
    return norm * total;
}

void require_scale(double b)
{
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw DomainError("Gaussian scale must be finite and non-negative");
    }
}

} // namespace

double log_cosh_expectation(double b, int panel_order)
{
    require_scale(b);
    if (b == 0.0) {
        panel_rule(panel_order);
        return std::numbers::ln2;
    }
    const double head = b * std::sqrt(2.0 / std::numbers::pi);
    return head + half_line_gaussian(b, panel_order,
                                     [b](double x) { return std::log1p(std::exp(-2.0 * b * x)); });
}

double log_cosh_expectation_derivative(double b, int panel_order)
{
    require_scale(b);
    if (b == 0.0) {
        panel_rule(panel_order);
        return 0.0;
    }
    return half_line_gaussian(b, panel_order, [b](double x) { return x * std::tanh(b * x); });
}

} // namespace hglass
