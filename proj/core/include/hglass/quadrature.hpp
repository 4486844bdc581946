#pragma once

#include <functional>
#include <vector>

namespace hglass {

/// Fixed-order Gaussian quadrature rule, either on one axis or as the
/// tensor product of one axis with itself.
class QuadratureRule {
public:
    enum class Kind { Hermite, Legendre };

    /// Nodes and weights for the integral of e^{-x^2} g(x) over the real line.
    static QuadratureRule gauss_hermite(int n, int dimension = 1);

    /// Nodes and weights for the integral of g(x) over [-1, 1].
    static QuadratureRule gauss_legendre(int n, int dimension = 1);

    Kind kind() const noexcept { return kind_; }
    int order() const noexcept { return static_cast<int>(nodes_.size()); }
    int dimension() const noexcept { return dimension_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Sum of w_i g(x_i). Requires dimension 1.
    double integrate(const std::function<double(double)>& g) const;

    /// Sum of w_i w_j g(x_i, x_j). Requires dimension 2.
    double integrate(const std::function<double(double, double)>& g) const;

    /// E[g(Z)] for Z standard normal (Hermite rules only).
    double gaussian_expectation(const std::function<double(double)>& g) const;

    /// E[g(X, Y)] for independent standard normals (Hermite rules only).
    double gaussian_expectation(const std::function<double(double, double)>& g) const;

private:
    QuadratureRule(Kind kind, int dimension, std::vector<double> nodes,
                   std::vector<double> weights);

    Kind kind_;
    int dimension_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

inline constexpr int kDefaultPanelOrder = 20;

/// E[log 2cosh(b Z)], Z standard normal, b >= 0.
///
/// Written as b sqrt(2/pi) + 2 int_0^inf phi(x) log1p(e^{-2bx}) dx and
/// integrated with composite Gauss-Legendre panels of `panel_order` points.
double log_cosh_expectation(double b, int panel_order = kDefaultPanelOrder);

/// d/db of log_cosh_expectation: E[Z tanh(b Z)].
double log_cosh_expectation_derivative(double b, int panel_order = kDefaultPanelOrder);

} // namespace hglass
