#pragma once

#include <functional>
#include <vector>

namespace ged {

// ln Gamma(x) for x > 0. Relative error <= 1e-13.
double ln_gamma(double x);

// Upper incomplete gamma Gamma(a, x), a > 0, x >= 0. Relative error <= 1e-12.
double upper_incomplete_gamma(double a, double x);

// exp(x) * Gamma(a, x). Stays representable where Gamma(a, x) itself
// underflows (x large), since exp(x)*Gamma(a,x) ~ x^(a-1).
double upper_incomplete_gamma_scaled(double a, double x);

// Modified Bessel function of the second kind, real order, x > 0.
// K_{-nu} = K_nu. Relative error <= 1e-10 for |order| <= 50, x in (0, 700].
double bessel_k(double order, double x);

// Same, reporting underflow: when the true value is below the smallest
// positive double the result is 0 and *underflowed is set.
double bessel_k(double order, double x, bool* underflowed);

// exp(x) * K_order(x); immune to the exp(-x) tail underflow.
double bessel_k_scaled(double order, double x);

// Confluent hypergeometric 1F1(a, b; z). b must not be a non-positive
// integer. Negative z is always routed through the Kummer transformation
// 1F1(a,b;z) = e^z 1F1(b-a,b;-z) so the evaluated series has one sign.
// Relative error <= 1e-10 for |z| <= 100.
double kummer_1f1(double a, double b, double z);

// Standard normal tail probability Q(x). Absolute error <= 1e-14.
double gaussian_q(double x);

// Inverse of gaussian_q on (0, 1): |gaussian_q(inverse_gaussian_q(q)) - q| <= 1e-12.
double inverse_gaussian_q(double q);

// Nodes and weights for E[f(G)], G ~ Gamma(shape v, rate v):
// E[f(G)] ~= sum_i weights[i] * f(nodes[i]). Nodes strictly increasing and
// positive; weights positive and summing to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double shape = 0.0;
};

// Generalized Gauss-Laguerre rule of the given order for the weight
// t^{shape-1} e^{-t}, mapped to the Gamma(shape, rate shape) expectation
// convention above. Exact for polynomial f up to degree 2*order - 1.
QuadratureRule gauss_laguerre_rule(double shape, int order);

// E[f(G)] for G ~ Gamma(shape v, rate v). Gauss-Laguerre levels of order
// 64..512 are accepted when two successive levels agree to rel. 1e-10; an
// adaptive double-exponential pass handles integrands with endpoint branch
// points (e.g. fractional powers) that the fixed rules cannot resolve.
// Throws numeric_failure with both last estimates if nothing converges.
double gamma_expectation(const std::function<double(double)>& f, double v);

namespace detail {
// Double-exponential evaluation only (the refinement pass of
// gamma_expectation), exposed for tests and the variance-retry path.
double gamma_expectation_refined(const std::function<double(double)>& f, double v);
// lnGamma(v + delta) - lnGamma(v), well-conditioned for large v.
double ln_gamma_ratio(double v, double delta);
}  // namespace detail

}  // namespace ged
