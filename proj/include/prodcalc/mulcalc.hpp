#pragma once

#include <complex>
#include <vector>

#include "prodcalc/expr.hpp"
#include "prodcalc/quad.hpp"

namespace prodcalc {

using ComplexScalar = std::complex<double>;

/// Sign structure of a function on an interval: interior roots in increasing
/// order, the sign of each segment between consecutive breakpoints, and the
/// total length of the negative segments.
struct SignProfile {
    std::vector<double> roots;       // strictly increasing, inside (a, b)
    std::vector<int> segment_signs;  // one per segment, +1 or -1
    double negative_measure = 0.0;
};

/// Multiplicative derivative e^{f'(x)/f(x)}, with f' computed symbolically.
double product_derivative(const Expr& f, double x);

/// First-order multiplicative model f(c) * (qf(c))^(x-c).
double multiplicative_linearization(const Expr& f, double c, double x);

/// Geometric (product) integral e^{int ln f} for f positive on the interval;
/// positivity is checked at every quadrature node.
double geometric_integral(const Expr& f, const Interval& I, const QuadratureRule& rule);

/// Literal finite product over a uniform midpoint partition; the brute-force
/// oracle for geometric_integral.
double riemann_product_oracle(const Expr& f, const Interval& I, long n);

/// Volterra product integral e^{int g}.
double volterra_integral(const Expr& g, const Interval& I, const QuadratureRule& rule);

/// Literal finite product of (1 + g(c_k) dk) over a uniform midpoint
/// partition; the brute-force oracle for volterra_integral.
double volterra_riemann_oracle(const Expr& g, const Interval& I, long n);

/// Logarithmic derivative f'(x)/f(x).
double log_derivative(const Expr& f, double x);

/// Sample f on a uniform grid, bracket the sign changes, and refine each root
/// by bisection to width <= tol.
SignProfile sign_profile(const Expr& f, const Interval& I, int samples = 1024,
                         double tol = 1e-12);

/// Product integral of a sign-changing f: e^{i pi m} * e^{int ln|f|}, with m
/// the negative measure and the ln|f| integral taken segment by segment with
/// singularity-aware refinement around the roots.
ComplexScalar geometric_integral_signed(const Expr& f, const Interval& I,
                                        const QuadratureRule& rule, const SignProfile& profile);

/// Geometric mean exp((int ln|f| + i pi m) / (b - a)); the phase keeps the
/// unreduced negative measure.
ComplexScalar geometric_mean(const Expr& f, const Interval& I, const QuadratureRule& rule,
                             const SignProfile& profile);

}  // namespace prodcalc
