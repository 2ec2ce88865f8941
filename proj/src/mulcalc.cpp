#include "prodcalc/mulcalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prodcalc {

namespace {

double eval1(const Expr& f, double x) {
    Eigen::VectorXd point(1);
    point[0] = x;
    return eval(f, point);
}

void require_single_variable(const Expr& f) {
    if (f.max_variable() > 1) throw ShapeMismatch("expected a function of x1 only");
}

constexpr double kRootWidthFloor = 1e-13;  // accepted cell width next to a bracketed root

}  // namespace

double product_derivative(const Expr& f, double x) {
    require_single_variable(f);
    const double fx = eval1(f, x);
    if (fx == 0.0)
        throw DomainError(DomainError::Cause::ZeroValue, "f vanishes at the evaluation point");
    const double dfx = eval1(diff(f, 1), x);
    return std::exp(dfx / fx);
}

double multiplicative_linearization(const Expr& f, double c, double x) {
    require_single_variable(f);
    const double fc = eval1(f, c);
    if (fc <= 0.0)
        throw DomainError(DomainError::Cause::ZeroValue,
                          "linearization requires f(c) > 0, got " + std::to_string(fc));
    return fc * std::pow(product_derivative(f, c), x - c);
}

double geometric_integral(const Expr& f, const Interval& I, const QuadratureRule& rule) {
    require_single_variable(f);
    const double integral = integrate_interval(
        [&](double x) {
            const double v = eval1(f, x);
            if (v <= 0.0)
                throw NonPositiveIntegrand("f(" + std::to_string(x) + ") = " + std::to_string(v) +
                                           "; use the signed variant");
            return std::log(v);
        },
        I, rule);
    return std::exp(integral);
}

double riemann_product_oracle(const Expr& f, const Interval& I, long n) {
    require_single_variable(f);
    if (n < 1) throw Error("partition count must be >= 1");
    const double width = I.length() / static_cast<double>(n);
    double product = 1.0;
    for (long k = 0; k < n; ++k) {
        const double c = I.a + (static_cast<double>(k) + 0.5) * width;
        const double v = eval1(f, c);
        if (v <= 0.0)
            throw NonPositiveIntegrand("f(" + std::to_string(c) + ") = " + std::to_string(v));
        product *= std::pow(v, width);
    }
    return product;
}

double volterra_integral(const Expr& g, const Interval& I, const QuadratureRule& rule) {
    require_single_variable(g);
    return std::exp(integrate_interval(g, I, rule));
}

double volterra_riemann_oracle(const Expr& g, const Interval& I, long n) {
    require_single_variable(g);
    if (n < 1) throw Error("partition count must be >= 1");
    const double width = I.length() / static_cast<double>(n);
    double product = 1.0;
    for (long k = 0; k < n; ++k) {
        const double c = I.a + (static_cast<double>(k) + 0.5) * width;
        const double factor = 1.0 + eval1(g, c) * width;
        if (factor <= 0.0)
            throw DegeneratePartition("factor 1 + g(c_k) d_k = " + std::to_string(factor) +
                                      " at c_k = " + std::to_string(c));
        product *= factor;
    }
    return product;
}

double log_derivative(const Expr& f, double x) {
    require_single_variable(f);
    const double fx = eval1(f, x);
    if (fx == 0.0)
        throw DomainError(DomainError::Cause::ZeroValue, "f vanishes at the evaluation point");
    return eval1(diff(f, 1), x) / fx;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double bisect_root(const Expr& f, double lo, double hi, double flo, double tol) {
    // invariant: sign change across [lo, hi]
    int slo = sign_of(flo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
        const double fm = eval1(f, mid);
        const int sm = sign_of(fm);
        if (sm == 0) return mid;
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SignProfile sign_profile(const Expr& f, const Interval& I, int samples, double tol) {
    require_single_variable(f);
    if (samples < 2) throw Error("sign profiling needs at least 2 samples");

    std::vector<double> grid(static_cast<std::size_t>(samples));
    std::vector<double> values(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        grid[static_cast<std::size_t>(i)] =
            I.a + I.length() * static_cast<double>(i) / static_cast<double>(samples - 1);
        values[static_cast<std::size_t>(i)] = eval1(f, grid[static_cast<std::size_t>(i)]);
    }

    SignProfile profile;
    for (int i = 0; i + 1 < samples; ++i) {
        const double v0 = values[static_cast<std::size_t>(i)];
        const double v1 = values[static_cast<std::size_t>(i + 1)];
        if (v0 == 0.0 && v1 == 0.0)
            throw DegenerateSign("f vanishes identically on a grid step near x = " +
                                 std::to_string(grid[static_cast<std::size_t>(i)]));
        if (sign_of(v0) * sign_of(v1) == -1) {
            const double root = bisect_root(f, grid[static_cast<std::size_t>(i)],
                                            grid[static_cast<std::size_t>(i + 1)], v0, tol);
            if (root > I.a && root < I.b) profile.roots.push_back(root);
        } else if (v0 == 0.0 && i > 0) {
            // exact zero on an interior grid point: a root when the signs flip across it
            const double prev = values[static_cast<std::size_t>(i - 1)];
            if (sign_of(prev) * sign_of(v1) == -1)
                profile.roots.push_back(grid[static_cast<std::size_t>(i)]);
        }
    }

    // probe each segment for its sign
    std::vector<double> cuts;
    cuts.push_back(I.a);
    cuts.insert(cuts.end(), profile.roots.begin(), profile.roots.end());
    cuts.push_back(I.b);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        int sign = 0;
        for (double frac : {0.5, 0.25, 0.75, 0.375, 0.625}) {
            const double probe = cuts[seg] + frac * (cuts[seg + 1] - cuts[seg]);
            sign = sign_of(eval1(f, probe));
            if (sign != 0) break;
        }
        if (sign == 0)
            throw DegenerateSign("could not establish a sign on segment starting at x = " +
                                 std::to_string(cuts[seg]));
        profile.segment_signs.push_back(sign);
        if (sign < 0) profile.negative_measure += cuts[seg + 1] - cuts[seg];
    }
    for (std::size_t seg = 0; seg + 1 < profile.segment_signs.size(); ++seg) {
        if (profile.segment_signs[seg] == profile.segment_signs[seg + 1])
            throw DegenerateSign("segments adjacent to a detected root share a sign");
    }
    return profile;
}

namespace {

/// Segment-by-segment integral of ln|f| with adaptive refinement; the
/// segment ends sit on the detected roots and Gauss nodes stay interior.
double log_abs_integral(const Expr& f, const Interval& I, const QuadratureRule& rule,
                        const SignProfile& profile) {
    std::vector<double> cuts;
    cuts.push_back(I.a);
    for (double r : profile.roots) {
        if (r <= I.a || r >= I.b || (cuts.size() > 1 && r <= cuts.back()))
            throw Error("sign profile roots must increase strictly inside the interval");
        cuts.push_back(r);
    }
    cuts.push_back(I.b);
    if (profile.segment_signs.size() != cuts.size() - 1)
        throw Error("sign profile has " + std::to_string(profile.segment_signs.size()) +
                    " segment signs for " + std::to_string(cuts.size() - 1) + " segments");

    QuadratureRule segment_rule = rule;
    segment_rule.kind = QuadratureRule::Kind::Adaptive;
    if (rule.kind == QuadratureRule::Kind::FixedGauss) segment_rule.tolerance = 1e-10;

    const auto integrand = [&](double x) {
        const double v = std::abs(eval1(f, x));
        if (v == 0.0)
            throw NonIntegrableSingularity("|f| vanishes at a quadrature node x = " +
                                           std::to_string(x));
        return std::log(v);
    };

    double total = 0.0;
    try {
        for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg)
            total += integrate_interval(integrand, Interval(cuts[seg], cuts[seg + 1]),
                                        segment_rule, kRootWidthFloor);
    } catch (const BudgetExhausted& e) {
        throw NonIntegrableSingularity(std::string("refinement failed to converge: ") + e.what());
    }
    return total;
}

double derived_negative_measure(const Interval& I, const SignProfile& profile) {
    std::vector<double> cuts;
    cuts.push_back(I.a);
    cuts.insert(cuts.end(), profile.roots.begin(), profile.roots.end());
    cuts.push_back(I.b);
    double m = 0.0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg)
        if (profile.segment_signs[seg] < 0) m += cuts[seg + 1] - cuts[seg];
    return m;
}

}  // namespace

ComplexScalar geometric_integral_signed(const Expr& f, const Interval& I,
                                        const QuadratureRule& rule, const SignProfile& profile) {
    require_single_variable(f);
    const double log_magnitude = log_abs_integral(f, I, rule, profile);
    const double m = derived_negative_measure(I, profile);
    return std::polar(std::exp(log_magnitude), M_PI * m);
}

ComplexScalar geometric_mean(const Expr& f, const Interval& I, const QuadratureRule& rule,
                             const SignProfile& profile) {
    require_single_variable(f);
    const double log_magnitude = log_abs_integral(f, I, rule, profile);
    const double m = derived_negative_measure(I, profile);
    return std::polar(std::exp(log_magnitude / I.length()), M_PI * m / I.length());
}

}  // namespace prodcalc
