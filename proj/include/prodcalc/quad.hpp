#pragma once

#include <cmath>
#include <functional>

#include "prodcalc/expr.hpp"
#include "prodcalc/forms.hpp"
#include "prodcalc/geometry.hpp"

namespace prodcalc {

/// Finite integration bounds with a < b.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw Error("interval requires finite a < b");
    }
    double length() const { return b - a; }
};

struct QuadratureRule {
    enum class Kind { FixedGauss, Adaptive };

    Kind kind = Kind::Adaptive;
    int order = 16;             // Gauss nodes per cell
    int cell_budget = 1 << 14;  // adaptive refinement limit
    double tolerance = 1e-10;   // relative acceptance threshold per cell

    static QuadratureRule fixed(int order = 16) {
        QuadratureRule r;
        r.kind = Kind::FixedGauss;
        r.order = order;
        return r;
    }
    static QuadratureRule adaptive(int order = 16, double tolerance = 1e-10,
                                   int cell_budget = 1 << 14) {
        QuadratureRule r;
        r.kind = Kind::Adaptive;
        r.order = order;
        r.tolerance = tolerance;
        r.cell_budget = cell_budget;
        return r;
    }
};

/// Gauss-Legendre integration of f over I; adaptive rules bisect cells until
/// the two-half estimate matches the parent within tolerance*(1+|estimate|).
/// All nodes are interior, so integrable endpoint singularities need no
/// special casing. Throws BudgetExhausted when refinement does not settle.
/// A positive width_floor accepts cells thinner than the floor as they stand,
/// for callers that bracket known integrable singularities.
double integrate_interval(const std::function<double(double)>& f, const Interval& I,
                          const QuadratureRule& rule, double width_floor = 0.0);
double integrate_interval(const Expr& f, const Interval& I, const QuadratureRule& rule);

/// Integral of f over the closed standard k-simplex via the collapsed
/// (Duffy-style) change of variables and a tensor Gauss rule per axis.
/// k = 0 evaluates f, which must then be constant.
double integrate_std_simplex(const Expr& f, int k, const QuadratureRule& rule);

/// Integral of a classical p-form over an oriented p-simplex: pull back along
/// the affine parametrization and integrate the single top coefficient over
/// the standard simplex. Reversing two vertices negates the result.
double integrate_logform_over_simplex(const LogForm& w, const Simplex& s,
                                      const QuadratureRule& rule);

}  // namespace prodcalc
