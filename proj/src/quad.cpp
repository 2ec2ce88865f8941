#include "prodcalc/quad.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace prodcalc {

namespace {

/// Compensated accumulation; together with the fixed ascending node order it
/// keeps results bit-stable across platforms.
class KahanSum {
public:
    void add(double x) {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Gauss-Legendre nodes (ascending, interior) and weights on [-1, 1], found
/// by Newton iteration on the Legendre recurrence.
struct GaussRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;

    explicit GaussRule(int order) {
        if (order < 1) throw Error("quadrature order must be >= 1");
        nodes.resize(order);
        weights.resize(order);
        const int half = (order + 1) / 2;
        for (int i = 0; i < half; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
            double p0 = 0.0, p1 = 0.0, dp = 0.0;
            for (int iter = 0; iter < 64; ++iter) {
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 0; j < order; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                dp = order * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
            }
            // one clean evaluation at the converged node for the weight
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
    }
};

double gauss_cell(const std::function<double(double)>& f, double a, double b,
                  const GaussRule& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    KahanSum sum;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
        sum.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * sum.value();
}

struct AdaptiveIntegrator {
    const std::function<double(double)>& f;
    const GaussRule& gauss;
    double tolerance;
    int budget;
    double width_floor;  // 0 disables; cells thinner than this are accepted as is
    int cells_used = 1;

    double refine(double a, double b, double parent_estimate) {
        cells_used += 2;
        if (cells_used > budget)
            throw BudgetExhausted("adaptive refinement exceeded the cell budget");
        const double mid = 0.5 * (a + b);
        const double left = gauss_cell(f, a, mid, gauss);
        const double right = gauss_cell(f, mid, b, gauss);
        const double sum = left + right;
        if (std::abs(sum - parent_estimate) <= tolerance * (1.0 + std::abs(sum)) ||
            b - a < width_floor)
            return sum;
        return refine(a, mid, left) + refine(mid, b, right);
    }
};

}  // namespace

double integrate_interval(const std::function<double(double)>& f, const Interval& I,
                          const QuadratureRule& rule, double width_floor) {
    const GaussRule gauss(rule.order);
    const double whole = gauss_cell(f, I.a, I.b, gauss);
    if (rule.kind == QuadratureRule::Kind::FixedGauss) return whole;
    if (!(rule.tolerance > 0.0)) throw Error("adaptive tolerance must be positive");
    if (rule.cell_budget < 1) throw Error("cell budget must be >= 1");
    AdaptiveIntegrator integrator{f, gauss, rule.tolerance, rule.cell_budget, width_floor};
    return integrator.refine(I.a, I.b, whole);
}

double integrate_interval(const Expr& f, const Interval& I, const QuadratureRule& rule) {
    if (f.max_variable() > 1) throw ShapeMismatch("interval integrand must use x1 only");
    Eigen::VectorXd point(1);
    return integrate_interval(
        [&](double x) {
            point[0] = x;
            return eval(f, point);
        },
        I, rule);
}

double integrate_std_simplex(const Expr& f, int k, const QuadratureRule& rule) {
    if (k < 0) throw Error("simplex dimension must be >= 0");
    if (f.max_variable() > k)
        throw ShapeMismatch("integrand references more variables than the simplex dimension");
    if (k == 0) return eval(f, Eigen::VectorXd(0));

    const GaussRule gauss(rule.order);
    const int order = static_cast<int>(gauss.nodes.size());
    // nodes and weights mapped from [-1,1] to [0,1]
    Eigen::ArrayXd u_nodes = 0.5 * (gauss.nodes + 1.0);
    Eigen::ArrayXd u_weights = 0.5 * gauss.weights;

    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    Eigen::VectorXd x(k);
    KahanSum total;
    for (;;) {
        // collapsed coordinates: x_d = u_d * (1 - x_1 - ... - x_{d-1})
        double jacobian = 1.0;
        double remaining = 1.0;
        double weight = 1.0;
        for (int d = 0; d < k; ++d) {
            const int i = idx[static_cast<std::size_t>(d)];
            x[d] = u_nodes[i] * remaining;
            jacobian *= remaining;
            remaining -= x[d];
            weight *= u_weights[i];
        }
        total.add(weight * jacobian * eval(f, x));

        int d = k - 1;  // lexicographic odometer, last axis fastest
        while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == order) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return total.value();
}

double integrate_logform_over_simplex(const LogForm& w, const Simplex& s,
                                      const QuadratureRule& rule) {
    if (w.dimension() != s.ambient_dimension())
        throw ShapeMismatch("form dimension does not match simplex ambient dimension");
    if (w.degree() != s.degree())
        throw ShapeMismatch("form degree does not match simplex degree");
    const SmoothMap phi = affine_map(s);
    const LogForm pulled = pullback_log(phi, w);
    const int p = w.degree();
    std::vector<int> top(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) top[static_cast<std::size_t>(i)] = i + 1;
    const Expr coeff = pulled.coefficient(MultiIndex(p, top));
    return integrate_std_simplex(coeff, p, rule);
}

}  // namespace prodcalc
