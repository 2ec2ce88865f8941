#include "prodcalc/stokes.hpp"

#include <cmath>

namespace prodcalc {

namespace {

double simplex_log_integral(const LogForm& w, const Simplex& s, const QuadratureRule& rule) {
    try {
        return integrate_logform_over_simplex(w, s, rule);
    } catch (const DomainError& e) {
        if (e.cause == DomainError::Cause::LnNonPositive)
            throw PositivityViolation(std::string("form coefficient is not positive on the "
                                                  "chain: ") +
                                      e.what());
        throw;
    }
}

double chain_log_integral(const LogForm& w, const Chain& c, const QuadratureRule& rule) {
    double total = 0.0;
    for (const auto& [weight, s] : c.terms())
        total += weight * simplex_log_integral(w, s, rule);
    return total;
}

}  // namespace

double product_integral_over_chain(const ProductForm& f, const Chain& c,
                                   const QuadratureRule& rule) {
    if (f.dimension() != c.ambient_dimension())
        throw ShapeMismatch("form dimension does not match chain ambient dimension");
    if (f.degree() != c.degree())
        throw ShapeMismatch("form degree does not match chain degree");
    return std::exp(chain_log_integral(log_map(f), c, rule));
}

StokesReport stokes_check(const ProductForm& f, const Chain& c, const QuadratureRule& rule) {
    if (f.dimension() != c.ambient_dimension())
        throw ShapeMismatch("form dimension does not match chain ambient dimension");
    if (c.degree() != f.degree() + 1)
        throw ShapeMismatch("chain degree must be one above the form degree");

    const LogForm w = log_map(f);
    const LogForm qw = log_map(q_diff(f));

    StokesReport report;
    double lhs_log = 0.0, rhs_log = 0.0;
    for (const auto& [weight, s] : c.terms()) {
        SimplexContribution contribution;
        contribution.weight = weight;
        const Chain faces = boundary(s);
        for (const auto& [face_weight, face] : faces.terms())
            contribution.boundary_log += face_weight * simplex_log_integral(w, face, rule);
        contribution.interior_log = simplex_log_integral(qw, s, rule);
        lhs_log += weight * contribution.boundary_log;
        rhs_log += weight * contribution.interior_log;
        report.per_simplex.push_back(contribution);
    }
    report.lhs = std::exp(lhs_log);
    report.rhs = std::exp(rhs_log);
    report.log_discrepancy = std::abs(lhs_log - rhs_log);
    return report;
}

ProofIdentityReport proof_identity_check(const Expr& A, int n, const QuadratureRule& rule) {
    if (n < 1) throw Error("the identity needs n >= 1");
    if (A.max_variable() > n + 1)
        throw ShapeMismatch("A must be a function of x1..x" + std::to_string(n + 1));

    ProductForm eta(n + 1, n);
    std::vector<int> base_slot;
    for (int i = 1; i <= n; ++i) base_slot.push_back(i);
    eta.with_coefficient(base_slot, A);

    const Simplex sigma = standard_simplex(n + 1);
    const double boundary_log = chain_log_integral(log_map(eta), boundary(sigma), rule);
    const double q_log = simplex_log_integral(log_map(q_diff(eta)), sigma, rule);

    // substitute the roof x_{n+1} = 1 - sum x_i and the base x_{n+1} = 0
    std::vector<Expr> roof, base;
    Expr remainder(1.0);
    for (int i = 1; i <= n; ++i) {
        roof.push_back(var(i));
        base.push_back(var(i));
        remainder = remainder - var(i);
    }
    roof.push_back(simplify(remainder));
    base.push_back(Expr(0.0));
    const Expr ratio_log =
        simplify(ln(substitute(A, roof)) - ln(substitute(A, base)));
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    double closed_log = 0.0;
    try {
        closed_log = sign * integrate_std_simplex(ratio_log, n, rule);
    } catch (const DomainError& e) {
        if (e.cause == DomainError::Cause::LnNonPositive)
            throw PositivityViolation(std::string("A is not positive on the simplex: ") +
                                      e.what());
        throw;
    }

    ProofIdentityReport report;
    report.boundary_side = std::exp(boundary_log);
    report.q_side = std::exp(q_log);
    report.closed_form = std::exp(closed_log);
    report.max_log_discrepancy =
        std::max({std::abs(boundary_log - q_log), std::abs(boundary_log - closed_log),
                  std::abs(q_log - closed_log)});
    return report;
}

}  // namespace prodcalc
