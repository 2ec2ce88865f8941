#pragma once

#include <vector>

#include "prodcalc/forms.hpp"
#include "prodcalc/geometry.hpp"
#include "prodcalc/quad.hpp"

namespace prodcalc {

struct SimplexContribution {
    double weight = 1.0;
    double boundary_log = 0.0;  // log of the boundary-side integral for this simplex
    double interior_log = 0.0;  // log of the q-side integral for this simplex
};

/// Both sides of the boundary/differential identity for one form and chain,
/// with the scale-free log discrepancy and a per-simplex breakdown. No
/// pass/fail judgment is made here.
struct StokesReport {
    double lhs = 1.0;
    double rhs = 1.0;
    double log_discrepancy = 0.0;
    std::vector<SimplexContribution> per_simplex;
};

/// Product integral of a p-form over a chain of p-simplices: exp of the
/// weighted sum of the simplex integrals of the log coefficients. For a
/// 0-form f over +P1 - P0 this is f(P1)/f(P0). Coefficients that are not
/// positive along the chain surface as PositivityViolation.
double product_integral_over_chain(const ProductForm& f, const Chain& c,
                                   const QuadratureRule& rule);

/// lhs: f integrated over the boundary of c; rhs: q_diff(f) integrated over c.
StokesReport stokes_check(const ProductForm& f, const Chain& c, const QuadratureRule& rule);

struct ProofIdentityReport {
    double boundary_side = 1.0;
    double q_side = 1.0;
    double closed_form = 1.0;  // the boundary-to-base ratio formula both sides reduce to
    double max_log_discrepancy = 0.0;
};

/// For the form (A)^{dx1...dxn} on the standard (n+1)-simplex, compute the
/// boundary-side integral, the q-side integral, and the closed ratio form
/// (-1)^n odot prod (A(x, 1-sum x)/A(x, 0)), reporting the worst pairwise log
/// discrepancy. A must be positive on the closed simplex.
ProofIdentityReport proof_identity_check(const Expr& A, int n, const QuadratureRule& rule);

}  // namespace prodcalc
