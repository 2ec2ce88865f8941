#pragma once

#include <Eigen/Core>

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "prodcalc/expr.hpp"

namespace prodcalc {

/// Sorted, strictly increasing basis slot dx^{i1} ^ ... ^ dx^{ip} with indices
/// in 1..n. The empty tuple is the degree-0 slot.
class MultiIndex {
public:
    MultiIndex(int dimension, std::vector<int> indices);

    int dimension() const { return dimension_; }
    int degree() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }

    /// "0" for degree 0, otherwise "dx1^dx2^...".
    std::string to_string() const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    int dimension_;
    std::vector<int> indices_;
};

/// Sorts indices in place and returns the permutation parity (+1 or -1).
/// Throws on repeated indices.
int sort_with_parity(std::vector<int>& indices);

/// Degree-p product form in n variables. The coefficient table maps basis
/// slots to strictly positive coefficient fields; an absent slot means the
/// coefficient is identically 1 (the additive-identity component).
class ProductForm {
public:
    ProductForm(int dimension, int degree);

    int dimension() const { return dimension_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, Expr>& coefficients() const { return table_; }

    /// Coefficient on a slot, the constant 1 when absent.
    Expr coefficient(const MultiIndex& key) const;

    /// Install a coefficient on a (possibly unsorted) slot. Odd permutation
    /// parity stores the reciprocal. Setting a slot twice multiplies into it.
    ProductForm& with_coefficient(std::vector<int> slot, Expr coeff);

    /// Multiply `coeff` into the (already canonical) slot, dropping slots
    /// whose coefficient simplifies to the constant 1.
    void accumulate(const MultiIndex& key, const Expr& coeff);

private:
    int dimension_;
    int degree_;
    std::map<MultiIndex, Expr> table_;
};

/// Classical differential form of degree p: real-valued coefficients, absent
/// slot means 0. The log-side image of a ProductForm.
class LogForm {
public:
    LogForm(int dimension, int degree);

    int dimension() const { return dimension_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, Expr>& coefficients() const { return table_; }

    Expr coefficient(const MultiIndex& key) const;  // 0 when absent

    /// As ProductForm::with_coefficient, but odd parity negates and repeated
    /// slots add.
    LogForm& with_coefficient(std::vector<int> slot, Expr coeff);

    void accumulate(const MultiIndex& key, const Expr& coeff);

private:
    int dimension_;
    int degree_;
    std::map<MultiIndex, Expr> table_;
};

ProductForm identity_form(int dimension, int degree);

/// Vector addition: coefficientwise product.
ProductForm oplus(const ProductForm& a, const ProductForm& b);

/// Scalar multiplication: coefficientwise power.
ProductForm scalar_odot(double a, const ProductForm& f);

/// Coefficientwise reciprocal, i.e. (-1) odot f.
ProductForm inverse(const ProductForm& f);

/// Product wedge. Monomial slots pair only when disjoint; the pair lands on
/// the sorted union with the coefficient product, raised to the permutation
/// parity of the concatenation. Pairs hitting the same slot multiply together.
ProductForm wedge_p(const ProductForm& a, const ProductForm& b);

/// Coefficientwise ln / exp bridge between the product and classical sides.
LogForm log_map(const ProductForm& f);
ProductForm exp_map(const LogForm& w);

LogForm add(const LogForm& a, const LogForm& b);
LogForm scale(double a, const LogForm& w);

/// Classical exterior derivative of a LogForm.
LogForm exterior_derivative(const LogForm& w);

/// The product differential: exp_map after d after log_map. Applying it twice
/// yields the identity form.
ProductForm q_diff(const ProductForm& f);

/// Numeric coefficient table over all C(n,p) slots; absent slots report 1.
/// Throws PositivityViolation when a stored coefficient evaluates <= 0.
std::map<MultiIndex, double> evaluate_form(const ProductForm& f, const Eigen::VectorXd& point);

/// All sorted degree-p slots in dimension n, ascending.
std::vector<MultiIndex> enumerate_slots(int dimension, int degree);

/// Deterministic low-discrepancy points in [0.1, 0.9]^n for semantic form
/// comparison.
std::vector<Eigen::VectorXd> sample_points(int dimension, int count = 32);

/// Max over points and slots of |ln a - ln b| for the two coefficient tables.
double max_log_difference(const ProductForm& a, const ProductForm& b,
                          const std::vector<Eigen::VectorXd>& points);

/// Max over points and slots of |a - b| for two classical forms.
double max_coefficient_difference(const LogForm& a, const LogForm& b,
                                  const std::vector<Eigen::VectorXd>& points);

/// Semantic equality: log coefficients agree within tol at the standard
/// sample points.
bool forms_equal(const ProductForm& a, const ProductForm& b, double tol = 1e-10);

struct ResidualReport {
    double max_abs_difference = 0.0;
};

/// Residual of the two wedge groupings a^(b^c) vs (a^b)^c on log coefficients
/// at the given points. Diagnostic only; no pass/fail judgment.
ResidualReport check_associativity(const ProductForm& a, const ProductForm& b,
                                   const ProductForm& c,
                                   const std::vector<Eigen::VectorXd>& points);

/// Residual of q(a^b) vs (qa)^b opl (-1)^deg(a) odot (a^(qb)).
ResidualReport check_leibniz(const ProductForm& a, const ProductForm& b,
                             const std::vector<Eigen::VectorXd>& points);

}  // namespace prodcalc
