#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "prodcalc/errors.hpp"

namespace prodcalc {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Sin, Cos, Abs };

/// Immutable scalar expression over variables x1..xN. Copies share structure;
/// every operation builds a new tree, so values are safe to share across threads.
class Expr {
public:
    Expr() : Expr(0.0) {}
    Expr(double value);  // NOLINT: implicit so constants mix freely with Expr arithmetic

    ExprKind kind() const;
    double constant_value() const;  // Constant nodes only
    int variable_index() const;     // Variable nodes only
    int arity() const;
    const Expr& child(int i) const;

    /// Highest variable index referenced anywhere in the tree; 0 for constant trees.
    int max_variable() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;

    friend Expr make_expr(ExprKind kind, std::vector<Expr> children, double value, int index);
};

Expr var(int index);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr abs(const Expr& a);

/// Structural (tree-shape) equality; constants compare by value.
bool same_structure(const Expr& a, const Expr& b);

/// IEEE-double evaluation. `point[i-1]` is the value of variable xi, so the
/// point must have at least max_variable() entries.
double eval(const Expr& e, const Eigen::VectorXd& point);

/// Symbolic partial derivative with respect to variable xvar. The derivative
/// of abs(u) follows the sign(u)*u' convention, so evaluating it at a kink of
/// u reports a division by zero rather than a value.
Expr diff(const Expr& e, int var);

/// Constant folding and identity elimination (u+0, u*1, u^1, 0*u, --u,
/// ln(exp(u)), exp(ln(u)), ...). Semantics are preserved at every point where
/// the input is evaluable.
Expr simplify(const Expr& e);

/// Replace variable xi by components[i-1]; the result lives in the
/// components' variable space. Every variable of e must have a component.
Expr substitute(const Expr& e, const std::vector<Expr>& components);

/// Canonical text form; parse_expr(to_string(e)) reproduces an equivalent tree.
std::string to_string(const Expr& e);

/// Parse the expression grammar: + - * / ^ (right assoc), unary minus binding
/// tighter than ^, functions exp/ln/sin/cos/abs, variables x1..xN, literals,
/// and the keywords pi and e. Throws ParseError with a position on bad input.
Expr parse_expr(std::string_view text);

}  // namespace prodcalc
