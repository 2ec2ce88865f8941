#include "prodcalc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

namespace prodcalc {

struct Expr::Node {
    ExprKind kind;
    double value = 0.0;  // Constant
    int index = 0;       // Variable
    std::vector<Expr> children;
    int max_var = 0;
};

Expr::Expr(double value) {
    if (!std::isfinite(value)) throw Error("expression constant must be finite");
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::Constant;
    node->value = value;
    node_ = std::move(node);
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->index; }
int Expr::arity() const { return static_cast<int>(node_->children.size()); }
const Expr& Expr::child(int i) const { return node_->children[static_cast<std::size_t>(i)]; }
int Expr::max_variable() const { return node_->max_var; }

Expr make_expr(ExprKind kind, std::vector<Expr> children, double value, int index) {
    auto node = std::make_shared<Expr::Node>();
    node->kind = kind;
    node->value = value;
    node->index = index;
    node->max_var = index;
    for (const Expr& c : children) node->max_var = std::max(node->max_var, c.max_variable());
    node->children = std::move(children);
    return Expr(std::shared_ptr<const Expr::Node>(std::move(node)));
}

Expr var(int index) {
    if (index < 1) throw Error("variable index must be >= 1");
    return make_expr(ExprKind::Variable, {}, 0.0, index);
}

Expr operator+(const Expr& a, const Expr& b) { return make_expr(ExprKind::Add, {a, b}, 0.0, 0); }
Expr operator-(const Expr& a, const Expr& b) { return make_expr(ExprKind::Sub, {a, b}, 0.0, 0); }
Expr operator*(const Expr& a, const Expr& b) { return make_expr(ExprKind::Mul, {a, b}, 0.0, 0); }
Expr operator/(const Expr& a, const Expr& b) { return make_expr(ExprKind::Div, {a, b}, 0.0, 0); }
Expr operator-(const Expr& a) { return make_expr(ExprKind::Neg, {a}, 0.0, 0); }
Expr pow(const Expr& base, const Expr& exponent) {
    return make_expr(ExprKind::Pow, {base, exponent}, 0.0, 0);
}
Expr exp(const Expr& a) { return make_expr(ExprKind::Exp, {a}, 0.0, 0); }
Expr ln(const Expr& a) { return make_expr(ExprKind::Ln, {a}, 0.0, 0); }
Expr sin(const Expr& a) { return make_expr(ExprKind::Sin, {a}, 0.0, 0); }
Expr cos(const Expr& a) { return make_expr(ExprKind::Cos, {a}, 0.0, 0); }
Expr abs(const Expr& a) { return make_expr(ExprKind::Abs, {a}, 0.0, 0); }

bool same_structure(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ExprKind::Constant:
            return a.constant_value() == b.constant_value();
        case ExprKind::Variable:
            return a.variable_index() == b.variable_index();
        default:
            break;
    }
    if (a.arity() != b.arity()) return false;
    for (int i = 0; i < a.arity(); ++i)
        if (!same_structure(a.child(i), b.child(i))) return false;
    return true;
}

namespace {

bool is_integer_valued(double x) { return std::isfinite(x) && x == std::floor(x); }

double eval_pow(double base, double exponent) {
    if (base < 0.0 && !is_integer_valued(exponent))
        throw DomainError(DomainError::Cause::PowInvalid,
                          "negative base with non-integer exponent");
    if (base == 0.0 && exponent < 0.0)
        throw DomainError(DomainError::Cause::DivisionByZero, "zero base with negative exponent");
    return std::pow(base, exponent);
}

}  // namespace

double eval(const Expr& e, const Eigen::VectorXd& point) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.constant_value();
        case ExprKind::Variable: {
            const int i = e.variable_index();
            if (i > point.size())
                throw Error("evaluation point has " + std::to_string(point.size()) +
                            " coordinates but x" + std::to_string(i) + " is referenced");
            return point[i - 1];
        }
        case ExprKind::Add:
            return eval(e.child(0), point) + eval(e.child(1), point);
        case ExprKind::Sub:
            return eval(e.child(0), point) - eval(e.child(1), point);
        case ExprKind::Mul:
            return eval(e.child(0), point) * eval(e.child(1), point);
        case ExprKind::Div: {
            const double num = eval(e.child(0), point);
            const double den = eval(e.child(1), point);
            if (den == 0.0)
                throw DomainError(DomainError::Cause::DivisionByZero, "division by zero");
            return num / den;
        }
        case ExprKind::Pow:
            return eval_pow(eval(e.child(0), point), eval(e.child(1), point));
        case ExprKind::Neg:
            return -eval(e.child(0), point);
        case ExprKind::Exp:
            return std::exp(eval(e.child(0), point));
        case ExprKind::Ln: {
            const double u = eval(e.child(0), point);
            if (u <= 0.0)
                throw DomainError(DomainError::Cause::LnNonPositive,
                                  "ln of non-positive value " + std::to_string(u));
            return std::log(u);
        }
        case ExprKind::Sin:
            return std::sin(eval(e.child(0), point));
        case ExprKind::Cos:
            return std::cos(eval(e.child(0), point));
        case ExprKind::Abs:
            return std::abs(eval(e.child(0), point));
    }
    throw Error("unreachable expression kind");
}

Expr diff(const Expr& e, int v) {
    if (v < 1) throw Error("derivative variable index must be >= 1");
    switch (e.kind()) {
        case ExprKind::Constant:
            return Expr(0.0);
        case ExprKind::Variable:
            return Expr(e.variable_index() == v ? 1.0 : 0.0);
        case ExprKind::Add:
            return simplify(diff(e.child(0), v) + diff(e.child(1), v));
        case ExprKind::Sub:
            return simplify(diff(e.child(0), v) - diff(e.child(1), v));
        case ExprKind::Mul: {
            const Expr &a = e.child(0), &b = e.child(1);
            return simplify(diff(a, v) * b + a * diff(b, v));
        }
        case ExprKind::Div: {
            const Expr &a = e.child(0), &b = e.child(1);
            return simplify((diff(a, v) * b - a * diff(b, v)) / (b * b));
        }
        case ExprKind::Pow: {
            const Expr &u = e.child(0), &w = e.child(1);
            if (w.kind() == ExprKind::Constant)
                return simplify(w * pow(u, Expr(w.constant_value() - 1.0)) * diff(u, v));
            if (u.kind() == ExprKind::Constant)
                return simplify(pow(u, w) * ln(u) * diff(w, v));
            // general case: u^w * (w' ln u + w u'/u)
            return simplify(pow(u, w) * (diff(w, v) * ln(u) + w * diff(u, v) / u));
        }
        case ExprKind::Neg:
            return simplify(-diff(e.child(0), v));
        case ExprKind::Exp:
            return simplify(exp(e.child(0)) * diff(e.child(0), v));
        case ExprKind::Ln:
            return simplify(diff(e.child(0), v) / e.child(0));
        case ExprKind::Sin:
            return simplify(cos(e.child(0)) * diff(e.child(0), v));
        case ExprKind::Cos:
            return simplify(-(sin(e.child(0)) * diff(e.child(0), v)));
        case ExprKind::Abs: {
            // sign(u) * u', with sign encoded as u/|u|
            const Expr& u = e.child(0);
            return simplify(u / abs(u) * diff(u, v));
        }
    }
    throw Error("unreachable expression kind");
}

namespace {

bool is_const(const Expr& e, double v) {
    return e.kind() == ExprKind::Constant && e.constant_value() == v;
}

/// Fold a node whose children are all constants, if the operation is defined
/// there and yields a finite value; otherwise return nullopt.
std::optional<double> fold_constants(ExprKind kind, const std::vector<double>& c) {
    double r;
    switch (kind) {
        case ExprKind::Add: r = c[0] + c[1]; break;
        case ExprKind::Sub: r = c[0] - c[1]; break;
        case ExprKind::Mul: r = c[0] * c[1]; break;
        case ExprKind::Div:
            if (c[1] == 0.0) return std::nullopt;
            r = c[0] / c[1];
            break;
        case ExprKind::Pow:
            if (c[0] < 0.0 && !is_integer_valued(c[1])) return std::nullopt;
            if (c[0] == 0.0 && c[1] < 0.0) return std::nullopt;
            r = std::pow(c[0], c[1]);
            break;
        case ExprKind::Neg: r = -c[0]; break;
        case ExprKind::Exp: r = std::exp(c[0]); break;
        case ExprKind::Ln:
            if (c[0] <= 0.0) return std::nullopt;
            r = std::log(c[0]);
            break;
        case ExprKind::Sin: r = std::sin(c[0]); break;
        case ExprKind::Cos: r = std::cos(c[0]); break;
        case ExprKind::Abs: r = std::abs(c[0]); break;
        default: return std::nullopt;
    }
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

}  // namespace

Expr simplify(const Expr& e) {
    if (e.kind() == ExprKind::Constant || e.kind() == ExprKind::Variable) return e;

    std::vector<Expr> kids;
    kids.reserve(static_cast<std::size_t>(e.arity()));
    for (int i = 0; i < e.arity(); ++i) kids.push_back(simplify(e.child(i)));

    bool all_const = true;
    std::vector<double> vals;
    for (const Expr& k : kids) {
        if (k.kind() != ExprKind::Constant) {
            all_const = false;
            break;
        }
        vals.push_back(k.constant_value());
    }
    if (all_const) {
        if (auto r = fold_constants(e.kind(), vals)) return Expr(*r);
    }

    switch (e.kind()) {
        case ExprKind::Add:
            if (is_const(kids[0], 0.0)) return kids[1];
            if (is_const(kids[1], 0.0)) return kids[0];
            break;
        case ExprKind::Sub:
            if (is_const(kids[1], 0.0)) return kids[0];
            if (is_const(kids[0], 0.0)) return simplify(-kids[1]);
            break;
        case ExprKind::Mul:
            if (is_const(kids[0], 0.0) || is_const(kids[1], 0.0)) return Expr(0.0);
            if (is_const(kids[0], 1.0)) return kids[1];
            if (is_const(kids[1], 1.0)) return kids[0];
            break;
        case ExprKind::Div:
            if (is_const(kids[1], 1.0)) return kids[0];
            break;
        case ExprKind::Pow:
            if (is_const(kids[1], 1.0)) return kids[0];
            if (is_const(kids[1], 0.0)) return Expr(1.0);
            if (is_const(kids[0], 1.0)) return Expr(1.0);
            break;
        case ExprKind::Neg:
            if (kids[0].kind() == ExprKind::Neg) return kids[0].child(0);
            if (kids[0].kind() == ExprKind::Constant) return Expr(-kids[0].constant_value());
            break;
        case ExprKind::Ln:
            if (kids[0].kind() == ExprKind::Exp) return kids[0].child(0);
            break;
        case ExprKind::Exp:
            if (kids[0].kind() == ExprKind::Ln) return kids[0].child(0);
            break;
        default:
            break;
    }
    return make_expr(e.kind(), std::move(kids), 0.0, 0);
}

Expr substitute(const Expr& e, const std::vector<Expr>& components) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e;
        case ExprKind::Variable: {
            const std::size_t i = static_cast<std::size_t>(e.variable_index());
            if (i > components.size())
                throw Error("substitution provides " + std::to_string(components.size()) +
                            " components but x" + std::to_string(i) + " is referenced");
            return components[i - 1];
        }
        default: {
            std::vector<Expr> kids;
            kids.reserve(static_cast<std::size_t>(e.arity()));
            for (int i = 0; i < e.arity(); ++i) kids.push_back(substitute(e.child(i), components));
            return make_expr(e.kind(), std::move(kids), 0.0, 0);
        }
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

// binding strength: additive < multiplicative < power < unary minus < atom
enum Prec : int { PrecAdd = 1, PrecMul = 2, PrecPow = 3, PrecNeg = 4, PrecAtom = 5 };

int precedence_of(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Add:
        case ExprKind::Sub: return PrecAdd;
        case ExprKind::Mul:
        case ExprKind::Div: return PrecMul;
        case ExprKind::Pow: return PrecPow;
        case ExprKind::Neg: return PrecNeg;
        default: return PrecAtom;
    }
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_rec(const Expr& e, int parent_prec, std::string& out) {
    const int prec = precedence_of(e);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e.kind()) {
        case ExprKind::Constant: {
            const double v = e.constant_value();
            if (v < 0.0) {  // reparses as unary minus applied to the magnitude
                out += '-';
                out += format_double(-v);
            } else {
                out += format_double(v);
            }
            break;
        }
        case ExprKind::Variable:
            out += 'x';
            out += std::to_string(e.variable_index());
            break;
        case ExprKind::Add:
            print_rec(e.child(0), PrecAdd, out);
            out += " + ";
            print_rec(e.child(1), PrecAdd + 1, out);
            break;
        case ExprKind::Sub:
            print_rec(e.child(0), PrecAdd, out);
            out += " - ";
            print_rec(e.child(1), PrecAdd + 1, out);
            break;
        case ExprKind::Mul:
            print_rec(e.child(0), PrecMul, out);
            out += "*";
            print_rec(e.child(1), PrecMul + 1, out);
            break;
        case ExprKind::Div:
            print_rec(e.child(0), PrecMul, out);
            out += "/";
            print_rec(e.child(1), PrecMul + 1, out);
            break;
        case ExprKind::Pow:
            print_rec(e.child(0), PrecPow + 1, out);
            out += "^";
            print_rec(e.child(1), PrecPow, out);  // right associative
            break;
        case ExprKind::Neg:
            out += '-';
            print_rec(e.child(0), PrecNeg + 1, out);
            break;
        case ExprKind::Exp:
        case ExprKind::Ln:
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Abs: {
            static const char* names[] = {"exp", "ln", "sin", "cos", "abs"};
            out += names[static_cast<int>(e.kind()) - static_cast<int>(ExprKind::Exp)];
            out += '(';
            print_rec(e.child(0), PrecAdd, out);
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_rec(e, PrecAdd, out);
    return out;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, std::string message, std::string expected = "") {
        ParseDiagnostic d;
        d.offset = std::min(at, text.size());
        d.message = std::move(message);
        d.expected = std::move(expected);
        throw ParseError(std::move(d));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    Expr parse() {
        skip_ws();
        if (pos >= text.size()) fail(0, "empty expression", "expression");
        Expr e = parse_sum();
        skip_ws();
        if (pos < text.size()) fail(pos, "unexpected trailing input", "end of input");
        return e;
    }

    Expr parse_sum() {
        Expr e = parse_product();
        for (;;) {
            if (eat('+'))
                e = e + parse_product();
            else if (eat('-'))
                e = e - parse_product();
            else
                return e;
        }
    }

    Expr parse_product() {
        Expr e = parse_power();
        for (;;) {
            if (eat('*'))
                e = e * parse_power();
            else if (eat('/'))
                e = e / parse_power();
            else
                return e;
        }
    }

    // right associative; unary minus binds tighter, so -x1^2 is (-x1)^2
    Expr parse_power() {
        Expr base = parse_unary();
        if (eat('^')) return pow(base, parse_power());
        return base;
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        return parse_atom();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail(pos, "unexpected end of input", "operand");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_sum();
            if (!eat(')')) fail(pos, "unbalanced parenthesis", ")");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail(pos, std::string("unexpected character '") + c + "'", "operand");
    }

    Expr parse_number() {
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            } else {
                pos = mark;  // bare 'e' after a literal is the constant, not an exponent
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text.data() + start, text.data() + pos, value);
        if (res.ec != std::errc() || res.ptr != text.data() + pos)
            fail(start, "malformed numeric literal", "number");
        return Expr(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        const std::string_view name = text.substr(start, pos - start);
        if (name == "pi") return Expr(M_PI);
        if (name == "e") return Expr(M_E);
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int index = 0;
            std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (index < 1) fail(start, "variable index must be >= 1", "x1..xN");
            return var(index);
        }
        static const std::pair<std::string_view, Expr (*)(const Expr&)> functions[] = {
            {"exp", [](const Expr& a) { return exp(a); }},
            {"ln", [](const Expr& a) { return ln(a); }},
            {"sin", [](const Expr& a) { return sin(a); }},
            {"cos", [](const Expr& a) { return cos(a); }},
            {"abs", [](const Expr& a) { return abs(a); }},
        };
        for (const auto& [fname, make] : functions) {
            if (name == fname) {
                if (!eat('(')) fail(pos, "function call requires parentheses", "(");
                Expr arg = parse_sum();
                if (!eat(')')) fail(pos, "unbalanced parenthesis", ")");
                return make(arg);
            }
        }
        fail(start, "unknown identifier '" + std::string(name) + "'",
             "variable, function, pi, or e");
    }
};

}  // namespace

Expr parse_expr(std::string_view text) {
    Parser p{text};
    return p.parse();
}

}  // namespace prodcalc
