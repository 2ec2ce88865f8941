#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "prodcalc/expr.hpp"
#include "prodcalc/forms.hpp"
#include "prodcalc/geometry.hpp"
#include "prodcalc/mulcalc.hpp"
#include "prodcalc/quad.hpp"
#include "prodcalc/stokes.hpp"

using json = nlohmann::json;
using namespace prodcalc;

namespace {

// exit codes: 0 ok, 1 usage, 2 domain/math, 3 convergence failure
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMath = 2;
constexpr int kExitConvergence = 3;

struct GlobalOptions {
    bool json_output = false;
    int order = 16;
    double tol = 1e-10;
    int budget = 1 << 14;

    QuadratureRule rule() const { return QuadratureRule::adaptive(order, tol, budget); }
};

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_complex(const ComplexScalar& z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

json complex_payload(const ComplexScalar& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------
// small argument grammars: points, simplices, chains, form specs
// ---------------------------------------------------------------------------

[[noreturn]] void spec_fail(std::size_t offset, const std::string& message,
                            const std::string& expected) {
    ParseDiagnostic d;
    d.offset = offset;
    d.message = message;
    d.expected = expected;
    throw ParseError(std::move(d));
}

struct SpecCursor {
    const std::string& text;
    std::size_t pos = 0;

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
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    double number() {
        skip_ws();
        const char* begin = text.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) spec_fail(pos, "expected a number", "number");
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }
};

Eigen::VectorXd parse_tuple(SpecCursor& cur) {
    if (!cur.eat('(')) spec_fail(cur.pos, "expected a point", "(");
    std::vector<double> coords;
    coords.push_back(cur.number());
    while (cur.eat(',')) coords.push_back(cur.number());
    if (!cur.eat(')')) spec_fail(cur.pos, "unterminated point", ")");
    Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
    return v;
}

Eigen::VectorXd parse_point(const std::string& text) {
    SpecCursor cur{text};
    cur.skip_ws();
    Eigen::VectorXd v;
    if (cur.pos < text.size() && text[cur.pos] == '(') {
        v = parse_tuple(cur);
    } else {
        std::vector<double> coords;
        coords.push_back(cur.number());
        while (cur.eat(',')) coords.push_back(cur.number());
        v.resize(static_cast<Eigen::Index>(coords.size()));
        for (std::size_t i = 0; i < coords.size(); ++i)
            v[static_cast<Eigen::Index>(i)] = coords[i];
    }
    if (!cur.done()) spec_fail(cur.pos, "trailing input after point", "end of input");
    return v;
}

Simplex parse_simplex(SpecCursor& cur) {
    if (!cur.eat('[')) spec_fail(cur.pos, "expected a simplex", "[");
    std::vector<Eigen::VectorXd> vertices;
    vertices.push_back(parse_tuple(cur));
    while (cur.eat(',')) vertices.push_back(parse_tuple(cur));
    if (!cur.eat(']')) spec_fail(cur.pos, "unterminated simplex", "]");
    const int ambient = static_cast<int>(vertices[0].size());
    for (const auto& v : vertices)
        if (v.size() != ambient) spec_fail(cur.pos, "vertices have mixed dimensions", "");
    return Simplex(ambient, std::move(vertices));
}

/// "w1*S1 + w2*S2" where each S is "[(..),(..),...]"; weights default to 1.
Chain parse_chain(const std::string& text) {
    SpecCursor cur{text};
    std::vector<std::pair<double, Simplex>> terms;
    double pending_sign = 1.0;
    for (;;) {
        cur.skip_ws();
        double weight = pending_sign;
        if (cur.pos < text.size() && text[cur.pos] != '[') {
            weight *= cur.number();
            if (!cur.eat('*')) spec_fail(cur.pos, "expected '*' between weight and simplex", "*");
        }
        terms.emplace_back(weight, parse_simplex(cur));
        if (cur.done()) break;
        if (cur.eat('+'))
            pending_sign = 1.0;
        else if (cur.eat('-'))
            pending_sign = -1.0;
        else
            spec_fail(cur.pos, "expected '+' or '-' between chain terms", "+ or -");
    }
    Chain chain(terms[0].second.ambient_dimension(), terms[0].second.degree());
    for (auto& [w, s] : terms) chain.add(w, s);
    return chain;
}

/// Semicolon-separated "slot:expr" pairs; slot is "0" or "dxI^dxJ^..." with
/// strictly increasing indices. An empty spec is the degree-0 identity form.
ProductForm parse_form_spec(const std::string& text, int dimension) {
    std::vector<std::pair<std::vector<int>, Expr>> entries;
    std::size_t start = 0;
    bool any = false;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string entry = text.substr(start, end - start);
        const std::size_t entry_offset = start;
        start = end + 1;
        std::size_t b = entry.find_first_not_of(" \t");
        std::size_t e = entry.find_last_not_of(" \t");
        if (b == std::string::npos) {
            if (end == text.size()) break;
            continue;
        }
        entry = entry.substr(b, e - b + 1);
        any = true;

        const std::size_t colon = entry.find(':');
        if (colon == std::string::npos)
            spec_fail(entry_offset, "form entry needs 'slot:expr'", ":");
        const std::string slot_text = entry.substr(0, colon);
        const std::string expr_text = entry.substr(colon + 1);

        std::vector<int> slot;
        if (slot_text != "0") {
            SpecCursor cur{slot_text};
            for (;;) {
                cur.skip_ws();
                if (cur.pos + 2 > slot_text.size() || slot_text[cur.pos] != 'd' ||
                    slot_text[cur.pos + 1] != 'x')
                    spec_fail(entry_offset + cur.pos, "expected dx<index>", "dxI");
                cur.pos += 2;
                const double idx = cur.number();
                if (idx < 1 || idx != static_cast<int>(idx))
                    spec_fail(entry_offset + cur.pos, "slot index must be a positive integer",
                              "dxI");
                if (!slot.empty() && static_cast<int>(idx) <= slot.back())
                    spec_fail(entry_offset + cur.pos, "slot indices must increase strictly",
                              "increasing dx indices");
                slot.push_back(static_cast<int>(idx));
                if (!cur.eat('^')) break;
            }
            if (!cur.done())
                spec_fail(entry_offset + cur.pos, "trailing input in slot", "end of slot");
        }
        for (const auto& [existing, coeff] : entries)
            if (existing == slot) spec_fail(entry_offset, "duplicate slot in form spec", "");
        entries.emplace_back(std::move(slot), parse_expr(expr_text));
        if (end == text.size()) break;
    }

    if (!any) return identity_form(dimension, 0);
    const int degree = static_cast<int>(entries[0].first.size());
    for (const auto& [slot, coeff] : entries)
        if (static_cast<int>(slot.size()) != degree)
            spec_fail(0, "all slots in a form must share one degree", "");
    ProductForm f(dimension, degree);
    for (auto& [slot, coeff] : entries) f.with_coefficient(slot, coeff);
    return f;
}

json coefficient_table(const ProductForm& f) {
    json table = json::object();
    for (const auto& [key, coeff] : f.coefficients()) table[key.to_string()] = to_string(coeff);
    return table;
}

// ---------------------------------------------------------------------------
// envelopes
// ---------------------------------------------------------------------------

void emit_ok(const GlobalOptions& global, const std::string& command, const json& result,
             const std::string& human) {
    if (global.json_output) {
        json envelope = {{"command", command},
                         {"status", "ok"},
                         {"result", result},
                         {"diagnostics", json::array()}};
        std::cout << envelope.dump() << "\n";
    } else {
        std::cout << human << "\n";
    }
}

struct Failure {
    std::string type;
    int exit_code;
    json details;
};

Failure classify(const std::exception& e) {
    if (auto* p = dynamic_cast<const ParseError*>(&e)) {
        json details = {{"offset", p->diagnostic.offset}, {"expected", p->diagnostic.expected}};
        return {"ParseError", kExitUsage, details};
    }
    if (dynamic_cast<const BudgetExhausted*>(&e)) return {"BudgetExhausted", kExitConvergence, {}};
    if (dynamic_cast<const NonIntegrableSingularity*>(&e))
        return {"NonIntegrableSingularity", kExitConvergence, {}};
    if (dynamic_cast<const DomainError*>(&e)) return {"DomainError", kExitMath, {}};
    if (dynamic_cast<const NonPositiveIntegrand*>(&e))
        return {"NonPositiveIntegrand", kExitMath, {}};
    if (dynamic_cast<const DegeneratePartition*>(&e)) return {"DegeneratePartition", kExitMath, {}};
    if (dynamic_cast<const DegenerateSign*>(&e)) return {"DegenerateSign", kExitMath, {}};
    if (dynamic_cast<const PositivityViolation*>(&e)) return {"PositivityViolation", kExitMath, {}};
    if (dynamic_cast<const DegenerateSimplex*>(&e)) return {"DegenerateSimplex", kExitMath, {}};
    if (dynamic_cast<const ShapeMismatch*>(&e)) return {"ShapeMismatch", kExitMath, {}};
    if (dynamic_cast<const DegreeOverflow*>(&e)) return {"DegreeOverflow", kExitMath, {}};
    if (dynamic_cast<const DegreeUnderflow*>(&e)) return {"DegreeUnderflow", kExitMath, {}};
    return {"Error", kExitMath, {}};
}

int emit_error(const GlobalOptions& global, const std::string& command,
               const std::exception& e) {
    const Failure failure = classify(e);
    if (global.json_output) {
        json error = {{"type", failure.type}, {"message", e.what()}};
        if (!failure.details.is_null())
            for (auto& [k, v] : failure.details.items()) error[k] = v;
        json envelope = {{"command", command},
                         {"status", "error"},
                         {"error", error},
                         {"diagnostics", json::array()}};
        std::cout << envelope.dump() << "\n";
    } else {
        std::cerr << "error (" << failure.type << "): " << e.what() << "\n";
    }
    return failure.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"product-calculus toolkit: multiplicative derivatives and integrals, product "
                 "forms, and the boundary/differential identity"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_flag("--json", global.json_output, "emit one JSON envelope on stdout");
    app.add_option("--order", global.order, "Gauss nodes per quadrature cell")
        ->capture_default_str();
    app.add_option("--tol", global.tol, "adaptive quadrature relative tolerance")
        ->capture_default_str();
    app.add_option("--budget", global.budget, "adaptive quadrature cell budget")
        ->capture_default_str();

    std::string active_command = "";

    struct {
        std::string f;
        double x = 0.0;
    } pderiv;
    auto* cmd_pderiv = app.add_subcommand("pderiv", "multiplicative derivative of f at x");
    cmd_pderiv->add_option("--f", pderiv.f, "expression in x1")->required();
    cmd_pderiv->add_option("--x", pderiv.x, "evaluation point")->required();
    cmd_pderiv->callback([&] {
        active_command = "pderiv";
        const double value = product_derivative(parse_expr(pderiv.f), pderiv.x);
        emit_ok(global, active_command, value, format_double(value));
    });

    struct {
        std::string f;
        double a = 0.0, b = 1.0;
        bool signed_mode = false;
    } pint;
    auto* cmd_pint = app.add_subcommand("pint", "geometric (product) integral of f over [a,b]");
    cmd_pint->add_option("--f", pint.f, "expression in x1")->required();
    cmd_pint->add_option("--a", pint.a, "lower bound")->required();
    cmd_pint->add_option("--b", pint.b, "upper bound")->required();
    cmd_pint->add_flag("--signed", pint.signed_mode,
                       "allow sign changes; the result is then complex");
    cmd_pint->callback([&] {
        active_command = "pint";
        const Expr f = parse_expr(pint.f);
        const Interval I(pint.a, pint.b);
        if (pint.signed_mode) {
            const SignProfile profile = sign_profile(f, I);
            const ComplexScalar z = geometric_integral_signed(f, I, global.rule(), profile);
            emit_ok(global, active_command, complex_payload(z), format_complex(z));
        } else {
            const double value = geometric_integral(f, I, global.rule());
            emit_ok(global, active_command, value, format_double(value));
        }
    });

    struct {
        std::string g;
        double a = 0.0, b = 1.0;
    } vint;
    auto* cmd_vint = app.add_subcommand("vint", "Volterra product integral of g over [a,b]");
    cmd_vint->add_option("--g", vint.g, "expression in x1")->required();
    cmd_vint->add_option("--a", vint.a, "lower bound")->required();
    cmd_vint->add_option("--b", vint.b, "upper bound")->required();
    cmd_vint->callback([&] {
        active_command = "vint";
        const double value = volterra_integral(parse_expr(vint.g), Interval(vint.a, vint.b),
                                               global.rule());
        emit_ok(global, active_command, value, format_double(value));
    });

    struct {
        std::string f;
        double a = 0.0, b = 1.0;
    } geomean;
    auto* cmd_geomean = app.add_subcommand("geomean", "geometric mean of f over [a,b]");
    cmd_geomean->add_option("--f", geomean.f, "expression in x1")->required();
    cmd_geomean->add_option("--a", geomean.a, "lower bound")->required();
    cmd_geomean->add_option("--b", geomean.b, "upper bound")->required();
    cmd_geomean->callback([&] {
        active_command = "geomean";
        const Expr f = parse_expr(geomean.f);
        const Interval I(geomean.a, geomean.b);
        const SignProfile profile = sign_profile(f, I);
        const ComplexScalar z = geometric_mean(f, I, global.rule(), profile);
        emit_ok(global, active_command, complex_payload(z), format_complex(z));
    });

    struct {
        std::string form;
        int n = 0;
        std::string at;
    } qdiff;
    auto* cmd_qdiff = app.add_subcommand("qdiff", "q differential of a product form");
    cmd_qdiff->add_option("--form", qdiff.form, "form spec, e.g. \"dx1:exp(x1*x2)\"")->required();
    cmd_qdiff->add_option("--n", qdiff.n, "ambient dimension")->required();
    cmd_qdiff->add_option("--at", qdiff.at, "also evaluate the coefficients at this point");
    cmd_qdiff->callback([&] {
        active_command = "qdiff";
        const ProductForm f = parse_form_spec(qdiff.form, qdiff.n);
        const ProductForm qf = q_diff(f);
        json result = {{"dimension", qf.dimension()},
                       {"degree", qf.degree()},
                       {"coefficients", coefficient_table(qf)}};
        std::string human;
        for (const auto& [key, coeff] : qf.coefficients())
            human += key.to_string() + ": " + to_string(coeff) + "\n";
        if (qf.coefficients().empty()) human = "identity form (all coefficients 1)\n";
        if (!qdiff.at.empty()) {
            const Eigen::VectorXd point = parse_point(qdiff.at);
            json values = json::object();
            for (const auto& [key, value] : evaluate_form(qf, point))
                values[key.to_string()] = value;
            result["values"] = values;
            human += "at " + qdiff.at + ":\n";
            for (const auto& [key, value] : evaluate_form(qf, point))
                human += key.to_string() + " = " + format_double(value) + "\n";
        }
        if (!human.empty() && human.back() == '\n') human.pop_back();
        emit_ok(global, active_command, result, human);
    });

    struct {
        std::string left, right;
        int n = 0;
    } wedge;
    auto* cmd_wedge = app.add_subcommand("wedge", "product wedge of two forms");
    cmd_wedge->add_option("--left", wedge.left, "form spec")->required();
    cmd_wedge->add_option("--right", wedge.right, "form spec")->required();
    cmd_wedge->add_option("--n", wedge.n, "ambient dimension")->required();
    cmd_wedge->callback([&] {
        active_command = "wedge";
        const ProductForm result =
            wedge_p(parse_form_spec(wedge.left, wedge.n), parse_form_spec(wedge.right, wedge.n));
        json payload = {{"dimension", result.dimension()},
                        {"degree", result.degree()},
                        {"coefficients", coefficient_table(result)}};
        std::string human;
        for (const auto& [key, coeff] : result.coefficients())
            human += key.to_string() + ": " + to_string(coeff) + "\n";
        if (result.coefficients().empty()) human = "identity form (all coefficients 1)\n";
        human.pop_back();
        emit_ok(global, active_command, payload, human);
    });

    struct {
        std::string form, chain;
        int n = 0;
    } stokes;
    auto* cmd_stokes =
        app.add_subcommand("stokes", "compare the boundary-side and q-side product integrals");
    cmd_stokes->add_option("--form", stokes.form, "form spec")->required();
    cmd_stokes->add_option("--n", stokes.n, "ambient dimension")->required();
    cmd_stokes->add_option("--chain", stokes.chain, "chain spec, e.g. \"[(0,0),(1,0),(0,1)]\"")
        ->required();
    cmd_stokes->callback([&] {
        active_command = "stokes";
        const ProductForm f = parse_form_spec(stokes.form, stokes.n);
        const Chain c = parse_chain(stokes.chain);
        const StokesReport report = stokes_check(f, c, global.rule());
        json rows = json::array();
        for (const auto& row : report.per_simplex)
            rows.push_back({{"weight", row.weight},
                            {"boundary_log", row.boundary_log},
                            {"interior_log", row.interior_log}});
        json payload = {{"lhs", report.lhs},
                        {"rhs", report.rhs},
                        {"log_discrepancy", report.log_discrepancy},
                        {"per_simplex", rows}};
        std::string human = "lhs = " + format_double(report.lhs) +
                            "\nrhs = " + format_double(report.rhs) +
                            "\nlog discrepancy = " + format_double(report.log_discrepancy);
        emit_ok(global, active_command, payload, human);
    });

    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        return emit_error(global, active_command.empty() ? "unknown" : active_command, e);
    }
    return kExitOk;
}
