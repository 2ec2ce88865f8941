#include "prodcalc/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <utility>

namespace prodcalc {

Simplex::Simplex(int ambient_dimension, std::vector<Eigen::VectorXd> vertices)
    : ambient_(ambient_dimension), vertices_(std::move(vertices)) {
    if (ambient_ < 0) throw Error("ambient dimension must be >= 0");
    if (vertices_.empty()) throw Error("a simplex needs at least one vertex");
    for (const auto& v : vertices_)
        if (v.size() != ambient_) throw ShapeMismatch("vertex dimension does not match ambient");
}

double Simplex::gram_determinant() const {
    const int k = degree();
    if (k == 0) return 1.0;
    Eigen::MatrixXd edges(ambient_, k);
    for (int i = 1; i <= k; ++i) edges.col(i - 1) = vertex(i) - vertex(0);
    return (edges.transpose() * edges).determinant();
}

bool Simplex::operator==(const Simplex& other) const {
    if (ambient_ != other.ambient_ || vertices_.size() != other.vertices_.size()) return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] != other.vertices_[i]) return false;
    return true;
}

bool Simplex::operator<(const Simplex& other) const {
    if (ambient_ != other.ambient_) return ambient_ < other.ambient_;
    if (vertices_.size() != other.vertices_.size())
        return vertices_.size() < other.vertices_.size();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (int d = 0; d < ambient_; ++d) {
            if (vertices_[i][d] != other.vertices_[i][d])
                return vertices_[i][d] < other.vertices_[i][d];
        }
    }
    return false;
}

Chain::Chain(int ambient_dimension, int degree) : ambient_(ambient_dimension), degree_(degree) {
    if (degree_ < 0) throw Error("chain degree must be >= 0");
}

Chain& Chain::add(double weight, const Simplex& s) {
    if (s.ambient_dimension() != ambient_ || s.degree() != degree_)
        throw ShapeMismatch("chain terms must share ambient dimension and degree");
    if (weight == 0.0) return *this;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].simplex == s) {
            terms_[i].weight += weight;
            if (terms_[i].weight == 0.0) terms_.erase(terms_.begin() + static_cast<long>(i));
            return *this;
        }
    }
    terms_.push_back({weight, s});
    return *this;
}

Chain& Chain::add(const Chain& other) {
    for (const auto& [w, s] : other.terms()) add(w, s);
    return *this;
}

Simplex standard_simplex(int k) {
    if (k < 0) throw Error("simplex degree must be >= 0");
    std::vector<Eigen::VectorXd> vertices;
    vertices.reserve(static_cast<std::size_t>(k) + 1);
    vertices.push_back(Eigen::VectorXd::Zero(k));
    for (int i = 0; i < k; ++i) vertices.push_back(Eigen::VectorXd::Unit(k, i));
    return Simplex(k, std::move(vertices));
}

Chain boundary(const Simplex& s) {
    const int k = s.degree();
    if (k < 1) throw DegreeUnderflow("0-simplices have no boundary");
    Chain out(s.ambient_dimension(), k - 1);
    for (int skip = 0; skip <= k; ++skip) {
        std::vector<Eigen::VectorXd> face;
        face.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i <= k; ++i)
            if (i != skip) face.push_back(s.vertex(i));
        out.add(skip % 2 == 0 ? 1.0 : -1.0, Simplex(s.ambient_dimension(), std::move(face)));
    }
    return out;
}

Chain boundary_chain(const Chain& c) {
    if (c.degree() < 1) throw DegreeUnderflow("0-chains have no boundary");
    Chain out(c.ambient_dimension(), c.degree() - 1);
    for (const auto& [w, s] : c.terms()) {
        const Chain b = boundary(s);
        for (const auto& [fw, face] : b.terms()) out.add(w * fw, face);
    }
    return out;
}

SmoothMap::SmoothMap(int domain_dimension, int codomain_dimension, std::vector<Expr> components)
    : domain_(domain_dimension), codomain_(codomain_dimension), components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != codomain_)
        throw ShapeMismatch("a map into R^n needs n components");
    for (const Expr& c : components_)
        if (c.max_variable() > domain_)
            throw ShapeMismatch("map component references a variable beyond the domain");
}

SmoothMap affine_map(const Simplex& s) {
    if (!s.nondegenerate()) throw DegenerateSimplex("simplex edge vectors are dependent");
    const int k = s.degree();
    const int m = s.ambient_dimension();
    std::vector<Expr> components;
    components.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        Expr c(s.vertex(0)[j]);
        for (int i = 1; i <= k; ++i) c = c + Expr(s.vertex(i)[j] - s.vertex(0)[j]) * var(i);
        components.push_back(simplify(c));
    }
    return SmoothMap(k, m, std::move(components));
}

namespace {

Expr symbolic_determinant(const std::vector<std::vector<Expr>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return simplify(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    Expr det(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Expr>> minor;
        minor.reserve(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Expr> row;
            row.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        const Expr cof = m[0][j] * symbolic_determinant(minor);
        det = j % 2 == 0 ? det + cof : det - cof;
    }
    return simplify(det);
}

bool is_zero(const Expr& e) {
    return e.kind() == ExprKind::Constant && e.constant_value() == 0.0;
}

}  // namespace

LogForm pullback_log(const SmoothMap& phi, const LogForm& w) {
    if (w.dimension() != phi.codomain_dimension())
        throw ShapeMismatch("form dimension does not match map codomain");
    const int m = phi.domain_dimension();
    const int p = w.degree();
    if (p > m) throw ShapeMismatch("form degree exceeds map domain dimension");

    LogForm out(m, p);
    if (p == 0) {
        for (const auto& [key, coeff] : w.coefficients())
            out.accumulate(MultiIndex(m, {}), simplify(substitute(coeff, phi.components())));
        return out;
    }

    // jacobian[i][j] = d phi_{i+1} / d x_{j+1}, computed once
    const int n = phi.codomain_dimension();
    std::vector<std::vector<Expr>> jacobian(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        jacobian[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            jacobian[static_cast<std::size_t>(i)].push_back(
                diff(phi.components()[static_cast<std::size_t>(i)], j + 1));
    }

    for (const MultiIndex& domain_slot : enumerate_slots(m, p)) {
        for (const auto& [key, coeff] : w.coefficients()) {
            std::vector<std::vector<Expr>> minor(static_cast<std::size_t>(p));
            for (int r = 0; r < p; ++r) {
                auto& row = minor[static_cast<std::size_t>(r)];
                row.reserve(static_cast<std::size_t>(p));
                const int i = key.indices()[static_cast<std::size_t>(r)] - 1;
                for (int c = 0; c < p; ++c) {
                    const int j = domain_slot.indices()[static_cast<std::size_t>(c)] - 1;
                    row.push_back(
                        jacobian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                }
            }
            const Expr det = symbolic_determinant(minor);
            if (is_zero(det)) continue;
            out.accumulate(domain_slot, simplify(substitute(coeff, phi.components()) * det));
        }
    }
    return out;
}

ProductForm pullback_product(const SmoothMap& phi, const ProductForm& f) {
    return exp_map(pullback_log(phi, log_map(f)));
}

}  // namespace prodcalc
