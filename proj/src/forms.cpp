#include "prodcalc/forms.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace prodcalc {

namespace {

bool is_constant(const Expr& e, double v) {
    return e.kind() == ExprKind::Constant && e.constant_value() == v;
}

const int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace

MultiIndex::MultiIndex(int dimension, std::vector<int> indices)
    : dimension_(dimension), indices_(std::move(indices)) {
    if (dimension_ < 0) throw Error("multi-index dimension must be >= 0");
    if (static_cast<int>(indices_.size()) > dimension_)
        throw Error("multi-index degree exceeds dimension");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 1 || indices_[i] > dimension_)
            throw Error("multi-index entry out of range 1..n");
        if (i > 0 && indices_[i] <= indices_[i - 1])
            throw Error("multi-index must be strictly increasing");
    }
}

std::string MultiIndex::to_string() const {
    if (indices_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i > 0) out += '^';
        out += "dx" + std::to_string(indices_[i]);
    }
    return out;
}

int sort_with_parity(std::vector<int>& indices) {
    // insertion sort, counting swaps; sizes here are at most 4 or 5
    int parity = 1;
    for (std::size_t i = 1; i < indices.size(); ++i) {
        for (std::size_t j = i; j > 0 && indices[j] < indices[j - 1]; --j) {
            std::swap(indices[j], indices[j - 1]);
            parity = -parity;
        }
    }
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] == indices[i - 1]) throw Error("repeated index in basis slot");
    return parity;
}

ProductForm::ProductForm(int dimension, int degree) : dimension_(dimension), degree_(degree) {
    if (dimension < 0 || degree < 0 || degree > dimension)
        throw Error("form degree must satisfy 0 <= p <= n");
}

Expr ProductForm::coefficient(const MultiIndex& key) const {
    auto it = table_.find(key);
    return it == table_.end() ? Expr(1.0) : it->second;
}

ProductForm& ProductForm::with_coefficient(std::vector<int> slot, Expr coeff) {
    const int parity = sort_with_parity(slot);
    if (static_cast<int>(slot.size()) != degree_)
        throw ShapeMismatch("slot degree does not match form degree");
    if (parity < 0) coeff = pow(coeff, Expr(-1.0));
    accumulate(MultiIndex(dimension_, std::move(slot)), coeff);
    return *this;
}

void ProductForm::accumulate(const MultiIndex& key, const Expr& coeff) {
    if (key.dimension() != dimension_ || key.degree() != degree_)
        throw ShapeMismatch("slot shape does not match form");
    auto it = table_.find(key);
    Expr merged = simplify(it == table_.end() ? coeff : it->second * coeff);
    if (is_constant(merged, 1.0)) {
        if (it != table_.end()) table_.erase(it);
        return;
    }
    if (it == table_.end())
        table_.emplace(key, std::move(merged));
    else
        it->second = std::move(merged);
}

LogForm::LogForm(int dimension, int degree) : dimension_(dimension), degree_(degree) {
    if (dimension < 0 || degree < 0 || degree > dimension)
        throw Error("form degree must satisfy 0 <= p <= n");
}

Expr LogForm::coefficient(const MultiIndex& key) const {
    auto it = table_.find(key);
    return it == table_.end() ? Expr(0.0) : it->second;
}

LogForm& LogForm::with_coefficient(std::vector<int> slot, Expr coeff) {
    const int parity = sort_with_parity(slot);
    if (static_cast<int>(slot.size()) != degree_)
        throw ShapeMismatch("slot degree does not match form degree");
    if (parity < 0) coeff = -coeff;
    accumulate(MultiIndex(dimension_, std::move(slot)), coeff);
    return *this;
}

void LogForm::accumulate(const MultiIndex& key, const Expr& coeff) {
    if (key.dimension() != dimension_ || key.degree() != degree_)
        throw ShapeMismatch("slot shape does not match form");
    auto it = table_.find(key);
    Expr merged = simplify(it == table_.end() ? coeff : it->second + coeff);
    if (is_constant(merged, 0.0)) {
        if (it != table_.end()) table_.erase(it);
        return;
    }
    if (it == table_.end())
        table_.emplace(key, std::move(merged));
    else
        it->second = std::move(merged);
}

ProductForm identity_form(int dimension, int degree) { return ProductForm(dimension, degree); }

ProductForm oplus(const ProductForm& a, const ProductForm& b) {
    if (a.dimension() != b.dimension() || a.degree() != b.degree())
        throw ShapeMismatch("oplus requires matching dimension and degree");
    ProductForm out = a;
    for (const auto& [key, coeff] : b.coefficients()) out.accumulate(key, coeff);
    return out;
}

ProductForm scalar_odot(double a, const ProductForm& f) {
    ProductForm out(f.dimension(), f.degree());
    for (const auto& [key, coeff] : f.coefficients())
        out.accumulate(key, pow(coeff, Expr(a)));
    return out;
}

ProductForm inverse(const ProductForm& f) { return scalar_odot(-1.0, f); }

ProductForm wedge_p(const ProductForm& a, const ProductForm& b) {
    if (a.dimension() != b.dimension())
        throw ShapeMismatch("wedge requires matching dimension");
    const int n = a.dimension();
    const int degree = a.degree() + b.degree();
    if (degree > n) throw DegreeOverflow("wedge degree exceeds dimension");
    ProductForm out(n, degree);
    for (const auto& [ka, ca] : a.coefficients()) {
        for (const auto& [kb, cb] : b.coefficients()) {
            const bool disjoint =
                std::none_of(kb.indices().begin(), kb.indices().end(), [&](int i) {
                    return std::binary_search(ka.indices().begin(), ka.indices().end(), i);
                });
            if (!disjoint) continue;  // a_k ^ a_k = 0, the pair contributes the factor 1
            std::vector<int> merged = ka.indices();
            merged.insert(merged.end(), kb.indices().begin(), kb.indices().end());
            const int parity = sort_with_parity(merged);
            Expr coeff = ca * cb;
            if (parity < 0) coeff = pow(coeff, Expr(-1.0));
            out.accumulate(MultiIndex(n, std::move(merged)), coeff);
        }
    }
    return out;
}

LogForm log_map(const ProductForm& f) {
    LogForm out(f.dimension(), f.degree());
    for (const auto& [key, coeff] : f.coefficients()) out.accumulate(key, ln(coeff));
    return out;
}

ProductForm exp_map(const LogForm& w) {
    ProductForm out(w.dimension(), w.degree());
    for (const auto& [key, coeff] : w.coefficients()) out.accumulate(key, exp(coeff));
    return out;
}

LogForm add(const LogForm& a, const LogForm& b) {
    if (a.dimension() != b.dimension() || a.degree() != b.degree())
        throw ShapeMismatch("add requires matching dimension and degree");
    LogForm out = a;
    for (const auto& [key, coeff] : b.coefficients()) out.accumulate(key, coeff);
    return out;
}

LogForm scale(double a, const LogForm& w) {
    LogForm out(w.dimension(), w.degree());
    for (const auto& [key, coeff] : w.coefficients()) out.accumulate(key, Expr(a) * coeff);
    return out;
}

LogForm exterior_derivative(const LogForm& w) {
    const int n = w.dimension();
    if (w.degree() >= n) throw DegreeOverflow("derivative degree exceeds dimension");
    LogForm out(n, w.degree() + 1);
    for (const auto& [key, coeff] : w.coefficients()) {
        for (int k = 1; k <= n; ++k) {
            const auto& idx = key.indices();
            if (std::binary_search(idx.begin(), idx.end(), k)) continue;
            Expr dc = diff(coeff, k);
            if (is_constant(dc, 0.0)) continue;
            const auto below = std::lower_bound(idx.begin(), idx.end(), k) - idx.begin();
            std::vector<int> slot = idx;
            slot.insert(slot.begin() + below, k);
            out.accumulate(MultiIndex(n, std::move(slot)),
                           below % 2 == 0 ? dc : simplify(-dc));
        }
    }
    return out;
}

ProductForm q_diff(const ProductForm& f) {
    return exp_map(exterior_derivative(log_map(f)));
}

std::vector<MultiIndex> enumerate_slots(int dimension, int degree) {
    std::vector<MultiIndex> out;
    std::vector<int> pick(static_cast<std::size_t>(degree));
    // classic combination enumeration in lexicographic order
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == degree) {
            out.emplace_back(dimension, pick);
            return;
        }
        for (int i = start; i <= dimension - (degree - depth) + 1; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 1, 0);
    return out;
}

std::map<MultiIndex, double> evaluate_form(const ProductForm& f, const Eigen::VectorXd& point) {
    if (point.size() != f.dimension())
        throw ShapeMismatch("evaluation point dimension does not match form");
    std::map<MultiIndex, double> out;
    for (const MultiIndex& key : enumerate_slots(f.dimension(), f.degree())) out[key] = 1.0;
    for (const auto& [key, coeff] : f.coefficients()) {
        const double v = eval(coeff, point);
        if (v <= 0.0)
            throw PositivityViolation("coefficient on " + key.to_string() +
                                      " evaluates to " + std::to_string(v));
        out[key] = v;
    }
    return out;
}

std::vector<Eigen::VectorXd> sample_points(int dimension, int count) {
    if (dimension > 8) throw Error("sample_points supports dimensions up to 8");
    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) {
        Eigen::VectorXd p(dimension);
        for (int d = 0; d < dimension; ++d) p[d] = 0.1 + 0.8 * halton(j, kHaltonPrimes[d]);
        points.push_back(std::move(p));
    }
    return points;
}

double max_log_difference(const ProductForm& a, const ProductForm& b,
                          const std::vector<Eigen::VectorXd>& points) {
    if (a.dimension() != b.dimension() || a.degree() != b.degree())
        throw ShapeMismatch("comparison requires matching dimension and degree");
    std::vector<MultiIndex> keys;
    for (const auto& [key, coeff] : a.coefficients()) keys.push_back(key);
    for (const auto& [key, coeff] : b.coefficients())
        if (a.coefficients().find(key) == a.coefficients().end()) keys.push_back(key);
    double worst = 0.0;
    for (const Eigen::VectorXd& p : points) {
        for (const MultiIndex& key : keys) {
            const double la = eval(ln(a.coefficient(key)), p);
            const double lb = eval(ln(b.coefficient(key)), p);
            worst = std::max(worst, std::abs(la - lb));
        }
    }
    return worst;
}

double max_coefficient_difference(const LogForm& a, const LogForm& b,
                                  const std::vector<Eigen::VectorXd>& points) {
    if (a.dimension() != b.dimension() || a.degree() != b.degree())
        throw ShapeMismatch("comparison requires matching dimension and degree");
    std::vector<MultiIndex> keys;
    for (const auto& [key, coeff] : a.coefficients()) keys.push_back(key);
    for (const auto& [key, coeff] : b.coefficients())
        if (a.coefficients().find(key) == a.coefficients().end()) keys.push_back(key);
    double worst = 0.0;
    for (const Eigen::VectorXd& p : points) {
        for (const MultiIndex& key : keys) {
            worst = std::max(worst,
                             std::abs(eval(a.coefficient(key), p) - eval(b.coefficient(key), p)));
        }
    }
    return worst;
}

bool forms_equal(const ProductForm& a, const ProductForm& b, double tol) {
    if (a.dimension() != b.dimension() || a.degree() != b.degree()) return false;
    return max_log_difference(a, b, sample_points(a.dimension())) <= tol;
}

ResidualReport check_associativity(const ProductForm& a, const ProductForm& b,
                                   const ProductForm& c,
                                   const std::vector<Eigen::VectorXd>& points) {
    const ProductForm left = wedge_p(a, wedge_p(b, c));
    const ProductForm right = wedge_p(wedge_p(a, b), c);
    return ResidualReport{max_log_difference(left, right, points)};
}

ResidualReport check_leibniz(const ProductForm& a, const ProductForm& b,
                             const std::vector<Eigen::VectorXd>& points) {
    const ProductForm left = q_diff(wedge_p(a, b));
    const double sign = a.degree() % 2 == 0 ? 1.0 : -1.0;
    const ProductForm right =
        oplus(wedge_p(q_diff(a), b), scalar_odot(sign, wedge_p(a, q_diff(b))));
    return ResidualReport{max_log_difference(left, right, points)};
}

}  // namespace prodcalc
