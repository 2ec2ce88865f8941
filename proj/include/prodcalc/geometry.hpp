#pragma once

#include <Eigen/Core>

#include <vector>

#include "prodcalc/expr.hpp"
#include "prodcalc/forms.hpp"

namespace prodcalc {

/// Ordered tuple of k+1 points in R^m; the vertex order is the orientation.
class Simplex {
public:
    Simplex(int ambient_dimension, std::vector<Eigen::VectorXd> vertices);

    int ambient_dimension() const { return ambient_; }
    int degree() const { return static_cast<int>(vertices_.size()) - 1; }
    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const Eigen::VectorXd& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }

    /// det(E^T E) for the edge matrix E = [P_i - P_0]; zero for 0-simplices is
    /// treated as 1 (a point is never degenerate).
    double gram_determinant() const;
    bool nondegenerate(double tol = 1e-12) const { return gram_determinant() > tol; }

    bool operator==(const Simplex& other) const;
    bool operator<(const Simplex& other) const;  // lexicographic on coordinates

private:
    int ambient_;
    std::vector<Eigen::VectorXd> vertices_;
};

struct WeightedSimplex {
    double weight;
    Simplex simplex;
};

/// Real-weighted formal sum of simplices of one degree. Terms with identical
/// ordered vertex lists combine by weight addition; zero-weight terms drop.
/// Reordered duplicates are kept separate.
class Chain {
public:
    Chain(int ambient_dimension, int degree);

    int ambient_dimension() const { return ambient_; }
    int degree() const { return degree_; }
    const std::vector<WeightedSimplex>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    Chain& add(double weight, const Simplex& s);
    Chain& add(const Chain& other);

private:
    int ambient_;
    int degree_;
    std::vector<WeightedSimplex> terms_;
};

/// Vertices R_0 = origin, R_i = i-th unit point, ambient dimension k.
Simplex standard_simplex(int k);

/// Signed sum of faces: sum_i (-1)^i (vertices with P_i omitted).
Chain boundary(const Simplex& s);

/// Linear extension of the boundary over chain weights.
Chain boundary_chain(const Chain& c);

/// Smooth map R^m -> R^n given by n component expressions in m variables.
class SmoothMap {
public:
    SmoothMap(int domain_dimension, int codomain_dimension, std::vector<Expr> components);

    int domain_dimension() const { return domain_; }
    int codomain_dimension() const { return codomain_; }
    const std::vector<Expr>& components() const { return components_; }

private:
    int domain_;
    int codomain_;
    std::vector<Expr> components_;
};

/// Affine parametrization x(t) = P_0 + sum t_i (P_i - P_0) carrying the
/// standard k-simplex onto s. Throws DegenerateSimplex when the edge vectors
/// are dependent.
SmoothMap affine_map(const Simplex& s);

/// Pullback of a classical p-form: coefficients compose with the map and pick
/// up p-by-p Jacobian minor determinants, all computed symbolically.
LogForm pullback_log(const SmoothMap& phi, const LogForm& w);

/// Pullback of a product form: exp_map(pullback_log(phi, log_map(f))).
ProductForm pullback_product(const SmoothMap& phi, const ProductForm& f);

}  // namespace prodcalc
