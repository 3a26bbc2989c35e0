// Cochains and the discrete operators d, *, delta and the Hodge Laplacian.
//
// Degree conventions: a primal k-cochain has one value per k-simplex; a dual
// j-cochain has one value per dual cell *tau with tau an (n-j)-simplex.

#ifndef DECLAB_DEC_OPS_HPP
#define DECLAB_DEC_OPS_HPP

#include "declab/dual_mesh.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <tuple>

namespace declab {

enum class Side { primal, dual };

const char* to_string(Side s);

struct Space {
    int degree = 0;
    Side side = Side::primal;
    int n = 0;

    /// Dimension of the primal simplices indexing this space.
    int simplex_dim() const { return side == Side::primal ? degree : n - degree; }
    bool operator==(const Space&) const = default;
};

std::string to_string(const Space& s);

struct Cochain {
    Space space;
    Eigen::VectorXd values;
};

Cochain zero_cochain(const SimplicialComplex& complex, int k, Side side = Side::primal);

class LinearOperator {
public:
    LinearOperator() = default;

    static LinearOperator sparse(Space from, Space to, Eigen::SparseMatrix<double> m);
    /// Diagonal operator num ./ den. Keeping both factors lets a composition of
    /// diagonals cancel exactly.
    static LinearOperator diagonal(Space from, Space to, Eigen::VectorXd num, Eigen::VectorXd den);

    const Space& domain() const { return from_; }
    const Space& codomain() const { return to_; }
    Eigen::Index rows() const;
    Eigen::Index cols() const;
    bool is_diagonal() const { return diag_; }

    Eigen::SparseMatrix<double> matrix() const;
    /// Diagonal entries (diagonal operators only).
    Eigen::VectorXd diagonal() const;
    const Eigen::VectorXd& numerators() const { return num_; }
    const Eigen::VectorXd& denominators() const { return den_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Cochain operator*(const Cochain& c) const;
    LinearOperator operator*(const LinearOperator& rhs) const;
    LinearOperator operator+(const LinearOperator& rhs) const;
    LinearOperator scaled(double s) const;

    /// Inverse of a diagonal operator; a zero entry throws singular_star_error.
    LinearOperator inverse() const;
    /// Like inverse(), with zero entries mapped to zero.
    LinearOperator pseudo_inverse() const;

private:
    Space from_, to_;
    bool diag_ = false;
    Eigen::SparseMatrix<double> m_;
    Eigen::VectorXd num_, den_;
};

/// Side::primal: primal k -> dual n-k, entries |*tau| / |tau|.
/// Side::dual: dual k -> primal n-k, entries (-1)^{k(n-k)} |tau| / |*tau|.
LinearOperator hodge_star(const DualComplex& dual, int k, Side side = Side::primal);

/// Primal: d_k = transpose of boundary_matrix(k+1). Dual: transpose of the dual
/// boundary, which equals (-1)^{n-k} boundary_matrix(n-k) on dual k-cochains.
LinearOperator exterior_derivative(const SimplicialComplex& complex, int k, Side side = Side::primal);

enum class Inversion { strict, pseudo };

/// delta_k = (-1)^k (*_{k-1})^{-1} d_dual *_k, mapping primal k to primal k-1
/// (k >= 1). It is the adjoint of d_{k-1} in the discrete inner product.
LinearOperator codifferential(const DualComplex& dual, int k, Inversion inv = Inversion::strict);

/// delta d + d delta on primal k-cochains (delta d for k = 0).
LinearOperator laplace(const DualComplex& dual, int k, Inversion inv = Inversion::strict);

double inner_product(const DualComplex& dual, const Cochain& a, const Cochain& b);
double discrete_l2(const DualComplex& dual, const Cochain& c);
double discrete_l2_dual(const DualComplex& dual, const Cochain& c);
double max_norm(const Cochain& c);
/// ||d c||_h for a primal cochain.
double h1_seminorm(const DualComplex& dual, const Cochain& c);

/// Header `op <name> k=<k> side=<side> rows cols`, then `row col value` triplets.
void write_operator(std::ostream& out, const std::string& name, const LinearOperator& op);

/// Per-mesh operator cache.
class DecOperators {
public:
    explicit DecOperators(std::shared_ptr<const DualComplex> dual);

    const DualComplex& dual() const { return *dual_; }
    const LinearOperator& star(int k, Side side = Side::primal);
    const LinearOperator& d(int k, Side side = Side::primal);
    const LinearOperator& delta(int k, Inversion inv = Inversion::strict);
    const LinearOperator& laplacian(int k, Inversion inv = Inversion::strict);

private:
    std::shared_ptr<const DualComplex> dual_;
    std::map<std::tuple<char, int, int>, LinearOperator> cache_;
};

} // namespace declab

#endif // DECLAB_DEC_OPS_HPP
