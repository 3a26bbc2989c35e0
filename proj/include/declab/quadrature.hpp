// Quadrature on the reference m-simplex.
//
// Conical product (collapsed coordinate) rules built from Gauss-Jacobi
// points. Weights are positive and any exactness degree is available.

#ifndef DECLAB_QUADRATURE_HPP
#define DECLAB_QUADRATURE_HPP

#include <Eigen/Dense>

namespace declab {

struct QuadratureRule {
    int dim = 0;
    int degree = 0;
    /// Barycentric coordinates of the nodes, (dim+1) x count.
    Eigen::MatrixXd nodes;
    /// Normalized to sum to 1 (multiply by the simplex volume).
    Eigen::VectorXd weights;
};

/// Gauss-Jacobi nodes and normalized weights on [0, 1] for the weight
/// (1-x)^alpha, exact for polynomials of degree 2 * points - 1.
void gauss_jacobi01(int points, double alpha, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Rule on the m-simplex integrating every polynomial of total degree <= degree
/// exactly. Rules are cached per (m, degree).
const QuadratureRule& simplex_quadrature(int m, int degree);

} // namespace declab

#endif // DECLAB_QUADRATURE_HPP
