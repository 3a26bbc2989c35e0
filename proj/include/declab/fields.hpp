// Smooth differential forms on R^n and their discretizations: the deRham map
// onto primal simplices and dual cells, Whitney interpolation, and the Hodge
// star consistency probe.
//
// A k-form is evaluated as its coefficient vector over the increasing index
// tuples I of {0..n-1}, in lexicographic order: omega = sum_I omega_I dx_I.

#ifndef DECLAB_FIELDS_HPP
#define DECLAB_FIELDS_HPP

#include "declab/dec_ops.hpp"
#include "declab/quadrature.hpp"

#include <functional>
#include <vector>

namespace declab {

using Tuple = std::vector<int>;

/// Increasing k-tuples of {0..n-1} in lexicographic order.
const std::vector<Tuple>& increasing_tuples(int n, int k);

struct FormField {
    int degree = 0;
    int dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

/// Scalar function wrapped as a 0-form.
FormField scalar_field(int n, std::function<double(const Eigen::VectorXd&)> f);
/// Scalar function times the volume form dx_0 ^ ... ^ dx_{n-1}.
FormField volume_field(int n, std::function<double(const Eigen::VectorXd&)> f);

/// Euclidean Hodge star of a coefficient vector: *dx_I = sign(I, I^c) dx_{I^c}.
Eigen::VectorXd algebraic_star(const Eigen::VectorXd& coeffs, int n, int k);
FormField star(const FormField& field);

/// Value of the form on the vectors given as the columns of `vectors` (n x k).
double evaluate_on(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& vectors);

/// Integral of a k-form over the oriented k-simplex with vertices as columns.
double integrate_form(const FormField& field, const Eigen::MatrixXd& pts, int degree = 6);

/// <R_h omega, tau> = integral over every k-simplex (primal cochain).
Cochain derham_primal(const FormField& field, const SimplicialComplex& complex, int degree = 6);

/// Integral of an (n-k)-form over every dual cell *tau, tau a k-simplex.
Cochain derham_dual(const FormField& field, const DualComplex& dual, int degree = 6);

/// Piecewise polynomial Whitney interpolant of a primal k-cochain.
class WhitneyField {
public:
    WhitneyField(const SimplicialComplex& complex, Cochain cochain);

    int degree() const { return cochain_.space.degree; }
    /// Coefficients of W omega at barycentric coordinates `bary` of a top cell.
    Eigen::VectorXd value_in_cell(Index cell, const Eigen::VectorXd& bary) const;
    /// Coefficients of d(W omega), constant on each top cell.
    Eigen::VectorXd derivative_in_cell(Index cell) const;
    /// Point evaluation; throws range_error outside the mesh.
    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

private:
    void cell_gradients(Index cell, Eigen::MatrixXd& grads) const;

    const SimplicialComplex* complex_;
    Cochain cochain_;
};

WhitneyField whitney_map(const Cochain& cochain, const SimplicialComplex& complex);

/// Gram matrix of the Whitney k-forms in L^2.
Eigen::SparseMatrix<double> whitney_mass_matrix(const SimplicialComplex& complex, int k);

/// ||W_h omega||_{L^2}, exact for the piecewise polynomial integrand.
double whitney_l2_norm(const Cochain& cochain, const SimplicialComplex& complex);

struct ConsistencyRecord {
    /// max |*_h R_h omega - R_h * omega| over dual cells
    double err_max = 0;
    /// the same difference in the dual discrete L^2 norm
    double err_l2 = 0;
    /// max |*_h R_h(*omega) - R_h(**omega)| over primal k-simplices
    double err_dual = 0;
    /// the same difference in the primal discrete L^2 norm
    double err_dual_l2 = 0;
};

/// Hodge star consistency for a k-form, using the Euclidean star of the field.
ConsistencyRecord consistency_probe(const FormField& field, const DualComplex& dual, int degree = 8);

/// Both terms of Delta_h R_h u - R_h f for a 0-form u with f = delta d u, and
/// the left side computed directly. Only interior vertices carry values.
struct LaplaceDecomposition {
    Cochain lhs;    ///< Delta_h R_h u - R_h f
    Cochain term1;  ///< -(*_0)^{-1} d_dual (*_h R_h - R_h *) du
    Cochain term2;  ///< (*_h R_h - R_h *) applied to the dual integral of f, minus f
    std::vector<Index> interior;
};

LaplaceDecomposition laplace_decomposition(const FormField& u, const FormField& du,
                                           const FormField& f, const DualComplex& dual,
                                           int degree = 8);

} // namespace declab

#endif // DECLAB_FIELDS_HPP
