// Scalar Poisson problem with Dirichlet data:
//     delta d w = R_h f   at interior vertices,
//     w = g               at boundary vertices,
// reduced to the interior unknowns and solved with preconditioned CG.
// delta d is positive semidefinite, so f is minus the classical Laplacian.

#ifndef DECLAB_POISSON_HPP
#define DECLAB_POISSON_HPP

#include "declab/problems.hpp"

#include <iosfwd>
#include <memory>

namespace declab {

struct DirichletProblem {
    std::shared_ptr<const DualComplex> dual;
    Cochain rhs;              ///< R_h f, one value per vertex
    Cochain boundary_values;  ///< g_h; interior entries are ignored
};

DirichletProblem make_dirichlet(std::shared_ptr<const DualComplex> dual, const Problem& problem);

struct ReducedSystem {
    Eigen::SparseMatrix<double> stiffness;  ///< d0^T *1 d0 on interior vertices
    Eigen::VectorXd load;                   ///< *0 R_h f minus the boundary coupling
    Eigen::VectorXd mass;                   ///< diagonal of *0 on interior vertices
    std::vector<Index> interior;
    std::vector<Index> boundary;
    /// interior position of each vertex, -1 on the boundary
    std::vector<Index> position;
    /// some edge has a zero dual volume (weakly well-centered mesh)
    bool degenerate_edges = false;
};

/// Throws trivial_problem_error when there is no interior vertex.
ReducedSystem assemble(const DirichletProblem& problem);

struct SolveConfig {
    double tol = 1e-12;
    int max_iterations = 100000;
    /// dense direct solve below this many unknowns
    int direct_below = 500;
};

struct SolveReport {
    Cochain solution;
    int iterations = 0;
    double residual = 0;
    double energy = 0;
    double stability_constant = 0;
    std::size_t unknowns = 0;
};

/// Jacobi-preconditioned conjugate gradients; returns the iteration count.
/// Throws solver_error (with the residual history) when tol is not reached.
int pcg(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
        double tol, int max_iterations, double* final_residual = nullptr);

SolveReport solve(const DirichletProblem& problem, const SolveConfig& config = {});

struct ErrorNorms {
    double max = 0;
    double l2 = 0;
    double h1 = 0;
};

/// Norms of e_h = R_h u - w_h.
ErrorNorms error_report(const DualComplex& dual, const Cochain& solution, const FormField& reference);

/// 1/2 (dw, dw)_h - (R_h f, w)_h
double energy(const DualComplex& dual, const Cochain& w, const Cochain& rhs);

/// Smallest lambda with S x = lambda M x (M diagonal), by inverse iteration.
double smallest_generalized_eigenvalue(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& M,
                                       double tol = 1e-10, int max_iterations = 1000);

/// Header line `# mesh <mesh> problem <problem> level <level>`, then `vertex value`.
void write_solution(std::ostream& out, const Cochain& solution, const std::string& mesh,
                    const std::string& problem, int level);

} // namespace declab

#endif // DECLAB_POISSON_HPP
