#include "declab/poisson.hpp"

#include "declab/errors.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace declab {

DirichletProblem make_dirichlet(std::shared_ptr<const DualComplex> dual, const Problem& problem)
{
    if (!dual)
        throw range_error("make_dirichlet needs a dual complex");
    if (dual->dim() != problem.dim)
        throw range_error("problem '" + problem.name + "' is " + std::to_string(problem.dim) +
                          "-dimensional but the mesh is " + std::to_string(dual->dim()) + "-dimensional");
    const SimplicialComplex& c = dual->primal();
    DirichletProblem p;
    p.dual = dual;
    p.rhs = derham_primal(problem.f, c);
    p.boundary_values = zero_cochain(c, 0);
    const Cochain u = derham_primal(problem.u, c);
    for (Index v = 0; v < c.count(0); ++v)
        if (c.on_boundary(0, v))
            p.boundary_values.values(v) = u.values(v);
    return p;
}

ReducedSystem assemble(const DirichletProblem& problem)
{
    const DualComplex& dual = *problem.dual;
    const SimplicialComplex& c = dual.primal();
    ReducedSystem sys;
    sys.position.assign(std::size_t(c.count(0)), -1);
    for (Index v = 0; v < c.count(0); ++v) {
        if (c.on_boundary(0, v)) {
            sys.boundary.push_back(v);
        } else {
            sys.position[v] = Index(sys.interior.size());
            sys.interior.push_back(v);
        }
    }
    if (sys.interior.empty())
        throw trivial_problem_error("the mesh has no interior vertex");
    for (Index e = 0; e < c.count(1); ++e)
        if (dual.zero_volume(1, e))
            sys.degenerate_edges = true;

    const LinearOperator d0 = exterior_derivative(c, 0);
    const Eigen::SparseMatrix<double> D = d0.matrix();
    const Eigen::VectorXd w = hodge_star(dual, 1).diagonal();
    const Eigen::SparseMatrix<double> S = D.transpose() * w.asDiagonal() * D;

    const Eigen::Index m = Eigen::Index(sys.interior.size());
    const Eigen::VectorXd& g = problem.boundary_values.values;
    const Eigen::VectorXd star0 = hodge_star(dual, 0).diagonal();
    sys.load.resize(m);
    sys.mass.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        sys.load(i) = star0(sys.interior[i]) * problem.rhs.values(sys.interior[i]);
        sys.mass(i) = star0(sys.interior[i]);
    }
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(std::size_t(S.nonZeros()));
    for (int j = 0; j < S.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(S, j); it; ++it) {
            const Index r = sys.position[it.row()], col = sys.position[it.col()];
            if (r < 0)
                continue;
            if (col >= 0)
                t.emplace_back(r, col, it.value());
            else
                sys.load(r) -= it.value() * g(it.col());
        }
    sys.stiffness.resize(m, m);
    sys.stiffness.setFromTriplets(t.begin(), t.end());
    sys.stiffness.makeCompressed();
    return sys;
}

int pcg(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
        double tol, int max_iterations, double* final_residual)
{
    const double bnorm = b.norm();
    if (x.size() != b.size())
        x = Eigen::VectorXd::Zero(b.size());
    if (bnorm == 0) {
        x.setZero();
        if (final_residual)
            *final_residual = 0;
        return 0;
    }
    const Eigen::VectorXd inv_diag = A.diagonal().cwiseInverse();
    Eigen::VectorXd r = b - A * x;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z, Ap(b.size());
    double rz = r.dot(z);
    std::vector<double> history{r.norm() / bnorm};
    int it = 0;
    while (history.back() > tol) {
        if (it >= max_iterations)
            throw solver_error("conjugate gradients did not converge in " + std::to_string(it) +
                                   " iterations (relative residual " + std::to_string(history.back()) + ")",
                               history);
        Ap.noalias() = A * p;
        const double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
        ++it;
        history.push_back(r.norm() / bnorm);
    }
    if (final_residual)
        *final_residual = (b - A * x).norm() / bnorm;
    return it;
}

double energy(const DualComplex& dual, const Cochain& w, const Cochain& rhs)
{
    const Cochain dw = exterior_derivative(dual.primal(), 0) * w;
    return 0.5 * inner_product(dual, dw, dw) - inner_product(dual, rhs, w);
}

SolveReport solve(const DirichletProblem& problem, const SolveConfig& config)
{
    const DualComplex& dual = *problem.dual;
    const SimplicialComplex& c = dual.primal();
    const ReducedSystem sys = assemble(problem);

    SolveReport rep;
    rep.unknowns = sys.interior.size();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.load.size());
    if (Eigen::Index(sys.interior.size()) < config.direct_below) {
        x = Eigen::MatrixXd(sys.stiffness).llt().solve(sys.load);
        const double bnorm = sys.load.norm();
        rep.residual = bnorm > 0 ? (sys.load - sys.stiffness * x).norm() / bnorm : 0.0;
    } else {
        rep.iterations = pcg(sys.stiffness, sys.load, x, config.tol, config.max_iterations, &rep.residual);
    }

    rep.solution = zero_cochain(c, 0);
    for (Index b : sys.boundary)
        rep.solution.values(b) = problem.boundary_values.values(b);
    for (std::size_t i = 0; i < sys.interior.size(); ++i)
        rep.solution.values(sys.interior[i]) = x(Eigen::Index(i));

    rep.energy = energy(dual, rep.solution, problem.rhs);
    Cochain g = zero_cochain(c, 0);
    for (Index b : sys.boundary)
        g.values(b) = problem.boundary_values.values(b);
    const double data = discrete_l2(dual, problem.rhs) + h1_seminorm(dual, g);
    rep.stability_constant = data > 0 ? discrete_l2(dual, rep.solution) / data : 0.0;
    return rep;
}

ErrorNorms error_report(const DualComplex& dual, const Cochain& solution, const FormField& reference)
{
    Cochain e = derham_primal(reference, dual.primal());
    e.values -= solution.values;
    return {max_norm(e), discrete_l2(dual, e), h1_seminorm(dual, e)};
}

double smallest_generalized_eigenvalue(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& M,
                                       double tol, int max_iterations)
{
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
    if (ldlt.info() != Eigen::Success)
        throw solver_error("stiffness factorization failed", {});
    Eigen::VectorXd x = Eigen::VectorXd::Ones(S.rows());
    double lambda = 0;
    for (int it = 0; it < max_iterations; ++it) {
        x /= std::sqrt(x.dot(M.cwiseProduct(x)));
        const double next = x.dot(S * x);
        if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next))
            return next;
        lambda = next;
        const Eigen::VectorXd mx = M.cwiseProduct(x);
        x = ldlt.solve(mx);
    }
    return lambda;
}

void write_solution(std::ostream& out, const Cochain& solution, const std::string& mesh,
                    const std::string& problem, int level)
{
    out << "# mesh " << mesh << " problem " << problem << " level " << level << "\n";
    char buf[64];
    for (Eigen::Index i = 0; i < solution.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%ld %.17g\n", long(i), solution.values(i));
        out << buf;
    }
}

} // namespace declab
