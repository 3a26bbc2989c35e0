// Manufactured Poisson problems with f = delta d u (minus the classical Laplacian).

#ifndef DECLAB_PROBLEMS_HPP
#define DECLAB_PROBLEMS_HPP

#include "declab/fields.hpp"

#include <string>
#include <vector>

namespace declab {

struct Problem {
    std::string name;
    int dim = 0;
    FormField u;   ///< exact solution, also the Dirichlet data
    FormField du;  ///< its differential
    FormField f;   ///< source term as a 0-form
};

/// Known names: trig2d, trig3d, corner, linear2d, linear3d.
/// `mu` is the corner exponent (u = r^mu sin(mu theta)).
Problem make_problem(const std::string& name, double mu = 0.625);

std::vector<std::string> problem_names();

/// A smooth k-form on R^n with non-constant, non-closed coefficients, used by
/// the consistency studies.
FormField smooth_form(int n, int k);

} // namespace declab

#endif // DECLAB_PROBLEMS_HPP
