// Exception hierarchy shared by all declab modules.

#ifndef DECLAB_ERRORS_HPP
#define DECLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace declab {

class dec_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cell with (numerically) zero volume.
class degenerate_cell_error : public dec_error {
public:
    degenerate_cell_error(const std::string& what, long cell)
        : dec_error(what), cell(cell) {}
    long cell;
};

/// Two cells that do not meet in a common face.
class non_conforming_error : public dec_error {
public:
    non_conforming_error(const std::string& what, long first, long second)
        : dec_error(what), first(first), second(second) {}
    long first;
    long second;
};

class lookup_error : public dec_error {
public:
    using dec_error::dec_error;
};

class range_error : public dec_error {
public:
    using dec_error::dec_error;
};

/// Circumcenter outside a simplex (dual construction refused).
class well_centered_error : public dec_error {
public:
    well_centered_error(const std::string& what, int dim, long simplex)
        : dec_error(what), dim(dim), simplex(simplex) {}
    int dim;
    long simplex;
};

/// Inversion of a Hodge star with a zero dual volume.
class singular_star_error : public dec_error {
public:
    singular_star_error(const std::string& what, int dim, long simplex)
        : dec_error(what), dim(dim), simplex(simplex) {}
    int dim;
    long simplex;
};

/// Operators or cochains living on incompatible spaces.
class space_mismatch_error : public dec_error {
public:
    using dec_error::dec_error;
};

class parse_error : public dec_error {
public:
    using dec_error::dec_error;
};

/// Dirichlet problem with no interior unknowns.
class trivial_problem_error : public dec_error {
public:
    using dec_error::dec_error;
};

class solver_error : public dec_error {
public:
    solver_error(const std::string& what, std::vector<double> history)
        : dec_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

} // namespace declab

#endif // DECLAB_ERRORS_HPP
