// Convergence and consistency studies over a refinement family, and report
// output as CSV, a log-log SVG plot, or a plain text table.

#ifndef DECLAB_HARNESS_HPP
#define DECLAB_HARNESS_HPP

#include "declab/mesh_library.hpp"
#include "declab/poisson.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace declab {

struct StudyRow {
    int level = 0;
    double h = 0;
    std::vector<double> errors;  ///< one per metric
    std::vector<double> rates;   ///< log2(e_{i-1} / e_i); NaN where undefined
    int iterations = 0;
    double seconds = 0;
};

struct StudyReport {
    std::string kind;  ///< "convergence" or "consistency"
    std::string family;
    std::string problem;
    int k = 0;
    double tol = 0;
    std::string commit;
    std::vector<std::string> metrics;
    std::vector<StudyRow> rows;
    bool complete = true;
    std::string failure;

    int metric_index(const std::string& name) const;
};

struct StudyConfig {
    FamilySpec family;  ///< the level field is ignored
    std::string problem = "trig2d";
    double mu = 0.625;
    int first_level = 0;
    int levels = 9;
    /// Tighter than the solver default: at the finest levels a 1e-12 residual
    /// already shows in the fifth digit of the error.
    SolveConfig solve{1e-14};
    /// write zero timings so repeated runs give identical files
    bool deterministic = false;
    /// refuse levels whose estimated vertex count exceeds this
    long max_unknowns = 20'000'000;
    int quadrature_degree = 8;
};

const char* commit_stamp();

/// Metrics: max, h1, l2 (the three error norms of e_h = R_h u - w_h).
StudyReport run_convergence_study(const StudyConfig& config);

/// Metrics: err_max, err_l2, err_dual, err_dual_l2 for the Hodge star
/// consistency of a smooth k-form; for k = 0 also the Laplacian consistency
/// lap_max, lap_l2 and its two terms term1_max, term1_l2, term2_max, term2_l2.
StudyReport run_consistency_study(const StudyConfig& config, int k);

/// Per-step log2 rates from a list of errors (NaN where undefined).
std::vector<double> step_rates(const std::vector<double>& errors);

/// Least-squares slope of -log2(error) against level over the last `last` levels.
double fitted_rate(const StudyReport& report, const std::string& metric, int last = 4);

enum class Format { csv, svg, table };
Format parse_format(const std::string& name);

void emit(const StudyReport& report, Format format, std::ostream& out);

} // namespace declab

#endif // DECLAB_HARNESS_HPP
