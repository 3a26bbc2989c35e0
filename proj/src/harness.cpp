#include "declab/harness.hpp"

#include "declab/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#ifndef DECLAB_COMMIT
#define DECLAB_COMMIT "unknown"
#endif

namespace declab {

const char* commit_stamp() { return DECLAB_COMMIT; }

int StudyReport::metric_index(const std::string& name) const
{
    for (std::size_t i = 0; i < metrics.size(); ++i)
        if (metrics[i] == name)
            return int(i);
    throw lookup_error("report has no metric '" + name + "'");
}

std::vector<double> step_rates(const std::vector<double>& errors)
{
    std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double r = std::log2(errors[i - 1] / errors[i]);
        if (std::isfinite(r))
            rates[i] = r;
    }
    return rates;
}

namespace {

using Clock = std::chrono::steady_clock;

double mesh_size(const DualComplex& dual) { return dual.primal_volumes(1).maxCoeff(); }

void check_guard(const StudyConfig& config, const FamilySpec& spec)
{
    const long estimate = estimate_vertices(spec);
    if (estimate > config.max_unknowns)
        throw range_error("level " + std::to_string(spec.level) + " needs about " +
                          std::to_string(estimate) + " vertices, above the cap of " +
                          std::to_string(config.max_unknowns));
}

void finish_rates(StudyReport& report)
{
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
        std::vector<double> e;
        for (const auto& row : report.rows)
            e.push_back(row.errors[m]);
        const auto r = step_rates(e);
        for (std::size_t i = 0; i < report.rows.size(); ++i)
            report.rows[i].rates.push_back(r[i]);
    }
}

std::string family_label(const FamilySpec& spec)
{
    std::ostringstream s;
    s << to_string(spec.family);
    if (spec.family == Family::square)
        s << " pattern " << spec.pattern;
    if (spec.family == Family::corner)
        s << " alpha " << spec.alpha;
    if (spec.family == Family::from_file)
        s << " " << spec.path;
    return s.str();
}

} // namespace

StudyReport run_convergence_study(const StudyConfig& config)
{
    StudyReport report;
    report.kind = "convergence";
    report.family = family_label(config.family);
    report.problem = config.problem;
    report.tol = config.solve.tol;
    report.commit = commit_stamp();
    report.metrics = {"err_max", "err_h1", "err_l2"};
    const Problem problem = make_problem(config.problem, config.mu);

    try {
        for (int level = config.first_level; level < config.first_level + config.levels; ++level) {
            FamilySpec spec = config.family;
            spec.level = level;
            check_guard(config, spec);
            const auto start = Clock::now();
            auto complex = std::make_shared<const SimplicialComplex>(generate(spec));
            auto dual = std::make_shared<const DualComplex>(build_dual(complex));
            const DirichletProblem dp = make_dirichlet(dual, problem);
            StudyRow row;
            row.level = level;
            row.h = mesh_size(*dual);
            Cochain solution;
            try {
                const SolveReport rep = solve(dp, config.solve);
                solution = rep.solution;
                row.iterations = rep.iterations;
            } catch (const trivial_problem_error&) {
                solution = dp.boundary_values;
            }
            const ErrorNorms e = error_report(*dual, solution, problem.u);
            row.errors = {e.max, e.h1, e.l2};
            row.seconds = config.deterministic
                              ? 0.0
                              : std::chrono::duration<double>(Clock::now() - start).count();
            report.rows.push_back(std::move(row));
        }
    } catch (const dec_error& e) {
        report.complete = false;
        report.failure = e.what();
    }
    finish_rates(report);
    return report;
}

StudyReport run_consistency_study(const StudyConfig& config, int k)
{
    StudyReport report;
    report.kind = "consistency";
    report.family = family_label(config.family);
    report.problem = config.problem;
    report.k = k;
    report.commit = commit_stamp();
    report.metrics = {"star_max", "star_l2", "dual_max", "dual_l2"};
    if (k == 0)
        for (const char* m : {"lap_max", "lap_l2", "term1_max", "term1_l2", "term2_max", "term2_l2"})
            report.metrics.push_back(m);
    const Problem problem = make_problem(config.problem, config.mu);

    try {
        for (int level = config.first_level; level < config.first_level + config.levels; ++level) {
            FamilySpec spec = config.family;
            spec.level = level;
            check_guard(config, spec);
            const auto start = Clock::now();
            auto complex = std::make_shared<const SimplicialComplex>(generate(spec));
            if (k < 0 || k > complex->dim())
                throw range_error("form degree " + std::to_string(k) + " outside [0, " +
                                  std::to_string(complex->dim()) + "]");
            if (problem.dim != complex->dim())
                throw range_error("problem and mesh dimensions differ");
            const DualComplex dual = build_dual(complex);
            const FormField field = k == 0 ? problem.u : smooth_form(complex->dim(), k);
            const ConsistencyRecord rec = consistency_probe(field, dual, config.quadrature_degree);
            StudyRow row;
            row.level = level;
            row.h = mesh_size(dual);
            row.errors = {rec.err_max, rec.err_l2, rec.err_dual, rec.err_dual_l2};
            if (k == 0) {
                const LaplaceDecomposition dec =
                    laplace_decomposition(problem.u, problem.du, problem.f, dual, config.quadrature_degree);
                for (const Cochain* c : {&dec.lhs, &dec.term1, &dec.term2}) {
                    row.errors.push_back(max_norm(*c));
                    row.errors.push_back(discrete_l2(dual, *c));
                }
            }
            row.seconds = config.deterministic
                              ? 0.0
                              : std::chrono::duration<double>(Clock::now() - start).count();
            report.rows.push_back(std::move(row));
        }
    } catch (const dec_error& e) {
        report.complete = false;
        report.failure = e.what();
    }
    finish_rates(report);
    return report;
}

double fitted_rate(const StudyReport& report, const std::string& metric, int last)
{
    const int m = report.metric_index(metric);
    std::vector<double> xs, ys;
    for (const auto& row : report.rows)
        if (row.errors[m] > 0 && std::isfinite(row.errors[m])) {
            xs.push_back(row.level);
            ys.push_back(-std::log2(row.errors[m]));
        }
    if (xs.size() > std::size_t(last)) {
        xs.erase(xs.begin(), xs.end() - last);
        ys.erase(ys.begin(), ys.end() - last);
    }
    if (xs.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Format parse_format(const std::string& name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "svg" || name == "svg_loglog")
        return Format::svg;
    if (name == "table" || name == "text" || name == "text_table")
        return Format::table;
    throw lookup_error("unknown format '" + name + "'");
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string rate_column(const std::string& metric)
{
    const std::string base = metric.rfind("err_", 0) == 0 ? metric.substr(4) : metric;
    return "rate_" + base;
}

void emit_csv(const StudyReport& r, std::ostream& out)
{
    out << "level,h";
    for (const auto& m : r.metrics)
        out << "," << m << "," << rate_column(m);
    if (r.kind == "convergence")
        out << ",iters";
    out << ",seconds\n";
    for (const auto& row : r.rows) {
        out << row.level << "," << num(row.h);
        for (std::size_t m = 0; m < r.metrics.size(); ++m) {
            out << "," << num(row.errors[m]) << ",";
            if (std::isfinite(row.rates[m]))
                out << num(row.rates[m]);
        }
        if (r.kind == "convergence")
            out << "," << row.iterations;
        out << "," << num(row.seconds) << "\n";
    }
}

void emit_table(const StudyReport& r, std::ostream& out)
{
    out << "# " << r.kind << " study, family " << r.family << ", problem " << r.problem;
    if (r.kind == "consistency")
        out << ", k = " << r.k;
    out << ", commit " << r.commit << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%3s %14s", "i", "h");
    out << buf;
    for (const auto& m : r.metrics) {
        std::snprintf(buf, sizeof buf, " %14s %10s", m.c_str(), "log2");
        out << buf;
    }
    out << "\n";
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%3d %14.6e", row.level, row.h);
        out << buf;
        for (std::size_t m = 0; m < r.metrics.size(); ++m) {
            std::snprintf(buf, sizeof buf, " %14.6e", row.errors[m]);
            out << buf;
            if (std::isfinite(row.rates[m]))
                std::snprintf(buf, sizeof buf, " %10.7f", row.rates[m]);
            else
                std::snprintf(buf, sizeof buf, " %10s", "-");
            out << buf;
        }
        out << "\n";
    }
    if (!r.complete)
        out << "# incomplete: " << r.failure << "\n";
}

void emit_svg(const StudyReport& r, std::ostream& out)
{
    const double W = 640, H = 480, L = 70, R = 150, T = 30, B = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : r.rows)
        for (double e : row.errors)
            if (e > 0 && row.h > 0 && std::isfinite(e)) {
                xmin = std::min(xmin, std::log10(row.h));
                xmax = std::max(xmax, std::log10(row.h));
                ymin = std::min(ymin, std::log10(e));
                ymax = std::max(ymax, std::log10(e));
            }
    if (xmin > xmax) {
        xmin = -1;
        xmax = 0;
        ymin = -1;
        ymax = 0;
    }
    xmin = std::floor(xmin);
    xmax = std::ceil(xmax);
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (xmax == xmin)
        xmax += 1;
    if (ymax == ymin)
        ymax += 1;
    auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };
    char buf[256];

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<title>" << r.kind << " study: " << r.family << ", " << r.problem << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", L,
                  T, W - L - R, H - T - B);
    out << buf;
    for (double d = xmin; d <= xmax + 1e-9; d += 1) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">1e%d</text>\n",
                      px(d), T, px(d), H - B, px(d), H - B + 16, int(d));
        out << buf;
    }
    for (double d = ymin; d <= ymax + 1e-9; d += 1) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">1e%d</text>\n",
                      L, py(d), W - R, py(d), L - 6, py(d) + 4, int(d));
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">h</text>\n",
                  (L + W - R) / 2, H - 12);
    out << buf;

    // Reference slopes through the finest point of the first metric.
    const StudyRow* anchor = nullptr;
    for (const auto& row : r.rows)
        if (!row.errors.empty() && row.errors[0] > 0 && std::isfinite(row.errors[0]))
            anchor = &row;
    const char* ref_colors[2] = {"#888", "#444"};
    for (int p = 1; p <= 2; ++p) {
        if (!anchor)
            break;
        const double x0 = std::log10(anchor->h), y0 = std::log10(anchor->errors[0]);
        const double x1 = std::min(xmax, x0 + (ymax - y0) / p), y1 = y0 + p * (x1 - x0);
        std::snprintf(buf, sizeof buf,
                      "<line class=\"reference-slope-%d\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"%s\" stroke-dasharray=\"6,4\"/>\n",
                      p, px(x0), py(y0), px(x1), py(y1), ref_colors[p - 1]);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">slope %d</text>\n", W - R + 8,
                      T + 14 + 16 * (int(r.metrics.size()) + p), ref_colors[p - 1], p);
        out << buf;
    }

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                            "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    for (std::size_t m = 0; m < r.metrics.size(); ++m) {
        const char* color = colors[m % 10];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto& row : r.rows)
            if (row.errors[m] > 0 && std::isfinite(row.errors[m])) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(std::log10(row.h)), py(std::log10(row.errors[m])));
                out << buf;
            }
        out << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">%s</text>\n", W - R + 8,
                      T + 14 + 16 * double(m), color, r.metrics[m].c_str());
        out << buf;
    }
    out << "</svg>\n";
}

} // namespace

void emit(const StudyReport& report, Format format, std::ostream& out)
{
    switch (format) {
    case Format::csv: emit_csv(report, out); break;
    case Format::svg: emit_svg(report, out); break;
    case Format::table: emit_table(report, out); break;
    }
    if (!out)
        throw dec_error("failed to write the report");
}

} // namespace declab
