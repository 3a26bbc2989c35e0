// dec-lab: mesh generation, Poisson solves and convergence studies.

#include "declab/harness.hpp"

#include "declab/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace declab;

namespace {

struct MeshOptions {
    std::string family = "pentagon";
    int level = 0;
    int ngon = 5;
    int pattern = 1;
    double alpha = 8 * std::numbers::pi / 5;
    double jitter = FamilySpec{}.jitter;
    std::string mesh;

    void add(CLI::App* app, bool with_level = true)
    {
        app->add_option("--family", family, "pentagon | perturbed | square | corner | cube | file")
            ->capture_default_str();
        if (with_level)
            app->add_option("--level", level, "refinement level")->capture_default_str();
        app->add_option("--ngon", ngon, "rim vertices of the wheel families")->capture_default_str();
        app->add_option("--pattern", pattern, "square pattern 1, 2 or 3")->capture_default_str();
        app->add_option("--alpha", alpha, "corner angle in radians")->capture_default_str();
        app->add_option("--jitter", jitter, "perturbed wheel amplitude")->capture_default_str();
        app->add_option("--mesh", mesh, "decmesh file (implies --family file)");
    }

    FamilySpec spec() const
    {
        FamilySpec s;
        s.family = mesh.empty() ? parse_family(family) : Family::from_file;
        s.level = level;
        s.ngon = ngon;
        s.pattern = pattern;
        s.alpha = alpha;
        s.jitter = jitter;
        s.path = mesh;
        return s;
    }
};

// Runs `write` against the named file, or stdout when the name is empty or "-".
template <typename F>
void with_output(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw dec_error("cannot write '" + path + "'");
    write(out);
}

void print_report(const SimplicialComplex& c)
{
    const ShapeReport r = shape_report(c);
    std::cout << "dim " << c.dim() << "\n";
    for (int k = 0; k <= c.dim(); ++k)
        std::cout << "simplices " << k << " " << c.count(k) << "\n";
    Index boundary = 0;
    for (Index v = 0; v < c.count(0); ++v)
        boundary += c.on_boundary(0, v);
    std::cout << "boundary_vertices " << boundary << "\n"
              << "interior_vertices " << c.count(0) - boundary << "\n";
    std::printf("h %.17g\ngamma_min %.17g\nc_reg %.17g\n", r.h, r.gamma_min, r.c_reg);
    std::cout << "star_bound " << r.star_bound << "\n"
              << "well_centered " << to_string(r.well_centered) << "\n";
    if (r.worst_simplex.first >= 0)
        std::cout << "worst_simplex " << r.worst_simplex.first << " " << r.worst_simplex.second << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete exterior calculus workbench"};
    app.require_subcommand(1);

    auto* mesh = app.add_subcommand("mesh", "generate, refine or inspect meshes");
    mesh->require_subcommand(1);

    MeshOptions gen_opts;
    std::string gen_out;
    auto* gen = mesh->add_subcommand("gen", "write a generated mesh");
    gen_opts.add(gen);
    gen->add_option("--out", gen_out, "output file (default stdout)");

    std::string refine_in, refine_out, refine_family = "file";
    auto* ref = mesh->add_subcommand("refine", "refine a mesh file one level");
    ref->add_option("--mesh", refine_in, "input decmesh file")->required();
    ref->add_option("--family", refine_family, "family of the input mesh")->capture_default_str();
    ref->add_option("--out", refine_out, "output file (default stdout)");

    MeshOptions report_opts;
    std::string dual_out;
    auto* rep = mesh->add_subcommand("report", "shape regularity and well-centeredness");
    report_opts.add(rep);
    rep->add_option("--dual-out", dual_out, "write the dual volume diagnostics here");

    MeshOptions solve_opts;
    std::string problem = "trig2d", solve_out;
    double mu = 0.625, tol = 1e-12;
    auto* slv = app.add_subcommand("solve", "solve one Poisson problem");
    solve_opts.add(slv);
    slv->add_option("--problem", problem, "trig2d | trig3d | corner | linear2d | linear3d")->capture_default_str();
    slv->add_option("--mu", mu, "corner exponent")->capture_default_str();
    slv->add_option("--tol", tol, "relative residual tolerance")->capture_default_str();
    slv->add_option("--out", solve_out, "write the solution here");

    auto* study = app.add_subcommand("study", "convergence and consistency studies");
    study->require_subcommand(1);
    MeshOptions study_opts;
    StudyConfig config;
    std::string format = "table", study_out;
    int levels = -1, k = 0;
    auto add_study = [&](CLI::App* s) {
        study_opts.add(s, false);
        s->add_option("--problem", config.problem, "problem name")->capture_default_str();
        s->add_option("--mu", config.mu, "corner exponent")->capture_default_str();
        s->add_option("--levels", levels, "number of levels (default 9 in 2D, 5 in 3D)");
        s->add_option("--first-level", config.first_level, "first level")->capture_default_str();
        s->add_option("--tol", config.solve.tol, "relative residual tolerance")->capture_default_str();
        s->add_option("--format", format, "csv | svg | table")->capture_default_str();
        s->add_option("--out", study_out, "output file (default stdout)");
        s->add_flag("--deterministic", config.deterministic, "write zero timings");
        s->add_option("--max-unknowns", config.max_unknowns, "refuse larger levels")->capture_default_str();
    };
    auto* conv = study->add_subcommand("convergence", "solution error per level");
    add_study(conv);
    auto* cons = study->add_subcommand("consistency", "Hodge star and Laplacian consistency per level");
    add_study(cons);
    cons->add_option("--k", k, "form degree")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const SimplicialComplex c = generate(gen_opts.spec());
            with_output(gen_out, [&](std::ostream& o) { write_mesh(o, c); });
        } else if (ref->parsed()) {
            const SimplicialComplex c = refine(load(refine_in), parse_family(refine_family));
            with_output(refine_out, [&](std::ostream& o) { write_mesh(o, c); });
        } else if (rep->parsed()) {
            auto c = std::make_shared<const SimplicialComplex>(generate(report_opts.spec()));
            print_report(*c);
            if (!dual_out.empty()) {
                const DualComplex d = build_dual(c);
                with_output(dual_out, [&](std::ostream& o) { write_dual_diagnostics(d, o); });
            }
        } else if (slv->parsed()) {
            const FamilySpec spec = solve_opts.spec();
            auto c = std::make_shared<const SimplicialComplex>(generate(spec));
            auto d = std::make_shared<const DualComplex>(build_dual(c));
            const Problem p = make_problem(problem, mu);
            SolveConfig sc;
            sc.tol = tol;
            const SolveReport r = solve(make_dirichlet(d, p), sc);
            const ErrorNorms e = error_report(*d, r.solution, p.u);
            std::printf("unknowns %zu\niterations %d\nresidual %.3e\nenergy %.17g\n"
                        "stability_constant %.17g\nerr_max %.17g\nerr_h1 %.17g\nerr_l2 %.17g\n",
                        r.unknowns, r.iterations, r.residual, r.energy, r.stability_constant, e.max, e.h1,
                        e.l2);
            if (!solve_out.empty())
                with_output(solve_out, [&](std::ostream& o) {
                    write_solution(o, r.solution, spec.path.empty() ? to_string(spec.family) : spec.path,
                                   problem, spec.level);
                });
        } else if (conv->parsed() || cons->parsed()) {
            config.family = study_opts.spec();
            const bool three_d = config.family.family == Family::cube_kuhn;
            config.levels = levels > 0 ? levels : (three_d ? 5 : 9);
            const Format f = parse_format(format);
            const StudyReport r = conv->parsed() ? run_convergence_study(config)
                                                 : run_consistency_study(config, k);
            with_output(study_out, [&](std::ostream& o) { emit(r, f, o); });
            if (!r.complete) {
                std::cerr << "dec-lab: study stopped: " << r.failure << "\n";
                return 2;
            }
        }
    } catch (const dec_error& e) {
        std::cerr << "dec-lab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
