#include "declab/errors.hpp"
#include "declab/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace declab;

namespace {

std::vector<std::vector<std::string>> split_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

StudyConfig small_pentagon()
{
    StudyConfig cfg;
    cfg.family.family = Family::pentagon_wheel;
    cfg.problem = "trig2d";
    cfg.levels = 4;
    cfg.deterministic = true;
    return cfg;
}

std::string to_csv(const StudyReport& r)
{
    std::ostringstream out;
    emit(r, Format::csv, out);
    return out.str();
}

} // namespace

TEST_CASE("step rates")
{
    const auto r = step_rates({4.0, 1.0, 0.25, 0.0});
    CHECK(std::isnan(r[0]));
    CHECK(r[1] == doctest::Approx(2.0));
    CHECK(r[2] == doctest::Approx(2.0));
    CHECK_FALSE(std::isfinite(r[3]));
}

TEST_CASE("fitted rate")
{
    StudyReport rep;
    rep.metrics = {"a"};
    for (int i = 0; i < 6; ++i) {
        StudyRow row;
        row.level = i;
        // preasymptotic first levels, then exact slope 1.5
        row.errors = {i < 2 ? 1.0 : std::pow(2.0, -1.5 * i)};
        rep.rows.push_back(row);
    }
    CHECK(fitted_rate(rep, "a") == doctest::Approx(1.5));
    CHECK(fitted_rate(rep, "a", 2) == doctest::Approx(1.5));
    CHECK_THROWS_AS(fitted_rate(rep, "b"), lookup_error);
}

TEST_CASE("convergence study rows and CSV schema")
{
    const StudyReport r = run_convergence_study(small_pentagon());
    REQUIRE(r.complete);
    CHECK(r.kind == "convergence");
    CHECK(r.rows.size() == 4);
    CHECK(r.metrics == std::vector<std::string>{"err_max", "err_h1", "err_l2"});
    CHECK(r.commit == std::string(commit_stamp()));

    const auto rows = split_csv(to_csv(r));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"level", "h", "err_max", "rate_max", "err_h1", "rate_h1",
                                               "err_l2", "rate_l2", "iters", "seconds"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == rows[0].size());
        CHECK(std::stoi(rows[i][0]) == int(i - 1));
        CHECK(rows[i].back() == "0");
    }
    // level 0 is solved exactly (its only interior vertex is the hub)
    CHECK(std::stod(rows[1][2]) < 1e-15);
    CHECK(rows[1][3].empty());
}

TEST_CASE("emitted rates can be recomputed from emitted errors")
{
    const StudyReport r = run_convergence_study(small_pentagon());
    const auto rows = split_csv(to_csv(r));
    for (std::size_t i = 3; i < rows.size(); ++i)
        for (int col : {2, 4, 6}) {
            const double prev = std::stod(rows[i - 1][col]);
            const double cur = std::stod(rows[i][col]);
            const double rate = std::stod(rows[i][col + 1]);
            CHECK(std::abs(std::log2(prev / cur) - rate) < 1e-9);
        }
}

TEST_CASE("deterministic runs give identical bytes")
{
    const std::string a = to_csv(run_convergence_study(small_pentagon()));
    const std::string b = to_csv(run_convergence_study(small_pentagon()));
    CHECK(a == b);
}

TEST_CASE("pentagon reference row at level 4")
{
    StudyConfig cfg = small_pentagon();
    cfg.levels = 5;
    const StudyReport r = run_convergence_study(cfg);
    const auto& row = r.rows[4];
    CHECK(row.errors[0] == doctest::Approx(4.891893e-05).epsilon(1e-6));
    CHECK(row.errors[1] == doctest::Approx(1.849975e-04).epsilon(1e-6));
    CHECK(row.errors[2] == doctest::Approx(3.798925e-05).epsilon(1e-6));
    CHECK(row.rates[0] == doctest::Approx(1.999818).epsilon(1e-5));
}

TEST_CASE("text table and SVG")
{
    const StudyReport r = run_convergence_study(small_pentagon());
    std::ostringstream table;
    emit(r, Format::table, table);
    const std::string t = table.str();
    CHECK(t.find("err_max") != std::string::npos);
    CHECK(t.find("log2") != std::string::npos);
    CHECK(t.find("family pentagon") != std::string::npos);

    std::ostringstream svg;
    emit(r, Format::svg, svg);
    const std::string s = svg.str();
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("class=\"reference-slope-1\"") != std::string::npos);
    CHECK(s.find("class=\"reference-slope-2\"") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);

    CHECK(parse_format("csv") == Format::csv);
    CHECK(parse_format("svg") == Format::svg);
    CHECK(parse_format("table") == Format::table);
    CHECK_THROWS_AS(parse_format("xml"), lookup_error);
}

TEST_CASE("consistency study")
{
    StudyConfig cfg;
    cfg.family.family = Family::perturbed_wheel;
    cfg.levels = 4;
    cfg.deterministic = true;
    const StudyReport r0 = run_consistency_study(cfg, 0);
    REQUIRE(r0.complete);
    CHECK(r0.metric_index("lap_l2") >= 0);
    CHECK(r0.metric_index("term2_max") >= 0);
    CHECK(r0.rows.size() == 4);
    const double rate = r0.rows[3].rates[r0.metric_index("star_max")];
    CHECK(rate > 2.5);

    const StudyReport r1 = run_consistency_study(cfg, 1);
    CHECK(r1.metrics.size() == 4);
    const auto header = split_csv(to_csv(r1))[0];
    CHECK(header.front() == "level");
    CHECK(header.back() == "seconds");
    CHECK(header[2] == "star_max");
    CHECK(header[3] == "rate_star_max");

    const StudyReport bad = run_consistency_study(cfg, 3);
    CHECK_FALSE(bad.complete);
}

TEST_CASE("memory guard and failures give partial reports")
{
    StudyConfig cfg = small_pentagon();
    cfg.max_unknowns = 100;
    const StudyReport r = run_convergence_study(cfg);
    CHECK_FALSE(r.complete);
    CHECK(r.rows.size() == 3);
    CHECK(r.failure.find("level 3") != std::string::npos);
    std::ostringstream table;
    emit(r, Format::table, table);
    CHECK(table.str().find("# incomplete") != std::string::npos);

    StudyConfig wrong = small_pentagon();
    wrong.problem = "trig3d";
    CHECK_FALSE(run_convergence_study(wrong).complete);
}
