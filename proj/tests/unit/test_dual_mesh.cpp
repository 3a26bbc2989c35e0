#include "declab/dual_mesh.hpp"
#include "declab/errors.hpp"
#include "declab/geometry.hpp"
#include "declab/mesh_library.hpp"
#include "test_meshes.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

using namespace declab;
using testmesh::coords;

namespace {

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

double total_volume(const SimplicialComplex& c)
{
    double v = 0;
    for (Index s = 0; s < c.count(c.dim()); ++s)
        v += simplex_volume(c.points(c.dim(), s));
    return v;
}

// Triangle of the worked 2D example: v0 bottom left, v1 bottom right, v2 top.
SimplicialComplex example_triangle()
{
    return build_complex(2, coords({{-0.424, -0.208}, {5.676, 0.112}, {3.14, 3.56}}), {{0, 1, 2}});
}

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

double cross2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a(0) * b(1) - a(1) * b(0); }

// Orientation of the segment [c(e), c(sigma)] as a piece of *e: +1 when the
// canonical edge direction followed by the segment is positively oriented.
int dual_edge_sign(const DualComplex& d, Index e, Index s)
{
    const auto& c = d.primal();
    const Eigen::VectorXd dir = c.points(1, e).col(1) - c.points(1, e).col(0);
    return sgn(cross2(dir, d.circumcenters(2).col(s) - d.circumcenters(1).col(e)));
}

std::vector<SimplicialComplex> strict_meshes()
{
    std::vector<SimplicialComplex> out;
    out.push_back(testmesh::wheel(5));
    out.push_back(testmesh::equilateral());
    out.push_back(testmesh::tetrahedron());
    out.push_back(generate({Family::pentagon_wheel, 2}));
    out.push_back(generate({Family::perturbed_wheel, 2}));
    out.push_back(generate({Family::corner, 1}));
    out.push_back(testmesh::line(5, 0.3));
    return out;
}

} // namespace

TEST_CASE("circumcenters")
{
    const Eigen::VectorXd a = circumcenter(coords({{0, 0}, {1, 0}, {0, 1}}));
    CHECK(a(0) == doctest::Approx(0.5));
    CHECK(a(1) == doctest::Approx(0.5));
    const Eigen::VectorXd b = circumcenter(coords({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
    CHECK(b(0) == doctest::Approx(0.5));
    CHECK(b(1) == doctest::Approx(std::sqrt(3.0) / 6));

    // least-squares solve of 2 (v_i - v_0) . x = |v_i|^2 - |v_0|^2
    const Eigen::MatrixXd T = coords({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    Eigen::MatrixXd A(3, 3);
    Eigen::VectorXd r(3);
    for (int i = 1; i <= 3; ++i) {
        A.row(i - 1) = 2 * (T.col(i) - T.col(0)).transpose();
        r(i - 1) = T.col(i).squaredNorm() - T.col(0).squaredNorm();
    }
    const Eigen::VectorXd oracle = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
    const Eigen::VectorXd c = circumcenter(T);
    CHECK((c - oracle).norm() < 1e-14);
    CHECK(c(0) == doctest::Approx(0.5));

    // an edge in R^3: the midpoint
    const Eigen::VectorXd m = circumcenter(coords({{0, 0, 0}, {2, 2, 0}}));
    CHECK((m - Eigen::Vector3d(1, 1, 0)).norm() < 1e-15);

    CHECK_THROWS_AS(circumcenter(coords({{0, 0}, {1, 1}, {2, 2}})), degenerate_cell_error);
}

TEST_CASE("1D dual")
{
    const auto c = testmesh::line(2);
    const auto d = build_dual(c);
    CHECK(d.dual_volumes(0)(1) == doctest::Approx(1.0));
    CHECK(d.dual_volumes(0)(0) == doctest::Approx(0.5));
    CHECK(d.dual_volumes(1)(0) == 1.0);
    const DualCell cell = d.cell(0, 1);
    REQUIRE(cell.fragments.size() == 2);
    CHECK_FALSE(cell.is_boundary);
    CHECK(d.cell(0, 0).is_boundary);
    // one fragment runs towards 0.5, the other towards 1.5; both are traversed
    // in the positive direction of the line
    for (const auto& f : cell.fragments)
        CHECK(f.volume == doctest::Approx(0.5));
}

TEST_CASE("dual of a top cell is its circumcenter")
{
    const auto d = build_dual(testmesh::equilateral());
    CHECK(d.dual_volumes(2)(0) == 1.0);
    CHECK(d.fragment_counts(2)[0] == 1);
    const Eigen::VectorXd cc = d.circumcenters(2).col(0);
    CHECK(cc(1) == doctest::Approx(std::sqrt(3.0) / 6));
}

TEST_CASE("pentagon hub dual area is the circumcenter polygon")
{
    const auto c = testmesh::wheel(5);
    const auto d = build_dual(c);
    // shoelace over the five triangle circumcenters, in angular order
    std::vector<Eigen::Vector2d> ring;
    for (Index s = 0; s < 5; ++s)
        ring.push_back(d.circumcenters(2).col(s));
    std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) {
        return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0));
    });
    double area = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto& p = ring[i];
        const auto& q = ring[(i + 1) % ring.size()];
        area += 0.5 * (p(0) * q(1) - p(1) * q(0));
    }
    CHECK(d.dual_volumes(0)(0) == doctest::Approx(area).epsilon(1e-13));
    CHECK(d.fragment_counts(0)[0] == 10);
}

TEST_CASE("volume partition")
{
    for (const auto& c : strict_meshes()) {
        const auto d = build_dual(c);
        REQUIRE(d.well_centered() == WellCentered::strict);
        const double P = total_volume(c);
        const int n = c.dim();
        CHECK(d.dual_volumes(0).sum() == doctest::Approx(P).epsilon(1e-10));
        // pyramids over tau and *tau tile each top cell
        for (int k = 0; k <= n; ++k) {
            const double s = d.primal_volumes(k).dot(d.dual_volumes(k));
            CHECK(s == doctest::Approx(binomial(n, k) * P).epsilon(1e-10));
        }
    }
}

TEST_CASE("fragments are positive, orthogonal and sum to the cell volume")
{
    for (const auto& c : strict_meshes()) {
        const auto d = build_dual(c);
        const int n = c.dim();
        const double scale = shape_report(c).h;
        for (int k = 0; k < n; ++k)
            for (Index i = 0; i < c.count(k); ++i) {
                const DualCell cell = d.cell(k, i);
                CHECK(int(cell.fragments.size()) == d.fragment_counts(k)[i]);
                double sum = 0;
                const Eigen::MatrixXd E = edge_vectors(c.points(k, i));
                for (const auto& f : cell.fragments) {
                    CHECK(f.volume > 0);
                    sum += f.volume;
                    for (int j = 1; j <= n - k; ++j) {
                        const Eigen::VectorXd step =
                            d.circumcenters(k + j).col(f.flag[j]) - d.circumcenters(k).col(i);
                        if (E.cols() > 0)
                            CHECK((E.transpose() * step).norm() <= 1e-10 * scale * scale);
                    }
                }
                CHECK(sum == doctest::Approx(d.dual_volumes(k)(i)).epsilon(1e-12));
            }
    }
}

TEST_CASE("fragment counts of a tetrahedron")
{
    const auto d = build_dual(testmesh::tetrahedron());
    for (Index v = 0; v < 4; ++v)
        CHECK(d.fragment_counts(0)[v] == 6);
    for (Index e = 0; e < 6; ++e)
        CHECK(d.fragment_counts(1)[e] == 2);
    for (Index f = 0; f < 4; ++f)
        CHECK(d.fragment_counts(2)[f] == 1);
}

TEST_CASE("worked 2D example signs")
{
    const auto c = example_triangle();
    const auto d = build_dual(c);
    REQUIRE(d.well_centered() == WellCentered::strict);
    const Index e01 = c.index_of(1, std::vector<Index>{0, 1});
    const Index e02 = c.index_of(1, std::vector<Index>{0, 2});

    // *v0 = +[v0, c(v0v1), c(sigma)] - [v0, c(v0v2), c(sigma)]
    std::map<Index, int> sign;
    d.for_each_fragment(0, 0, [&](const DualFragment& f) { sign[f.flag[1]] = f.sign; });
    CHECK(sign[e01] == 1);
    CHECK(sign[e02] == -1);

    // the same signs from the triangle orientation of [v0, c(e), c(sigma)]
    for (Index e : {e01, e02}) {
        const Eigen::VectorXd v0 = c.vertices().col(0);
        const int geo = sgn(cross2(d.circumcenters(1).col(e) - v0, d.circumcenters(2).col(0) - v0));
        CHECK(geo == sign[e]);
    }

    // boundary of *v0 restricted to interior segments: sign * [c(e), c(sigma)].
    // Each such segment is dual_edge_sign * (*e), which fixes the coefficient.
    const Eigen::MatrixXi corrected = Eigen::MatrixXi(dual_boundary_matrix(d, 0));
    const Eigen::MatrixXi literature =
        Eigen::MatrixXi(dual_boundary_matrix(d, 0, DualConvention::literature));
    for (Index e : {e01, e02}) {
        const int expect = sign[e] * dual_edge_sign(d, e, 0);
        CHECK(expect == 1);
        CHECK(corrected(e, 0) == expect);
        CHECK(literature(e, 0) == -expect);
    }
    // the edge not touching v0 does not appear
    CHECK(corrected(c.index_of(1, std::vector<Index>{1, 2}), 0) == 0);
}

TEST_CASE("dual boundary agrees with the geometric boundary on a whole mesh")
{
    const auto c = generate({Family::perturbed_wheel, 2});
    const auto d = build_dual(c);
    const Eigen::MatrixXi b0 = Eigen::MatrixXi(dual_boundary_matrix(d, 0));
    const Eigen::MatrixXi b1 = Eigen::MatrixXi(dual_boundary_matrix(d, 1));
    for (Index v = 0; v < c.count(0); ++v)
        d.for_each_fragment(0, v, [&](const DualFragment& f) {
            CHECK(b0(f.flag[1], v) == f.sign * dual_edge_sign(d, f.flag[1], f.flag[2]));
        });
    // *e ends at c(sigma) with the sign of its segment towards sigma
    for (Index e = 0; e < c.count(1); ++e)
        for (Index s : c.cofaces(1, e))
            CHECK(b1(s, e) == dual_edge_sign(d, e, s));
}

TEST_CASE("1D dual boundary")
{
    const auto c = testmesh::line(2);
    const Eigen::MatrixXi b = Eigen::MatrixXi(dual_boundary_matrix(c, 0));
    // d*(v1) = [0.5, 1.5] has boundary (1.5) - (0.5) = *[1,2] - *[0,1]
    CHECK(b(0, 1) == -1);
    CHECK(b(1, 1) == 1);
    // literature convention flips the sign
    const Eigen::MatrixXi l = Eigen::MatrixXi(dual_boundary_matrix(c, 0, DualConvention::literature));
    CHECK(l(0, 1) == 1);
    CHECK(l(1, 1) == -1);
}

TEST_CASE("dual boundary matrix identities")
{
    for (const auto& c : strict_meshes()) {
        const int n = c.dim();
        for (int k = 0; k < n; ++k) {
            const Eigen::MatrixXi m = Eigen::MatrixXi(dual_boundary_matrix(c, k));
            const Eigen::MatrixXi p = Eigen::MatrixXi(boundary_matrix(c, k + 1)).transpose();
            const int factor = (k % 2) ? 1 : -1;
            CHECK(m == factor * p);
            if (k + 1 < n) {
                const Eigen::SparseMatrix<int> dd = dual_boundary_matrix(c, k + 1) * dual_boundary_matrix(c, k);
                CHECK(dd.norm() == 0);
            }
        }
        CHECK_THROWS_AS(dual_boundary_matrix(c, n), range_error);
    }
}

TEST_CASE("weakly well-centered meshes flag zero dual volumes")
{
    const auto c = generate({Family::square, 0});
    const auto d = build_dual(c);
    CHECK(d.well_centered() == WellCentered::weak);
    int zeros = 0;
    for (Index e = 0; e < c.count(1); ++e)
        if (d.zero_volume(1, e)) {
            ++zeros;
            const Eigen::MatrixXd p = c.points(1, e);
            // only diagonals are degenerate
            CHECK(std::abs(p(0, 1) - p(0, 0)) > 0);
            CHECK(std::abs(p(1, 1) - p(1, 0)) > 0);
        }
    CHECK(zeros > 0);
    for (Index v = 0; v < c.count(0); ++v)
        CHECK_FALSE(d.zero_volume(0, v));
}

TEST_CASE("refusals")
{
    const auto obtuse = build_complex(2, coords({{0, 0}, {1, 0}, {0.5, 0.2}}), {{0, 1, 2}});
    try {
        build_dual(obtuse);
        FAIL("expected well_centered_error");
    } catch (const well_centered_error& e) {
        CHECK(e.dim == 2);
        CHECK(e.simplex == 0);
    }
    CHECK(build_dual(testmesh::right_triangle()).well_centered() == WellCentered::weak);
    CHECK_THROWS_AS(build_dual(std::shared_ptr<const SimplicialComplex>()), range_error);
}

TEST_CASE("golden dual diagnostics of the pentagon fixture")
{
    const std::string dir = DECLAB_TEST_DATA;
    const auto c = load(dir + "/pentagon_l2.decmesh");
    const auto d = build_dual(c);
    std::ostringstream out;
    write_dual_diagnostics(d, out);

    std::ifstream golden(dir + "/pentagon_l2.dual");
    REQUIRE(golden.good());
    std::istringstream got(out.str());
    int lines = 0;
    int k1, k2, c1, c2;
    Index i1, i2;
    double v1, v2;
    while (golden >> k1 >> i1 >> v1 >> c1) {
        REQUIRE(bool(got >> k2 >> i2 >> v2 >> c2));
        CHECK(k1 == k2);
        CHECK(i1 == i2);
        CHECK(c1 == c2);
        CHECK(v2 == doctest::Approx(v1).epsilon(1e-11));
        ++lines;
    }
    CHECK(lines == c.count(0) + c.count(1) + c.count(2));
    CHECK_FALSE(bool(got >> k2));
}
