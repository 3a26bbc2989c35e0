#include "declab/dec_ops.hpp"
#include "declab/errors.hpp"
#include "declab/geometry.hpp"
#include "declab/mesh_library.hpp"
#include "test_meshes.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <sstream>

using namespace declab;
using testmesh::coords;
using testmesh::random_vector;

namespace {

Cochain random_cochain(const SimplicialComplex& c, int k, Side side, std::mt19937& rng)
{
    Cochain x = zero_cochain(c, k, side);
    x.values = random_vector(x.values.size(), rng);
    return x;
}

// Stiffness of linear elements: edge weight (cot a + cot b) / 2 from the
// angles opposite the edge.
Eigen::MatrixXd cotan_stiffness(const SimplicialComplex& c)
{
    const Eigen::MatrixXd& X = c.vertices();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(c.count(0), c.count(0));
    for (const auto& t : c.top_cells())
        for (int j = 0; j < 3; ++j) {
            const Index a = t[j], b = t[(j + 1) % 3], o = t[(j + 2) % 3];
            const Eigen::Vector2d u = X.col(a) - X.col(o), v = X.col(b) - X.col(o);
            const double cot = u.dot(v) / std::abs(u(0) * v(1) - u(1) * v(0));
            S(a, b) -= cot / 2;
            S(b, a) -= cot / 2;
            S(a, a) += cot / 2;
            S(b, b) += cot / 2;
        }
    return S;
}

std::vector<std::shared_ptr<const DualComplex>> strict_duals()
{
    std::vector<std::shared_ptr<const DualComplex>> out;
    for (auto c : {testmesh::wheel(5), testmesh::tetrahedron(), generate({Family::pentagon_wheel, 3}),
                   generate({Family::perturbed_wheel, 2}), generate({Family::corner, 2}),
                   testmesh::line(6, 0.25)})
        out.push_back(std::make_shared<const DualComplex>(build_dual(c)));
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace

TEST_CASE("Hodge star entries")
{
    SUBCASE("vertices carry their dual areas")
    {
        const auto d = build_dual(testmesh::wheel(5));
        const Eigen::VectorXd s = hodge_star(d, 0).diagonal();
        for (Index v = 0; v < 6; ++v)
            CHECK(s(v) == doctest::Approx(d.dual_volumes(0)(v)));
    }
    SUBCASE("1D edges")
    {
        const auto d = build_dual(testmesh::line(4, 0.25));
        const Eigen::VectorXd s = hodge_star(d, 1).diagonal();
        for (Index e = 0; e < 4; ++e)
            CHECK(s(e) == doctest::Approx(4.0));
    }
    SUBCASE("domain and codomain tags")
    {
        const auto d = build_dual(testmesh::tetrahedron());
        const auto s = hodge_star(d, 1);
        CHECK(s.domain() == Space{1, Side::primal, 3});
        CHECK(s.codomain() == Space{2, Side::dual, 3});
        const auto t = hodge_star(d, 2, Side::dual);
        CHECK(t.codomain() == Space{1, Side::primal, 3});
        CHECK_THROWS_AS(hodge_star(d, 4), range_error);
    }
}

TEST_CASE("star star is plus or minus the identity, exactly")
{
    for (const auto& d : strict_duals()) {
        const int n = d->dim();
        for (int k = 0; k <= n; ++k) {
            const LinearOperator ss = hodge_star(*d, n - k, Side::dual) * hodge_star(*d, k);
            CHECK(ss.domain() == ss.codomain());
            const double sign = ((k * (n - k)) % 2) ? -1.0 : 1.0;
            const Eigen::VectorXd diag = ss.diagonal();
            for (Eigen::Index i = 0; i < diag.size(); ++i)
                CHECK(diag(i) == sign);
        }
    }
}

TEST_CASE("Hodge star is an isometry")
{
    std::mt19937 rng(7);
    for (const auto& d : strict_duals())
        for (int k = 0; k <= d->dim(); ++k)
            for (int trial = 0; trial < 10; ++trial) {
                const Cochain w = random_cochain(d->primal(), k, Side::primal, rng);
                const Cochain sw = hodge_star(*d, k) * w;
                CHECK(rel(discrete_l2_dual(*d, sw), discrete_l2(*d, w)) < 1e-12);
                const Cochain back = hodge_star(*d, d->dim() - k, Side::dual) * sw;
                CHECK(rel(discrete_l2(*d, back), discrete_l2(*d, w)) < 1e-12);
            }
}

TEST_CASE("inner product basics")
{
    std::mt19937 rng(3);
    const auto d = build_dual(generate({Family::pentagon_wheel, 2}));
    const Cochain a = random_cochain(d.primal(), 1, Side::primal, rng);
    const Cochain b = random_cochain(d.primal(), 1, Side::primal, rng);
    CHECK(inner_product(d, a, b) == doctest::Approx(inner_product(d, b, a)).epsilon(1e-15));
    CHECK_THROWS_AS(inner_product(d, a, zero_cochain(d.primal(), 0)), space_mismatch_error);
    CHECK_THROWS_AS(discrete_l2(d, hodge_star(d, 1) * a), space_mismatch_error);

    Cochain x = zero_cochain(d.primal(), 0);
    x.values(4) = 3;
    CHECK(discrete_l2(d, x) * discrete_l2(d, x) == doctest::Approx(9 * d.dual_volumes(0)(4)));
    CHECK(max_norm(x) == 3);
}

TEST_CASE("exterior derivative of a 0-form on an edge")
{
    const auto c = testmesh::wheel(5);
    Cochain w = zero_cochain(c, 0);
    for (Index v = 0; v < 6; ++v)
        w.values(v) = v * v + 0.5;
    const Cochain dw = exterior_derivative(c, 0) * w;
    for (Index e = 0; e < c.count(1); ++e) {
        const auto s = c.simplex(1, e);
        CHECK(dw.values(e) == w.values(s[1]) - w.values(s[0]));
    }
}

TEST_CASE("d d vanishes on both sides")
{
    for (const auto& d : strict_duals()) {
        const auto& c = d->primal();
        const int n = c.dim();
        for (int k = 0; k + 2 <= n; ++k) {
            for (Side side : {Side::primal, Side::dual}) {
                const LinearOperator dd = exterior_derivative(c, k + 1, side) * exterior_derivative(c, k, side);
                CHECK(dd.matrix().norm() == 0);
            }
        }
    }
}

TEST_CASE("dual derivative is a signed primal boundary")
{
    for (const auto& d : strict_duals()) {
        const auto& c = d->primal();
        const int n = c.dim();
        for (int k = 1; k <= n; ++k) {
            const Eigen::MatrixXd got = Eigen::MatrixXd(exterior_derivative(c, n - k, Side::dual).matrix());
            const Eigen::MatrixXd b = Eigen::MatrixXi(boundary_matrix(c, k)).cast<double>();
            CHECK(got == ((k % 2) ? -1.0 : 1.0) * b);
        }
    }
}

TEST_CASE("worked example: dual derivative into the dual of a vertex")
{
    const auto c = build_complex(2, coords({{-0.424, -0.208}, {5.676, 0.112}, {3.14, 3.56}}), {{0, 1, 2}});
    const Eigen::MatrixXd dd = Eigen::MatrixXd(exterior_derivative(c, 1, Side::dual).matrix());
    // <d eta, *v0> = <eta, d*v0> = eta(*[v0,v1]) + eta(*[v0,v2])
    CHECK(dd(0, c.index_of(1, std::vector<Index>{0, 1})) == 1);
    CHECK(dd(0, c.index_of(1, std::vector<Index>{0, 2})) == 1);
    CHECK(dd(0, c.index_of(1, std::vector<Index>{1, 2})) == 0);
    // v1 is the head of [v0,v1] and the tail of [v1,v2]
    CHECK(dd(1, c.index_of(1, std::vector<Index>{0, 1})) == -1);
    CHECK(dd(1, c.index_of(1, std::vector<Index>{1, 2})) == 1);
}

TEST_CASE("codifferential on a 1D chain")
{
    const auto d = build_dual(testmesh::line(2));
    Cochain eta = zero_cochain(d.primal(), 1);
    eta.values << 2.0, 5.0;
    const Cochain div = codifferential(d, 1) * eta;
    // minus the divergence: (eta_01 - eta_12) / |*v|
    CHECK(div.values(1) == doctest::Approx(2.0 - 5.0));
    CHECK(div.values(0) == doctest::Approx(-2.0 / 0.5));
    CHECK(div.values(2) == doctest::Approx(5.0 / 0.5));
    CHECK_THROWS_AS(codifferential(d, 0), range_error);
}

TEST_CASE("adjointness of d and delta")
{
    std::mt19937 rng(11);
    for (const auto& d : strict_duals()) {
        const auto& c = d->primal();
        for (int k = 1; k <= c.dim(); ++k)
            for (int trial = 0; trial < 5; ++trial) {
                const Cochain w = random_cochain(c, k - 1, Side::primal, rng);
                const Cochain eta = random_cochain(c, k, Side::primal, rng);
                const double lhs = inner_product(*d, exterior_derivative(c, k - 1) * w, eta);
                const double rhs = inner_product(*d, w, codifferential(*d, k) * eta);
                CHECK(rel(lhs, rhs) < 1e-12);
            }
    }
}

TEST_CASE("adjointness on the cube with singular stars")
{
    std::mt19937 rng(5);
    const auto d = build_dual(generate({Family::cube_kuhn, 1}));
    const auto& c = d.primal();
    CHECK_THROWS_AS(codifferential(d, 2), singular_star_error);
    for (int k = 1; k <= 3; ++k) {
        Cochain w = random_cochain(c, k - 1, Side::primal, rng);
        for (Index i = 0; i < w.values.size(); ++i)
            if (d.zero_volume(k - 1, i))
                w.values(i) = 0;
        const Cochain eta = random_cochain(c, k, Side::primal, rng);
        const double lhs = inner_product(d, exterior_derivative(c, k - 1) * w, eta);
        const double rhs = inner_product(d, w, codifferential(d, k, Inversion::pseudo) * eta);
        CHECK(rel(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("0-form Laplacian")
{
    SUBCASE("constants are harmonic")
    {
        for (const auto& d : strict_duals()) {
            Cochain one = zero_cochain(d->primal(), 0);
            one.values.setOnes();
            CHECK(max_norm(laplace(*d, 0) * one) < 1e-12 / std::pow(shape_report(d->primal()).h, 2));
        }
    }
    SUBCASE("linear functions are harmonic at interior vertices")
    {
        for (const auto& d : strict_duals()) {
            const auto& c = d->primal();
            if (c.dim() != 2)
                continue;
            Cochain x = zero_cochain(c, 0);
            x.values = c.vertices().row(0).transpose() - 0.3 * c.vertices().row(1).transpose();
            const Cochain lx = laplace(*d, 0) * x;
            for (Index v = 0; v < c.count(0); ++v)
                if (!c.on_boundary(0, v))
                    CHECK(std::abs(lx.values(v)) < 1e-10);
        }
    }
    SUBCASE("star0 Delta0 equals the cotan stiffness")
    {
        for (const auto& d : strict_duals()) {
            const auto& c = d->primal();
            if (c.dim() != 2)
                continue;
            const Eigen::MatrixXd S = Eigen::MatrixXd((hodge_star(*d, 0) * laplace(*d, 0)).matrix());
            const Eigen::MatrixXd C = cotan_stiffness(c);
            CHECK((S - C).cwiseAbs().maxCoeff() <= 1e-10 * C.cwiseAbs().maxCoeff());
            CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * C.cwiseAbs().maxCoeff());
        }
    }
    SUBCASE("semidefinite with constant kernel")
    {
        const auto d = build_dual(generate({Family::perturbed_wheel, 1}));
        const Eigen::MatrixXd S = Eigen::MatrixXd((hodge_star(d, 0) * laplace(d, 0)).matrix());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
        const Eigen::VectorXd ev = eig.eigenvalues();
        CHECK(std::abs(ev(0)) < 1e-12 * ev(ev.size() - 1));
        CHECK(ev(1) > 1e-6 * ev(ev.size() - 1));
        const Eigen::VectorXd kernel = eig.eigenvectors().col(0);
        CHECK((kernel.array() - kernel.mean()).abs().maxCoeff() < 1e-10);
    }
    SUBCASE("general degrees compose")
    {
        const auto d = build_dual(testmesh::tetrahedron());
        for (int k = 0; k <= 3; ++k) {
            const auto L = laplace(d, k);
            CHECK(L.domain() == Space{k, Side::primal, 3});
            CHECK(L.codomain() == Space{k, Side::primal, 3});
        }
    }
}

TEST_CASE("norm of d on dual cochains grows like 1/h")
{
    // largest ratio ||d x|| / ||x|| for dual 1-cochains x in 2D, by power iteration
    std::vector<double> scaled;
    for (int level = 1; level <= 4; ++level) {
        const auto c = generate({Family::pentagon_wheel, level});
        const auto d = build_dual(c);
        const LinearOperator D = exterior_derivative(c, 1, Side::dual);
        const Eigen::VectorXd wx = d.primal_volumes(1).cwiseQuotient(d.dual_volumes(1));
        const Eigen::VectorXd wy = d.dual_volumes(0).cwiseInverse();
        std::mt19937 rng(level);
        Eigen::VectorXd z = random_vector(c.count(1), rng);
        double lambda = 0;
        for (int it = 0; it < 400; ++it) {
            const Eigen::VectorXd x = z.cwiseQuotient(wx.cwiseSqrt());
            const Eigen::VectorXd y = D.apply(x);
            Eigen::VectorXd back = D.matrix().transpose() * wy.cwiseProduct(y);
            back = back.cwiseQuotient(wx.cwiseSqrt());
            lambda = z.dot(back) / z.dot(z);
            z = back / back.norm();
        }
        scaled.push_back(std::sqrt(lambda) * shape_report(c).h);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 1.5);
}

TEST_CASE("operator algebra")
{
    const auto d = build_dual(testmesh::wheel(5));
    const auto& c = d.primal();
    CHECK_THROWS_AS(hodge_star(d, 0) * exterior_derivative(c, 1), space_mismatch_error);
    CHECK_THROWS_AS(hodge_star(d, 0) + hodge_star(d, 1), space_mismatch_error);
    CHECK_THROWS_AS(hodge_star(d, 1) * zero_cochain(c, 0), space_mismatch_error);
    CHECK_THROWS_AS(exterior_derivative(c, 2), range_error);

    const auto sum = hodge_star(d, 1) + hodge_star(d, 1).scaled(2.0);
    CHECK((sum.diagonal() - 3 * hodge_star(d, 1).diagonal()).norm() < 1e-14);
    const auto id = hodge_star(d, 1).inverse() * hodge_star(d, 1);
    CHECK((id.diagonal().array() - 1).abs().maxCoeff() == 0);

    const auto sq = build_dual(generate({Family::square, 0}));
    try {
        hodge_star(sq, 1).inverse();
        FAIL("expected singular_star_error");
    } catch (const singular_star_error& e) {
        CHECK(e.dim == 1);
        CHECK(sq.zero_volume(1, Index(e.simplex)));
    }
    const Eigen::VectorXd p = hodge_star(sq, 1).pseudo_inverse().diagonal();
    for (Index e = 0; e < sq.primal().count(1); ++e)
        CHECK((p(e) == 0) == sq.zero_volume(1, e));
}

TEST_CASE("operator export and cache")
{
    const auto d = std::make_shared<const DualComplex>(build_dual(testmesh::wheel(5)));
    std::ostringstream out;
    write_operator(out, "d0", exterior_derivative(d->primal(), 0));
    std::istringstream in(out.str());
    std::string op, name, ktag, side;
    long rows, cols;
    in >> op >> name >> ktag >> side >> rows >> cols;
    CHECK(op == "op");
    CHECK(name == "d0");
    CHECK(ktag == "k=0");
    CHECK(side == "side=primal");
    CHECK(rows == 10);
    CHECK(cols == 6);
    int triplets = 0;
    long r, col;
    double v;
    while (in >> r >> col >> v) {
        CHECK(std::abs(v) == 1);
        ++triplets;
    }
    CHECK(triplets == 20);

    DecOperators ops(d);
    CHECK(&ops.star(1) == &ops.star(1));
    CHECK(&ops.laplacian(0) == &ops.laplacian(0));
    CHECK(ops.delta(1).matrix().isApprox(codifferential(*d, 1).matrix()));
    CHECK(ops.d(0, Side::dual).codomain() == Space{1, Side::dual, 2});
}
