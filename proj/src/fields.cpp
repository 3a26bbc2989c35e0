#include "declab/fields.hpp"

#include "declab/errors.hpp"
#include "declab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace declab {

const std::vector<Tuple>& increasing_tuples(int n, int k)
{
    static std::mutex lock;
    static std::map<std::pair<int, int>, std::vector<Tuple>> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    std::vector<Tuple> out;
    if (k >= 0 && k <= n) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + k, true);
        do {
            Tuple t;
            for (int i = 0; i < n; ++i)
                if (pick[i])
                    t.push_back(i);
            out.push_back(t);
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return cache.emplace(key, std::move(out)).first->second;
}

FormField scalar_field(int n, std::function<double(const Eigen::VectorXd&)> f)
{
    return {0, n, [f = std::move(f)](const Eigen::VectorXd& x) {
                return Eigen::VectorXd::Constant(1, f(x));
            }};
}

FormField volume_field(int n, std::function<double(const Eigen::VectorXd&)> f)
{
    return {n, n, [f = std::move(f)](const Eigen::VectorXd& x) {
                return Eigen::VectorXd::Constant(1, f(x));
            }};
}

namespace {

int permutation_sign(const Tuple& p)
{
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j])
                sign = -sign;
    return sign;
}

} // namespace

Eigen::VectorXd algebraic_star(const Eigen::VectorXd& coeffs, int n, int k)
{
    const auto& from = increasing_tuples(n, k);
    const auto& to = increasing_tuples(n, n - k);
    if (coeffs.size() != Eigen::Index(from.size()))
        throw range_error("coefficient vector does not match the form degree");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(to.size()));
    for (std::size_t a = 0; a < from.size(); ++a) {
        Tuple comp;
        for (int i = 0; i < n; ++i)
            if (std::find(from[a].begin(), from[a].end(), i) == from[a].end())
                comp.push_back(i);
        Tuple perm = from[a];
        perm.insert(perm.end(), comp.begin(), comp.end());
        const auto b = std::find(to.begin(), to.end(), comp) - to.begin();
        out(b) += permutation_sign(perm) * coeffs(Eigen::Index(a));
    }
    return out;
}

FormField star(const FormField& field)
{
    const int n = field.dim, k = field.degree;
    auto eval = field.eval;
    return {n - k, n, [eval, n, k](const Eigen::VectorXd& x) { return algebraic_star(eval(x), n, k); }};
}

double evaluate_on(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& vectors)
{
    const int n = int(vectors.rows()), k = int(vectors.cols());
    if (k == 0)
        return coeffs(0);
    const auto& tuples = increasing_tuples(n, k);
    double v = 0;
    Eigen::MatrixXd minor(k, k);
    for (std::size_t a = 0; a < tuples.size(); ++a) {
        if (coeffs(Eigen::Index(a)) == 0)
            continue;
        for (int r = 0; r < k; ++r)
            minor.row(r) = vectors.row(tuples[a][r]);
        v += coeffs(Eigen::Index(a)) * minor.determinant();
    }
    return v;
}

double integrate_form(const FormField& field, const Eigen::MatrixXd& pts, int degree)
{
    const int k = int(pts.cols()) - 1;
    if (field.degree != k)
        throw range_error("a " + std::to_string(field.degree) + "-form integrated over a " +
                          std::to_string(k) + "-simplex");
    const QuadratureRule& rule = simplex_quadrature(k, degree);
    const Eigen::MatrixXd E = edge_vectors(pts);
    double sum = 0;
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q)
        sum += rule.weights(q) * evaluate_on(field(pts * rule.nodes.col(q)), E);
    return sum / factorial(k);
}

Cochain derham_primal(const FormField& field, const SimplicialComplex& complex, int degree)
{
    const int k = field.degree;
    if (k < 0 || k > complex.dim() || field.dim != complex.dim())
        throw range_error("field does not match the complex");
    Cochain c = zero_cochain(complex, k);
    for (Index i = 0; i < complex.count(k); ++i)
        c.values(i) = integrate_form(field, complex.oriented_points(k, i), degree);
    return c;
}

Cochain derham_dual(const FormField& field, const DualComplex& dual, int degree)
{
    const int n = dual.dim();
    if (field.dim != n || field.degree < 0 || field.degree > n)
        throw range_error("field does not match the complex");
    const int k = n - field.degree;
    Cochain c = zero_cochain(dual.primal(), field.degree, Side::dual);
    Eigen::MatrixXd pts(n, n - k + 1);
    for (Index i = 0; i < dual.primal().count(k); ++i) {
        double v = 0;
        dual.for_each_fragment(k, i, [&](const DualFragment& f) {
            for (int j = 0; j <= n - k; ++j)
                pts.col(j) = dual.circumcenters(k + j).col(f.flag[j]);
            v += f.sign * integrate_form(field, pts, degree);
        });
        c.values(i) = v;
    }
    return c;
}

namespace {

struct LocalFace {
    std::vector<int> local;  // positions within the top cell's canonical vertex list
    Index id;
    int orientation;
};

std::vector<LocalFace> local_faces(const SimplicialComplex& c, Index cell, int k)
{
    const int n = c.dim();
    const auto verts = c.simplex(n, cell);
    std::vector<LocalFace> out;
    std::vector<bool> pick(n + 1, false);
    std::fill(pick.begin(), pick.begin() + k + 1, true);
    do {
        LocalFace f;
        std::vector<Index> ids;
        for (int i = 0; i <= n; ++i)
            if (pick[i]) {
                f.local.push_back(i);
                ids.push_back(verts[i]);
            }
        f.id = c.index_of(k, ids);
        f.orientation = c.orientation(k, f.id);
        out.push_back(std::move(f));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

// Coefficients of a_1 ^ ... ^ a_m for 1-forms given as columns.
Eigen::VectorXd wedge(const Eigen::MatrixXd& ones)
{
    const int n = int(ones.rows()), m = int(ones.cols());
    const auto& tuples = increasing_tuples(n, m);
    Eigen::VectorXd out(Eigen::Index(tuples.size()));
    if (m == 0) {
        out(0) = 1;
        return out;
    }
    Eigen::MatrixXd minor(m, m);
    for (std::size_t a = 0; a < tuples.size(); ++a) {
        for (int r = 0; r < m; ++r)
            minor.row(r) = ones.row(tuples[a][r]);
        out(Eigen::Index(a)) = minor.determinant();
    }
    return out;
}

// Whitney form of a local face at barycentric point `bary`.
Eigen::VectorXd whitney_basis(const Eigen::MatrixXd& grads, const std::vector<int>& local,
                              const Eigen::VectorXd& bary)
{
    const int k = int(local.size()) - 1;
    const int n = int(grads.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(increasing_tuples(n, k).size()));
    Eigen::MatrixXd ones(n, k);
    for (int j = 0; j <= k; ++j) {
        int c = 0;
        for (int l = 0; l <= k; ++l)
            if (l != j)
                ones.col(c++) = grads.col(local[l]);
        out += ((j % 2) ? -1.0 : 1.0) * bary(local[j]) * wedge(ones);
    }
    return factorial(k) * out;
}

Eigen::VectorXd whitney_basis_derivative(const Eigen::MatrixXd& grads, const std::vector<int>& local)
{
    const int k = int(local.size()) - 1;
    Eigen::MatrixXd ones(grads.rows(), k + 1);
    for (int l = 0; l <= k; ++l)
        ones.col(l) = grads.col(local[l]);
    return factorial(k + 1) * wedge(ones);
}

void barycentric_gradients(const SimplicialComplex& c, Index cell, Eigen::MatrixXd& grads)
{
    const int n = c.dim();
    const Eigen::MatrixXd P = c.points(n, cell);
    const Eigen::MatrixXd inv = edge_vectors(P).inverse();
    grads.resize(n, n + 1);
    grads.rightCols(n) = inv.transpose();
    grads.col(0) = -grads.rightCols(n).rowwise().sum();
}

} // namespace

WhitneyField::WhitneyField(const SimplicialComplex& complex, Cochain cochain)
    : complex_(&complex), cochain_(std::move(cochain))
{
    if (cochain_.space.side != Side::primal)
        throw space_mismatch_error("Whitney map expects a primal cochain");
    if (cochain_.values.size() != complex.count(cochain_.space.degree))
        throw space_mismatch_error("cochain length does not match the mesh");
}

void WhitneyField::cell_gradients(Index cell, Eigen::MatrixXd& grads) const
{
    barycentric_gradients(*complex_, cell, grads);
}

Eigen::VectorXd WhitneyField::value_in_cell(Index cell, const Eigen::VectorXd& bary) const
{
    const int k = degree();
    Eigen::MatrixXd grads;
    cell_gradients(cell, grads);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(increasing_tuples(complex_->dim(), k).size()));
    for (const auto& f : local_faces(*complex_, cell, k))
        out += f.orientation * cochain_.values(f.id) * whitney_basis(grads, f.local, bary);
    return out;
}

Eigen::VectorXd WhitneyField::derivative_in_cell(Index cell) const
{
    const int k = degree();
    const int n = complex_->dim();
    if (k == n)
        return Eigen::VectorXd::Zero(0);
    Eigen::MatrixXd grads;
    cell_gradients(cell, grads);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(increasing_tuples(n, k + 1).size()));
    for (const auto& f : local_faces(*complex_, cell, k))
        out += f.orientation * cochain_.values(f.id) * whitney_basis_derivative(grads, f.local);
    return out;
}

Eigen::VectorXd WhitneyField::operator()(const Eigen::VectorXd& x) const
{
    const int n = complex_->dim();
    for (Index s = 0; s < complex_->count(n); ++s) {
        const Eigen::MatrixXd P = complex_->points(n, s);
        Eigen::VectorXd bary(n + 1);
        bary.tail(n) = edge_vectors(P).lu().solve(x - P.col(0));
        bary(0) = 1 - bary.tail(n).sum();
        if (bary.minCoeff() >= -1e-12)
            return value_in_cell(s, bary);
    }
    throw range_error("point outside the mesh");
}

WhitneyField whitney_map(const Cochain& cochain, const SimplicialComplex& complex)
{
    return WhitneyField(complex, cochain);
}

Eigen::SparseMatrix<double> whitney_mass_matrix(const SimplicialComplex& complex, int k)
{
    const int n = complex.dim();
    const QuadratureRule& rule = simplex_quadrature(n, 2);
    std::vector<Eigen::Triplet<double>> t;
    Eigen::MatrixXd grads;
    for (Index s = 0; s < complex.count(n); ++s) {
        barycentric_gradients(complex, s, grads);
        const double vol = std::abs(signed_volume(complex.points(n, s)));
        const auto faces = local_faces(complex, s, k);
        const int m = int(faces.size());
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            Eigen::MatrixXd phi(Eigen::Index(increasing_tuples(n, k).size()), m);
            for (int a = 0; a < m; ++a)
                phi.col(a) = faces[a].orientation * whitney_basis(grads, faces[a].local, rule.nodes.col(q));
            local += rule.weights(q) * vol * phi.transpose() * phi;
        }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                t.emplace_back(faces[a].id, faces[b].id, local(a, b));
    }
    Eigen::SparseMatrix<double> M(complex.count(k), complex.count(k));
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

double whitney_l2_norm(const Cochain& cochain, const SimplicialComplex& complex)
{
    if (cochain.space.side != Side::primal)
        throw space_mismatch_error("Whitney norm expects a primal cochain");
    const Eigen::SparseMatrix<double> M = whitney_mass_matrix(complex, cochain.space.degree);
    return std::sqrt(std::max(0.0, cochain.values.dot(M * cochain.values)));
}

ConsistencyRecord consistency_probe(const FormField& field, const DualComplex& dual, int degree)
{
    const int n = dual.dim(), k = field.degree;
    const Cochain r = derham_primal(field, dual.primal(), degree);
    const Cochain rstar = derham_dual(star(field), dual, degree);
    Cochain primal_side = hodge_star(dual, k) * r;
    primal_side.values -= rstar.values;
    const double sign = ((k * (n - k)) % 2) ? -1.0 : 1.0;
    Cochain dual_side = hodge_star(dual, n - k, Side::dual) * rstar;
    dual_side.values -= sign * r.values;

    ConsistencyRecord rec;
    rec.err_max = max_norm(primal_side);
    rec.err_l2 = discrete_l2_dual(dual, primal_side);
    rec.err_dual = max_norm(dual_side);
    rec.err_dual_l2 = discrete_l2(dual, dual_side);
    return rec;
}

LaplaceDecomposition laplace_decomposition(const FormField& u, const FormField& du,
                                           const FormField& f, const DualComplex& dual, int degree)
{
    const SimplicialComplex& c = dual.primal();
    const int n = c.dim();
    LaplaceDecomposition out;
    for (Index v = 0; v < c.count(0); ++v)
        if (!c.on_boundary(0, v))
            out.interior.push_back(v);

    const Cochain ru = derham_primal(u, c, degree);
    const Cochain rf = derham_primal(f, c, degree);
    out.lhs = laplace(dual, 0) * ru;
    out.lhs.values -= rf.values;

    Cochain e1 = hodge_star(dual, 1) * derham_primal(du, c, degree);
    e1.values -= derham_dual(star(du), dual, degree).values;
    const LinearOperator inv0 = hodge_star(dual, 0).inverse();
    out.term1 = inv0 * (exterior_derivative(c, n - 1, Side::dual) * e1);
    out.term1.values = -out.term1.values;

    auto fvol = volume_field(n, [&f](const Eigen::VectorXd& x) { return f(x)(0); });
    out.term2 = inv0 * derham_dual(fvol, dual, degree);
    out.term2.values -= rf.values;

    std::vector<bool> inside(std::size_t(c.count(0)), false);
    for (Index v : out.interior)
        inside[v] = true;
    for (Index v = 0; v < c.count(0); ++v)
        if (!inside[v]) {
            out.lhs.values(v) = 0;
            out.term1.values(v) = 0;
            out.term2.values(v) = 0;
        }
    return out;
}

} // namespace declab
