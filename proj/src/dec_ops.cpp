#include "declab/dec_ops.hpp"

#include "declab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace declab {

const char* to_string(Side s) { return s == Side::primal ? "primal" : "dual"; }

std::string to_string(const Space& s)
{
    return std::string(to_string(s.side)) + " " + std::to_string(s.degree) + "-cochains";
}

Cochain zero_cochain(const SimplicialComplex& complex, int k, Side side)
{
    Space s{k, side, complex.dim()};
    return {s, Eigen::VectorXd::Zero(complex.count(s.simplex_dim()))};
}

namespace {

void require_same(const Space& a, const Space& b, const char* what)
{
    if (!(a == b))
        throw space_mismatch_error(std::string(what) + ": " + to_string(a) + " vs " + to_string(b));
}

} // namespace

LinearOperator LinearOperator::sparse(Space from, Space to, Eigen::SparseMatrix<double> m)
{
    LinearOperator op;
    op.from_ = from;
    op.to_ = to;
    op.m_ = std::move(m);
    op.m_.makeCompressed();
    return op;
}

LinearOperator LinearOperator::diagonal(Space from, Space to, Eigen::VectorXd num, Eigen::VectorXd den)
{
    if (num.size() != den.size())
        throw range_error("diagonal operator with mismatched factors");
    LinearOperator op;
    op.from_ = from;
    op.to_ = to;
    op.diag_ = true;
    op.num_ = std::move(num);
    op.den_ = std::move(den);
    return op;
}

Eigen::Index LinearOperator::rows() const { return diag_ ? num_.size() : m_.rows(); }
Eigen::Index LinearOperator::cols() const { return diag_ ? num_.size() : m_.cols(); }

Eigen::VectorXd LinearOperator::diagonal() const
{
    if (!diag_)
        return Eigen::VectorXd(m_.diagonal());
    return num_.cwiseQuotient(den_);
}

Eigen::SparseMatrix<double> LinearOperator::matrix() const
{
    if (!diag_)
        return m_;
    Eigen::SparseMatrix<double> m(num_.size(), num_.size());
    m.reserve(Eigen::VectorXi::Constant(num_.size(), 1));
    const Eigen::VectorXd v = diagonal();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        m.insert(i, i) = v(i);
    m.makeCompressed();
    return m;
}

Eigen::VectorXd LinearOperator::apply(const Eigen::VectorXd& x) const
{
    if (x.size() != cols())
        throw space_mismatch_error("operator applied to a vector of the wrong length");
    if (diag_)
        return diagonal().cwiseProduct(x);
    return m_ * x;
}

Cochain LinearOperator::operator*(const Cochain& c) const
{
    require_same(from_, c.space, "operator domain");
    return {to_, apply(c.values)};
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const
{
    require_same(from_, rhs.to_, "composition");
    if (diag_ && rhs.diag_)
        return diagonal(rhs.from_, to_, num_.cwiseProduct(rhs.num_), den_.cwiseProduct(rhs.den_));
    if (diag_)
        return sparse(rhs.from_, to_, diagonal().asDiagonal() * rhs.m_);
    if (rhs.diag_)
        return sparse(rhs.from_, to_, m_ * rhs.diagonal().asDiagonal());
    return sparse(rhs.from_, to_, Eigen::SparseMatrix<double>(m_ * rhs.m_));
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const
{
    require_same(from_, rhs.from_, "sum domain");
    require_same(to_, rhs.to_, "sum codomain");
    if (diag_ && rhs.diag_)
        return diagonal(from_, to_, diagonal() + rhs.diagonal(), Eigen::VectorXd::Ones(rows()));
    return sparse(from_, to_, Eigen::SparseMatrix<double>(matrix() + rhs.matrix()));
}

LinearOperator LinearOperator::scaled(double s) const
{
    if (diag_)
        return diagonal(from_, to_, s * num_, den_);
    return sparse(from_, to_, s * m_);
}

LinearOperator LinearOperator::inverse() const
{
    if (!diag_)
        throw range_error("only diagonal operators are inverted");
    for (Eigen::Index i = 0; i < num_.size(); ++i)
        if (num_(i) == 0) {
            std::ostringstream msg;
            msg << "Hodge star has a zero entry at " << from_.simplex_dim() << "-simplex " << i;
            throw singular_star_error(msg.str(), from_.simplex_dim(), long(i));
        }
    return diagonal(to_, from_, den_, num_);
}

LinearOperator LinearOperator::pseudo_inverse() const
{
    if (!diag_)
        throw range_error("only diagonal operators are inverted");
    Eigen::VectorXd num = den_, den = num_;
    for (Eigen::Index i = 0; i < num.size(); ++i)
        if (den(i) == 0) {
            num(i) = 0;
            den(i) = 1;
        }
    return diagonal(to_, from_, num, den);
}

LinearOperator hodge_star(const DualComplex& dual, int k, Side side)
{
    const int n = dual.dim();
    if (k < 0 || k > n)
        throw range_error("Hodge star degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    const int sdim = side == Side::primal ? k : n - k;
    Eigen::VectorXd primal = dual.primal_volumes(sdim);
    Eigen::VectorXd dvol = dual.dual_volumes(sdim);
    for (Eigen::Index i = 0; i < dvol.size(); ++i)
        if (dual.zero_volume(sdim, Index(i)))
            dvol(i) = 0;
    if (side == Side::primal)
        return LinearOperator::diagonal({k, Side::primal, n}, {n - k, Side::dual, n}, dvol, primal);
    const double sign = ((k * (n - k)) % 2) ? -1.0 : 1.0;
    return LinearOperator::diagonal({k, Side::dual, n}, {n - k, Side::primal, n}, sign * primal, dvol);
}

LinearOperator exterior_derivative(const SimplicialComplex& complex, int k, Side side)
{
    const int n = complex.dim();
    if (k < 0 || k >= n)
        throw range_error("exterior derivative degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(n - 1) + "]");
    if (side == Side::primal) {
        Eigen::SparseMatrix<double> m =
            Eigen::SparseMatrix<int>(boundary_matrix(complex, k + 1).transpose()).cast<double>();
        return LinearOperator::sparse({k, Side::primal, n}, {k + 1, Side::primal, n}, std::move(m));
    }
    // A dual k-cochain lives on *eta with eta an (n-k)-simplex; its coboundary
    // pairs with the dual boundary of *tau, tau an (n-k-1)-simplex.
    Eigen::SparseMatrix<double> m =
        Eigen::SparseMatrix<int>(dual_boundary_matrix(complex, n - k - 1).transpose()).cast<double>();
    return LinearOperator::sparse({k, Side::dual, n}, {k + 1, Side::dual, n}, std::move(m));
}

LinearOperator codifferential(const DualComplex& dual, int k, Inversion inv)
{
    const int n = dual.dim();
    if (k < 1 || k > n)
        throw range_error("codifferential degree " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
    const LinearOperator star_k = hodge_star(dual, k);
    const LinearOperator star_km1 = hodge_star(dual, k - 1);
    const LinearOperator back = inv == Inversion::strict ? star_km1.inverse() : star_km1.pseudo_inverse();
    const LinearOperator dd = exterior_derivative(dual.primal(), n - k, Side::dual);
    return (back * (dd * star_k)).scaled((k % 2) ? -1.0 : 1.0);
}

LinearOperator laplace(const DualComplex& dual, int k, Inversion inv)
{
    const int n = dual.dim();
    if (k < 0 || k > n)
        throw range_error("Laplacian degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    const SimplicialComplex& c = dual.primal();
    if (k == 0)
        return codifferential(dual, 1, inv) * exterior_derivative(c, 0);
    if (k == n)
        return exterior_derivative(c, n - 1) * codifferential(dual, n, inv);
    return codifferential(dual, k + 1, inv) * exterior_derivative(c, k) +
           exterior_derivative(c, k - 1) * codifferential(dual, k, inv);
}

double inner_product(const DualComplex& dual, const Cochain& a, const Cochain& b)
{
    require_same(a.space, b.space, "inner product");
    const int sdim = a.space.simplex_dim();
    const auto& pv = dual.primal_volumes(sdim);
    const auto& dv = dual.dual_volumes(sdim);
    if (a.values.size() != pv.size() || b.values.size() != pv.size())
        throw space_mismatch_error("cochain length does not match the mesh");
    double sum = 0;
    for (Eigen::Index i = 0; i < pv.size(); ++i) {
        const double ab = a.values(i) * b.values(i);
        if (ab == 0)
            continue;
        sum += a.space.side == Side::primal ? ab * dv(i) / pv(i) : ab * pv(i) / dv(i);
    }
    return sum;
}

double discrete_l2(const DualComplex& dual, const Cochain& c)
{
    if (c.space.side != Side::primal)
        throw space_mismatch_error("discrete_l2 expects a primal cochain");
    return std::sqrt(inner_product(dual, c, c));
}

double discrete_l2_dual(const DualComplex& dual, const Cochain& c)
{
    if (c.space.side != Side::dual)
        throw space_mismatch_error("discrete_l2_dual expects a dual cochain");
    return std::sqrt(inner_product(dual, c, c));
}

double max_norm(const Cochain& c) { return c.values.size() ? c.values.cwiseAbs().maxCoeff() : 0.0; }

double h1_seminorm(const DualComplex& dual, const Cochain& c)
{
    if (c.space.side != Side::primal)
        throw space_mismatch_error("h1_seminorm expects a primal cochain");
    return discrete_l2(dual, exterior_derivative(dual.primal(), c.space.degree) * c);
}

void write_operator(std::ostream& out, const std::string& name, const LinearOperator& op)
{
    out << "op " << name << " k=" << op.domain().degree << " side=" << to_string(op.domain().side)
        << " " << op.rows() << " " << op.cols() << "\n";
    const Eigen::SparseMatrix<double> m = op.matrix();
    char buf[96];
    for (int j = 0; j < m.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) {
            std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", long(it.row()), long(it.col()), it.value());
            out << buf;
        }
}

DecOperators::DecOperators(std::shared_ptr<const DualComplex> dual) : dual_(std::move(dual)) {}

const LinearOperator& DecOperators::star(int k, Side side)
{
    auto key = std::make_tuple('s', k, int(side));
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, hodge_star(*dual_, k, side)).first;
    return it->second;
}

const LinearOperator& DecOperators::d(int k, Side side)
{
    auto key = std::make_tuple('d', k, int(side));
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, exterior_derivative(dual_->primal(), k, side)).first;
    return it->second;
}

const LinearOperator& DecOperators::delta(int k, Inversion inv)
{
    auto key = std::make_tuple('c', k, int(inv));
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, codifferential(*dual_, k, inv)).first;
    return it->second;
}

const LinearOperator& DecOperators::laplacian(int k, Inversion inv)
{
    auto key = std::make_tuple('l', k, int(inv));
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, laplace(*dual_, k, inv)).first;
    return it->second;
}

} // namespace declab
