#include "declab/dual_mesh.hpp"

#include "declab/errors.hpp"
#include "declab/geometry.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace declab {

namespace {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, max_dim, max_dim>;

struct FlagGeometry {
    const SimplicialComplex& c;
    const std::array<Eigen::MatrixXd, max_dim + 1>& centers;
    const std::array<Eigen::MatrixXd, max_dim + 1>& bary;
    const std::array<Eigen::VectorXd, max_dim + 1>& vol;
};

// Walk every flag tau = tau_k < ... < tau_n and report each fragment.
template <typename F>
void enumerate_flags(const FlagGeometry& g, int k, Index i, F&& emit)
{
    const int n = g.c.dim();
    DualFragment frag;
    frag.flag[0] = i;
    if (k == n) {
        frag.sign = 1;
        frag.volume = 1;
        emit(frag);
        return;
    }
    SmallMatrix M(n, n), Mb(n, n);
    const auto s = g.c.simplex(k, i);
    const auto& X = g.c.vertices();
    for (int j = 1; j <= k; ++j) {
        M.col(j - 1) = X.col(s[j]) - X.col(s[0]);
        Mb.col(j - 1) = M.col(j - 1);
    }
    const double scale = factorial(k) * g.vol[k](i) * factorial(n - k);
    const auto c0 = g.centers[k].col(i);
    const auto b0 = g.bary[k].col(i);

    auto rec = [&](auto&& self, int level, Index top) -> void {
        if (level == n) {
            const double det = M.determinant();
            const double detb = Mb.determinant();
            frag.sign = detb > 0 ? 1 : -1;
            frag.volume = frag.sign * det / scale;
            emit(frag);
            return;
        }
        for (Index up : g.c.cofaces(level, top)) {
            frag.flag[level + 1 - k] = up;
            M.col(level) = g.centers[level + 1].col(up) - c0;
            Mb.col(level) = g.bary[level + 1].col(up) - b0;
            self(self, level + 1, up);
        }
    };
    rec(rec, k, i);
}

} // namespace

Eigen::VectorXd circumcenter(const Eigen::MatrixXd& pts)
{
    const auto cs = circumsphere(pts);
    if (!(cs.rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "circumcenter system is singular (rcond " << cs.rcond << ")";
        throw degenerate_cell_error(msg.str(), -1);
    }
    return cs.center;
}

DualComplex build_dual(std::shared_ptr<const SimplicialComplex> complex)
{
    if (!complex)
        throw range_error("build_dual needs a complex");
    DualComplex d;
    d.primal_ = std::move(complex);
    const SimplicialComplex& c = *d.primal_;
    const int n = c.dim();

    double h = 0;
    for (int k = 0; k <= n; ++k) {
        const Index m = c.count(k);
        d.centers_[k].resize(n, m);
        d.barycenters_[k].resize(n, m);
        d.primal_vol_[k].resize(m);
        for (Index i = 0; i < m; ++i) {
            const Eigen::MatrixXd p = c.points(k, i);
            d.barycenters_[k].col(i) = barycenter(p);
            d.primal_vol_[k](i) = simplex_volume(p);
            if (k == 0) {
                d.centers_[k].col(i) = p.col(0);
                continue;
            }
            if (k == 1)
                h = std::max(h, d.primal_vol_[k](i));
            const auto cs = circumsphere(p);
            if (!(cs.rcond > 1e-14)) {
                std::ostringstream msg;
                msg << k << "-simplex " << i << " has a singular circumcenter system (rcond "
                    << cs.rcond << ")";
                throw degenerate_cell_error(msg.str(), i);
            }
            const auto status = classify_circumcenter(cs.barycentric);
            if (status == WellCentered::violated) {
                std::ostringstream msg;
                msg << k << "-simplex " << i << " does not contain its circumcenter";
                throw well_centered_error(msg.str(), k, i);
            }
            if (status == WellCentered::weak)
                d.status_ = WellCentered::weak;
            d.centers_[k].col(i) = cs.center;
        }
    }

    const FlagGeometry g{c, d.centers_, d.barycenters_, d.primal_vol_};
    for (int k = 0; k <= n; ++k) {
        const Index m = c.count(k);
        d.dual_vol_[k].setZero(m);
        d.fragments_[k].assign(std::size_t(m), 0);
        d.zero_[k].assign(std::size_t(m), 0);
        const double tol = 1e-12 * std::pow(h, n - k);
        for (Index i = 0; i < m; ++i) {
            double v = 0;
            int count = 0;
            enumerate_flags(g, k, i, [&](const DualFragment& f) {
                v += f.volume;
                ++count;
            });
            d.dual_vol_[k](i) = v;
            d.fragments_[k][i] = count;
            d.zero_[k][i] = std::abs(v) <= tol;
        }
    }
    return d;
}

DualComplex build_dual(const SimplicialComplex& complex)
{
    return build_dual(std::make_shared<const SimplicialComplex>(complex));
}

void DualComplex::for_each_fragment(int k, Index i,
                                    const std::function<void(const DualFragment&)>& f) const
{
    if (k < 0 || k > dim() || i < 0 || i >= primal_->count(k))
        throw lookup_error("unknown dual cell");
    const FlagGeometry g{*primal_, centers_, barycenters_, primal_vol_};
    enumerate_flags(g, k, i, f);
}

DualCell DualComplex::cell(int k, Index i) const
{
    DualCell out;
    out.k = k;
    out.base = i;
    for_each_fragment(k, i, [&](const DualFragment& f) { out.fragments.push_back(f); });
    out.volume = dual_vol_[k](i);
    out.is_boundary = primal_->on_boundary(k, i);
    return out;
}

Eigen::SparseMatrix<int> dual_boundary_matrix(const SimplicialComplex& complex, int k,
                                              DualConvention convention)
{
    if (k < 0 || k >= complex.dim())
        throw range_error("dual boundary degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(complex.dim() - 1) + "]");
    const int factor = convention == DualConvention::corrected ? ((k % 2) ? 1 : -1) : 1;
    Eigen::SparseMatrix<int> m = Eigen::SparseMatrix<int>(boundary_matrix(complex, k + 1).transpose());
    return factor * m;
}

Eigen::SparseMatrix<int> dual_boundary_matrix(const DualComplex& dual, int k,
                                              DualConvention convention)
{
    return dual_boundary_matrix(dual.primal(), k, convention);
}

void write_dual_diagnostics(const DualComplex& dual, std::ostream& out)
{
    char buf[96];
    for (int k = 0; k <= dual.dim(); ++k)
        for (Index i = 0; i < dual.primal().count(k); ++i) {
            std::snprintf(buf, sizeof buf, "%d %d %.12e %d\n", k, i, dual.dual_volumes(k)(i),
                          dual.fragment_counts(k)[i]);
            out << buf;
        }
}

} // namespace declab
