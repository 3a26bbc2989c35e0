// Circumcentric dual of a (weakly) well-centered simplicial complex.
//
// The dual cell of a k-simplex tau is the signed union of elementary
// simplices [c(tau), c(tau_{k+1}), ..., c(tau_n)] over all flags
// tau < tau_{k+1} < ... < tau_n. Fragments are enumerated on demand; the
// complex itself only stores circumcenters and volumes.

#ifndef DECLAB_DUAL_MESH_HPP
#define DECLAB_DUAL_MESH_HPP

#include "declab/mesh_core.hpp"

#include <functional>
#include <iosfwd>
#include <memory>

namespace declab {

struct DualFragment {
    /// flag[j] is the simplex of dimension k + j; flag[n - k] is a top cell.
    std::array<Index, max_dim + 1> flag{-1, -1, -1, -1};
    int sign = 1;
    /// Signed contribution to |*tau| (its absolute value is the fragment measure).
    double volume = 0;
};

struct DualCell {
    int k = 0;
    Index base = -1;
    std::vector<DualFragment> fragments;
    double volume = 0;
    bool is_boundary = false;
};

class DualComplex {
public:
    const SimplicialComplex& primal() const { return *primal_; }
    std::shared_ptr<const SimplicialComplex> primal_ptr() const { return primal_; }
    int dim() const { return primal_->dim(); }

    /// Circumcenters of all k-simplices, one column each.
    const Eigen::MatrixXd& circumcenters(int k) const { return centers_[k]; }
    const Eigen::VectorXd& primal_volumes(int k) const { return primal_vol_[k]; }
    /// |*tau| for every k-simplex tau; the dual of a top cell has volume 1.
    const Eigen::VectorXd& dual_volumes(int k) const { return dual_vol_[k]; }
    const std::vector<int>& fragment_counts(int k) const { return fragments_[k]; }

    /// True when the dual cell has (numerically) zero volume, which weakly
    /// well-centered meshes produce for k >= 1.
    bool zero_volume(int k, Index i) const { return zero_[k][i] != 0; }

    WellCentered well_centered() const { return status_; }

    DualCell cell(int k, Index i) const;
    void for_each_fragment(int k, Index i, const std::function<void(const DualFragment&)>& f) const;

private:
    friend DualComplex build_dual(std::shared_ptr<const SimplicialComplex> complex);

    std::shared_ptr<const SimplicialComplex> primal_;
    std::array<Eigen::MatrixXd, max_dim + 1> centers_;
    std::array<Eigen::MatrixXd, max_dim + 1> barycenters_;
    std::array<Eigen::VectorXd, max_dim + 1> primal_vol_;
    std::array<Eigen::VectorXd, max_dim + 1> dual_vol_;
    std::array<std::vector<int>, max_dim + 1> fragments_;
    std::array<std::vector<std::uint8_t>, max_dim + 1> zero_;
    WellCentered status_ = WellCentered::strict;
};

/// Throws well_centered_error when some circumcenter lies outside its simplex
/// and degenerate_cell_error for ill-conditioned circumcenter systems.
DualComplex build_dual(std::shared_ptr<const SimplicialComplex> complex);
DualComplex build_dual(const SimplicialComplex& complex);

/// Circumcenter of an n x (k+1) point set; throws degenerate_cell_error when
/// the equidistance system is numerically singular.
Eigen::VectorXd circumcenter(const Eigen::MatrixXd& pts);

enum class DualConvention {
    corrected,  ///< d*tau = (-1)^{k+1} sum over cofaces eta of *eta
    literature  ///< the older convention without the (-1)^{k+1} factor
};

/// Boundary of dual cells, C_{n-k}(*K) -> C_{n-k-1}(*K), for k = 0..n-1.
/// Rows are indexed by (k+1)-simplices eta, columns by k-simplices tau.
Eigen::SparseMatrix<int> dual_boundary_matrix(const SimplicialComplex& complex, int k,
                                              DualConvention convention = DualConvention::corrected);
Eigen::SparseMatrix<int> dual_boundary_matrix(const DualComplex& dual, int k,
                                              DualConvention convention = DualConvention::corrected);

/// One line per simplex: `k index dual_volume fragment_count`.
void write_dual_diagnostics(const DualComplex& dual, std::ostream& out);

} // namespace declab

#endif // DECLAB_DUAL_MESH_HPP
