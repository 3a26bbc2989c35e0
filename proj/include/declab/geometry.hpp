// Simplex geometry primitives: volumes, circumcenters, inradii.
//
// Points are stored column-wise: a k-simplex in R^n is an n x (k+1) matrix.
// All routines are templated on the scalar type so they can be reused with
// extended-precision types in tests.

#ifndef DECLAB_GEOMETRY_HPP
#define DECLAB_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace declab {

template <typename Scalar>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Edge vectors v_i - v_0, i = 1..k, as the columns of an n x k matrix.
template <typename Derived>
PointSet<typename Derived::Scalar> edge_vectors(const Eigen::MatrixBase<Derived>& pts)
{
    const Eigen::Index k = pts.cols() - 1;
    PointSet<typename Derived::Scalar> e(pts.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i)
        e.col(i) = pts.col(i + 1) - pts.col(0);
    return e;
}

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

/// Unsigned k-dimensional volume via the Gram determinant. A vertex has volume 1.
template <typename Derived>
typename Derived::Scalar simplex_volume(const Eigen::MatrixBase<Derived>& pts)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Index k = pts.cols() - 1;
    if (k == 0)
        return Scalar(1);
    const auto e = edge_vectors(pts);
    const PointSet<Scalar> gram = e.transpose() * e;
    const Scalar det = gram.determinant();
    using std::sqrt;
    return det > Scalar(0) ? sqrt(det) / Scalar(factorial(int(k))) : Scalar(0);
}

/// Signed n-volume of an n-simplex in R^n (positive for counter-clockwise order in 2D).
template <typename Derived>
typename Derived::Scalar signed_volume(const Eigen::MatrixBase<Derived>& pts)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = pts.rows();
    if (n == 0)
        return Scalar(1);
    return edge_vectors(pts).determinant() / Scalar(factorial(int(n)));
}

template <typename Derived>
Point<typename Derived::Scalar> barycenter(const Eigen::MatrixBase<Derived>& pts)
{
    return pts.rowwise().mean();
}

template <typename Scalar>
struct Circumsphere {
    Point<Scalar> center;
    /// Barycentric coordinates of the center relative to the simplex vertices.
    Point<Scalar> barycentric;
    Scalar radius;
    /// Reciprocal condition estimate of the equidistance system (1 for a vertex).
    Scalar rcond;
};

/// Circumcenter inside the plane of the simplex.
///
/// Solves the normal equations (E^T E) a = |e_i|^2 / 2 of the equidistance
/// system with E the edge vectors; the center is v_0 + E a. The caller decides
/// what conditioning is acceptable through `rcond`.
template <typename Derived>
Circumsphere<typename Derived::Scalar> circumsphere(const Eigen::MatrixBase<Derived>& pts)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Index k = pts.cols() - 1;
    Circumsphere<Scalar> out;
    if (k == 0) {
        out.center = pts.col(0);
        out.barycentric = Point<Scalar>::Ones(1);
        out.radius = Scalar(0);
        out.rcond = Scalar(1);
        return out;
    }
    const auto e = edge_vectors(pts);
    const PointSet<Scalar> gram = e.transpose() * e;
    const Point<Scalar> rhs = gram.diagonal() / Scalar(2);

    Eigen::SelfAdjointEigenSolver<PointSet<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
    const Scalar lmax = eig.eigenvalues().maxCoeff();
    const Scalar lmin = eig.eigenvalues().minCoeff();
    out.rcond = lmax > Scalar(0) ? lmin / lmax : Scalar(0);

    const Point<Scalar> a = gram.ldlt().solve(rhs);
    out.center = pts.col(0) + e * a;
    out.barycentric.resize(k + 1);
    out.barycentric(0) = Scalar(1) - a.sum();
    out.barycentric.tail(k) = a;
    out.radius = (out.center - pts.col(0)).norm();
    return out;
}

/// Radius of the largest k-ball inscribed in a k-simplex (k >= 1):
/// k |sigma| / sum of facet volumes.
template <typename Derived>
typename Derived::Scalar inradius(const Eigen::MatrixBase<Derived>& pts)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Index k = pts.cols() - 1;
    if (k == 1)
        return (pts.col(1) - pts.col(0)).norm() / Scalar(2);
    Scalar facets = Scalar(0);
    PointSet<Scalar> facet(pts.rows(), k);
    for (Eigen::Index drop = 0; drop <= k; ++drop) {
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i <= k; ++i)
            if (i != drop)
                facet.col(c++) = pts.col(i);
        facets += simplex_volume(facet);
    }
    return Scalar(k) * simplex_volume(pts) / facets;
}

/// Largest vertex-to-vertex distance.
template <typename Derived>
typename Derived::Scalar diameter(const Eigen::MatrixBase<Derived>& pts)
{
    using Scalar = typename Derived::Scalar;
    Scalar d = Scalar(0);
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
            d = std::max<Scalar>(d, (pts.col(i) - pts.col(j)).norm());
    return d;
}

} // namespace declab

#endif // DECLAB_GEOMETRY_HPP
