// Oriented simplicial n-complexes in R^n (n = 1, 2, 3): incidence, chains,
// boundary operator, closed stars and shape-regularity audits.

#ifndef DECLAB_MESH_CORE_HPP
#define DECLAB_MESH_CORE_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace declab {

using Index = int;

inline constexpr int max_dim = 3;

/// Well-centeredness tolerance, relative to simplex size, on barycentric coordinates.
inline constexpr double well_centered_tolerance = 1e-12;

enum class WellCentered { strict, weak, violated };

const char* to_string(WellCentered w);

/// An (n-1)-face on the boundary carrying a user label (e.g. "gamma").
struct BoundaryMark {
    std::vector<Index> vertices;
    std::string label;
};

/// Signed sum of simplices of one dimension.
using Chain = std::vector<std::pair<Index, int>>;

class SimplicialComplex {
public:
    int dim() const { return dim_; }
    Index count(int k) const;

    /// Vertex coordinates, one column per vertex.
    const Eigen::MatrixXd& vertices() const { return coords_; }

    /// Vertex ids of a k-simplex in canonical (increasing) order.
    std::span<const Index> simplex(int k, Index i) const;

    /// Orientation of a simplex relative to its canonical vertex order. Lower
    /// dimensional simplices are always +1; top cells carry the sign that makes
    /// them positively oriented.
    int orientation(int k, Index i) const;

    /// The k+1 faces of a k-simplex (k >= 1); face j omits canonical vertex j.
    std::span<const Index> faces(int k, Index i) const;

    /// Relative orientation of each face in the boundary of the oriented simplex.
    std::span<const std::int8_t> face_signs(int k, Index i) const;

    /// The (k+1)-simplices having this k-simplex as a face.
    std::span<const Index> cofaces(int k, Index i) const;

    bool on_boundary(int k, Index i) const;

    std::optional<Index> find(int k, std::span<const Index> vertices) const;

    /// Like find(), but throws lookup_error for unknown simplices.
    Index index_of(int k, std::span<const Index> vertices) const;

    /// n x (k+1) coordinates in canonical order.
    Eigen::MatrixXd points(int k, Index i) const;

    /// n x (k+1) coordinates in oriented order (canonical, with the first two
    /// vertices swapped when the orientation is negative).
    Eigen::MatrixXd oriented_points(int k, Index i) const;

    const std::vector<BoundaryMark>& boundary_marks() const { return marks_; }
    void set_boundary_marks(std::vector<BoundaryMark> marks);

    /// Top cells as stored (canonical order), for writers.
    std::vector<std::vector<Index>> top_cells() const;

private:
    struct KeyHash {
        std::size_t operator()(const std::array<Index, max_dim + 1>& a) const noexcept;
    };
    using Key = std::array<Index, max_dim + 1>;

    friend SimplicialComplex build_complex(int, const Eigen::MatrixXd&,
                                           const std::vector<std::vector<Index>>&);

    static Key make_key(std::span<const Index> sorted);

    int dim_ = 0;
    Eigen::MatrixXd coords_;
    std::array<std::vector<Index>, max_dim + 1> verts_;
    std::array<std::vector<std::int8_t>, max_dim + 1> orient_;
    std::array<std::vector<Index>, max_dim + 1> faces_;
    std::array<std::vector<std::int8_t>, max_dim + 1> face_signs_;
    std::array<std::vector<Index>, max_dim + 1> coface_offsets_;
    std::array<std::vector<Index>, max_dim + 1> cofaces_;
    std::array<std::vector<std::uint8_t>, max_dim + 1> boundary_;
    std::array<std::unordered_map<Key, Index, KeyHash>, max_dim + 1> lookup_;
    std::vector<BoundaryMark> marks_;
};

/// Build a complex from top cells. Orientation is normalized so that every
/// top cell has positive signed volume; all faces are enumerated exactly once.
/// Throws degenerate_cell_error or non_conforming_error.
SimplicialComplex build_complex(int dim, const Eigen::MatrixXd& vertex_coords,
                                const std::vector<std::vector<Index>>& top_cells);

/// Boundary of an oriented k-simplex as a signed chain of (k-1)-simplices.
Chain boundary_chain(const SimplicialComplex& complex, int k, Index simplex);

/// Boundary of an arbitrary k-chain; like terms are combined and zeros dropped.
Chain boundary_of(const SimplicialComplex& complex, int k, const Chain& chain);

/// Signed incidence matrix C_k -> C_{k-1} with entries in {-1, 0, 1}.
Eigen::SparseMatrix<int> boundary_matrix(const SimplicialComplex& complex, int k);

/// Simplices of a sub-complex, indexed by dimension; each list sorted and unique.
struct SubComplex {
    std::array<std::vector<Index>, max_dim + 1> simplices;
};

/// Smallest sub-complex containing every coface of the simplex.
SubComplex closed_star(const SimplicialComplex& complex, int k, Index simplex);

struct ShapeReport {
    double h = 0;          ///< largest simplex diameter
    double gamma_min = 0;  ///< smallest inradius over simplices of dimension >= 1
    double c_reg = 0;      ///< largest diam / inradius
    int star_bound = 0;    ///< most top cells in any closed star
    WellCentered well_centered = WellCentered::strict;
    /// First simplex with the worst status, as (dimension, index); (-1, -1) when strict.
    std::pair<int, Index> worst_simplex{-1, -1};
};

ShapeReport shape_report(const SimplicialComplex& complex);

/// Well-centeredness status of a single simplex from the barycentric
/// coordinates of its circumcenter.
WellCentered classify_circumcenter(const Eigen::VectorXd& barycentric);

} // namespace declab

#endif // DECLAB_MESH_CORE_HPP
