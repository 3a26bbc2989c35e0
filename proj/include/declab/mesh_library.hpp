// Mesh families used by the convergence studies, refinement, and the
// `decmesh 1` text format.

#ifndef DECLAB_MESH_LIBRARY_HPP
#define DECLAB_MESH_LIBRARY_HPP

#include "declab/mesh_core.hpp"

#include <iosfwd>
#include <numbers>
#include <string>

namespace declab {

enum class Family {
    pentagon_wheel,   ///< regular n-gon wheel, medial refinement
    perturbed_wheel,  ///< the wheel with a self-similar interior jitter
    square,           ///< unit square, structured patterns 1..3
    corner,           ///< wheel sectors spanning a reentrant angle alpha
    cube_kuhn,        ///< unit cube, 6 tetrahedra per grid cell
    from_file
};

const char* to_string(Family f);
Family parse_family(const std::string& name);

struct FamilySpec {
    Family family = Family::pentagon_wheel;
    int level = 0;
    int ngon = 5;
    int pattern = 1;
    double alpha = 8 * std::numbers::pi / 5;
    double jitter = 0.15;
    std::string path;
};

/// Throws range_error for invalid parameters and parse_error for bad files.
SimplicialComplex generate(const FamilySpec& spec);

/// Split every triangle into four through its edge midpoints. Boundary
/// marks are carried to the halves of each marked edge.
SimplicialComplex medial_refine(const SimplicialComplex& complex);

/// Next level of a family: medial split in 2D, halved Kuhn grid for the cube.
SimplicialComplex refine(const SimplicialComplex& complex, Family family);

/// Vertex count of generate(spec) without building it (0 for files).
long estimate_vertices(const FamilySpec& spec);

SimplicialComplex read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const SimplicialComplex& complex);
SimplicialComplex load(const std::string& path);
void save(const SimplicialComplex& complex, const std::string& path);

} // namespace declab

#endif // DECLAB_MESH_LIBRARY_HPP
