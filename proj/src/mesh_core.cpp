#include "declab/mesh_core.hpp"

#include "declab/errors.hpp"
#include "declab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace declab {

const char* to_string(WellCentered w)
{
    switch (w) {
    case WellCentered::strict: return "strict";
    case WellCentered::weak: return "weak";
    case WellCentered::violated: return "violated";
    }
    return "?";
}

std::size_t SimplicialComplex::KeyHash::operator()(const Key& a) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (Index v : a) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
        h *= 1099511628211ull;
    }
    return h;
}

SimplicialComplex::Key SimplicialComplex::make_key(std::span<const Index> sorted)
{
    Key key;
    key.fill(-1);
    std::copy(sorted.begin(), sorted.end(), key.begin());
    return key;
}

namespace {

void check_dim(const SimplicialComplex& c, int k, int lo = 0)
{
    if (k < lo || k > c.dim()) {
        std::ostringstream msg;
        msg << "simplex dimension " << k << " outside [" << lo << ", " << c.dim() << "]";
        throw range_error(msg.str());
    }
}

} // namespace

Index SimplicialComplex::count(int k) const
{
    if (k < 0 || k > dim_)
        return 0;
    return static_cast<Index>(orient_[k].size());
}

std::span<const Index> SimplicialComplex::simplex(int k, Index i) const
{
    return {verts_[k].data() + std::size_t(i) * (k + 1), std::size_t(k + 1)};
}

int SimplicialComplex::orientation(int k, Index i) const { return orient_[k][i]; }

std::span<const Index> SimplicialComplex::faces(int k, Index i) const
{
    return {faces_[k].data() + std::size_t(i) * (k + 1), std::size_t(k + 1)};
}

std::span<const std::int8_t> SimplicialComplex::face_signs(int k, Index i) const
{
    return {face_signs_[k].data() + std::size_t(i) * (k + 1), std::size_t(k + 1)};
}

std::span<const Index> SimplicialComplex::cofaces(int k, Index i) const
{
    if (k >= dim_)
        return {};
    const auto& off = coface_offsets_[k];
    return {cofaces_[k].data() + off[i], std::size_t(off[i + 1] - off[i])};
}

bool SimplicialComplex::on_boundary(int k, Index i) const { return boundary_[k][i] != 0; }

std::optional<Index> SimplicialComplex::find(int k, std::span<const Index> vertices) const
{
    if (k < 0 || k > dim_ || vertices.size() != std::size_t(k + 1))
        return std::nullopt;
    std::array<Index, max_dim + 1> sorted{};
    std::copy(vertices.begin(), vertices.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + k + 1);
    if (k == 0) {
        if (sorted[0] < 0 || sorted[0] >= count(0))
            return std::nullopt;
        return sorted[0];
    }
    auto it = lookup_[k].find(make_key({sorted.data(), std::size_t(k + 1)}));
    if (it == lookup_[k].end())
        return std::nullopt;
    return it->second;
}

Index SimplicialComplex::index_of(int k, std::span<const Index> vertices) const
{
    if (auto i = find(k, vertices))
        return *i;
    std::ostringstream msg;
    msg << "unknown " << k << "-simplex [";
    for (std::size_t j = 0; j < vertices.size(); ++j)
        msg << (j ? " " : "") << vertices[j];
    msg << "]";
    throw lookup_error(msg.str());
}

Eigen::MatrixXd SimplicialComplex::points(int k, Index i) const
{
    Eigen::MatrixXd p(dim_, k + 1);
    const auto s = simplex(k, i);
    for (int j = 0; j <= k; ++j)
        p.col(j) = coords_.col(s[j]);
    return p;
}

Eigen::MatrixXd SimplicialComplex::oriented_points(int k, Index i) const
{
    Eigen::MatrixXd p = points(k, i);
    if (orientation(k, i) < 0 && k >= 1)
        p.col(0).swap(p.col(1));
    return p;
}

void SimplicialComplex::set_boundary_marks(std::vector<BoundaryMark> marks)
{
    for (const auto& m : marks)
        index_of(dim_ - 1, m.vertices);
    marks_ = std::move(marks);
}

std::vector<std::vector<Index>> SimplicialComplex::top_cells() const
{
    std::vector<std::vector<Index>> cells(count(dim_));
    for (Index i = 0; i < count(dim_); ++i) {
        const auto s = simplex(dim_, i);
        cells[i].assign(s.begin(), s.end());
        if (orientation(dim_, i) < 0)
            std::swap(cells[i][0], cells[i][1]);
    }
    return cells;
}

namespace {

// Bucket grid over vertices, used to find vertices hanging inside boundary faces.
void check_hanging_vertices(const SimplicialComplex& c, const std::vector<Index>& first_cell)
{
    const int n = c.dim();
    if (n < 2)
        return;
    const Eigen::MatrixXd& X = c.vertices();
    std::vector<Index> bfaces;
    double mean_diam = 0;
    for (Index f = 0; f < c.count(n - 1); ++f)
        if (c.cofaces(n - 1, f).size() == 1) {
            bfaces.push_back(f);
            mean_diam += diameter(c.points(n - 1, f));
        }
    if (bfaces.empty())
        return;
    mean_diam /= double(bfaces.size());

    const Eigen::VectorXd lo = X.rowwise().minCoeff();
    const Eigen::VectorXd hi = X.rowwise().maxCoeff();
    const double cell = std::max(mean_diam, 1e-300);
    Eigen::VectorXi dims(n);
    for (int d = 0; d < n; ++d)
        dims(d) = std::max(1, std::min(1 << 20, int((hi(d) - lo(d)) / cell) + 1));
    auto bucket_of = [&](const Eigen::VectorXd& p) {
        long id = 0;
        for (int d = n - 1; d >= 0; --d) {
            int b = std::clamp(int((p(d) - lo(d)) / cell), 0, dims(d) - 1);
            id = id * dims(d) + b;
        }
        return id;
    };
    std::unordered_map<long, std::vector<Index>> buckets;
    for (Index v = 0; v < X.cols(); ++v)
        buckets[bucket_of(X.col(v))].push_back(v);

    for (Index f : bfaces) {
        const Eigen::MatrixXd P = c.points(n - 1, f);
        const double diam = diameter(P);
        const double tol = 1e-9 * diam;
        const Eigen::VectorXd flo = P.rowwise().minCoeff().array() - tol;
        const Eigen::VectorXd fhi = P.rowwise().maxCoeff().array() + tol;
        Eigen::VectorXi blo(n), bhi(n);
        for (int d = 0; d < n; ++d) {
            blo(d) = std::clamp(int((flo(d) - lo(d)) / cell), 0, dims(d) - 1);
            bhi(d) = std::clamp(int((fhi(d) - lo(d)) / cell), 0, dims(d) - 1);
        }
        const Eigen::MatrixXd E = edge_vectors(P);
        const auto qr = E.colPivHouseholderQr();
        const auto fv = c.simplex(n - 1, f);
        Eigen::VectorXi b = blo;
        while (true) {
            long id = 0;
            for (int d = n - 1; d >= 0; --d)
                id = id * dims(d) + b(d);
            if (auto it = buckets.find(id); it != buckets.end()) {
                for (Index v : it->second) {
                    if (std::find(fv.begin(), fv.end(), v) != fv.end())
                        continue;
                    const Eigen::VectorXd r = X.col(v) - P.col(0);
                    const Eigen::VectorXd a = qr.solve(r);
                    if ((E * a - r).norm() > tol)
                        continue;
                    if (a.minCoeff() > 1e-9 && a.sum() < 1 - 1e-9) {
                        std::ostringstream msg;
                        msg << "vertex " << v << " of cell " << first_cell[v]
                            << " lies inside a face of cell " << c.cofaces(n - 1, f)[0];
                        throw non_conforming_error(msg.str(), c.cofaces(n - 1, f)[0],
                                                   first_cell[v]);
                    }
                }
            }
            int d = 0;
            while (d < n && b(d) == bhi(d)) {
                b(d) = blo(d);
                ++d;
            }
            if (d == n)
                break;
            ++b(d);
        }
    }
}

} // namespace

SimplicialComplex build_complex(int dim, const Eigen::MatrixXd& vertex_coords,
                                const std::vector<std::vector<Index>>& top_cells)
{
    if (dim < 1 || dim > max_dim)
        throw range_error("complex dimension must be 1, 2 or 3");
    if (vertex_coords.rows() != dim)
        throw range_error("vertex coordinates must have one row per dimension");
    if (top_cells.empty())
        throw range_error("complex needs at least one top cell");

    SimplicialComplex c;
    c.dim_ = dim;
    c.coords_ = vertex_coords;
    const Index nv = static_cast<Index>(vertex_coords.cols());
    const int n = dim;

    std::vector<Index> first_cell(nv, -1);
    auto& lookup_n = c.lookup_[n];
    lookup_n.reserve(top_cells.size() * 2);
    for (std::size_t ci = 0; ci < top_cells.size(); ++ci) {
        const auto& cell = top_cells[ci];
        if (cell.size() != std::size_t(n + 1)) {
            std::ostringstream msg;
            msg << "cell " << ci << " has " << cell.size() << " vertices, expected " << n + 1;
            throw range_error(msg.str());
        }
        std::array<Index, max_dim + 1> s{};
        for (int j = 0; j <= n; ++j) {
            if (cell[j] < 0 || cell[j] >= nv) {
                std::ostringstream msg;
                msg << "cell " << ci << " references missing vertex " << cell[j];
                throw range_error(msg.str());
            }
            s[j] = cell[j];
        }
        std::sort(s.begin(), s.begin() + n + 1);
        Eigen::MatrixXd p(n, n + 1);
        for (int j = 0; j <= n; ++j)
            p.col(j) = vertex_coords.col(s[j]);
        const double diam = diameter(p);
        const double det = edge_vectors(p).determinant();
        if (std::adjacent_find(s.begin(), s.begin() + n + 1) != s.begin() + n + 1 ||
            !(std::abs(det) > 1e-12 * std::pow(diam, n))) {
            std::ostringstream msg;
            msg << "cell " << ci << " is degenerate (zero volume)";
            throw degenerate_cell_error(msg.str(), long(ci));
        }
        auto key = SimplicialComplex::make_key({s.data(), std::size_t(n + 1)});
        auto [it, inserted] = lookup_n.emplace(key, Index(ci));
        if (!inserted) {
            std::ostringstream msg;
            msg << "cells " << it->second << " and " << ci << " are identical";
            throw non_conforming_error(msg.str(), it->second, long(ci));
        }
        c.verts_[n].insert(c.verts_[n].end(), s.begin(), s.begin() + n + 1);
        c.orient_[n].push_back(det > 0 ? 1 : -1);
        for (int j = 0; j <= n; ++j)
            if (first_cell[s[j]] < 0)
                first_cell[s[j]] = Index(ci);
    }
    for (Index v = 0; v < nv; ++v)
        if (first_cell[v] < 0) {
            std::ostringstream msg;
            msg << "vertex " << v << " is not used by any cell";
            throw range_error(msg.str());
        }

    c.verts_[0].resize(nv);
    std::iota(c.verts_[0].begin(), c.verts_[0].end(), 0);
    c.orient_[0].assign(nv, 1);

    for (int k = n; k >= 1; --k) {
        const Index m = static_cast<Index>(c.orient_[k].size());
        c.faces_[k].reserve(std::size_t(m) * (k + 1));
        c.face_signs_[k].reserve(std::size_t(m) * (k + 1));
        for (Index i = 0; i < m; ++i) {
            std::array<Index, max_dim + 1> s{};
            std::copy_n(c.verts_[k].begin() + std::size_t(i) * (k + 1), k + 1, s.begin());
            for (int j = 0; j <= k; ++j) {
                std::array<Index, max_dim> f{};
                int q = 0;
                for (int l = 0; l <= k; ++l)
                    if (l != j)
                        f[q++] = s[l];
                Index face;
                if (k - 1 == 0) {
                    face = f[0];
                } else {
                    auto key = SimplicialComplex::make_key({f.data(), std::size_t(k)});
                    auto [it, inserted] =
                        c.lookup_[k - 1].emplace(key, Index(c.orient_[k - 1].size()));
                    if (inserted) {
                        c.verts_[k - 1].insert(c.verts_[k - 1].end(), f.begin(), f.begin() + k);
                        c.orient_[k - 1].push_back(1);
                    }
                    face = it->second;
                }
                const int sign = c.orient_[k][i] * ((j % 2) ? -1 : 1) * c.orient_[k - 1][face];
                c.faces_[k].push_back(face);
                c.face_signs_[k].push_back(static_cast<std::int8_t>(sign));
            }
        }
    }

    for (int k = 0; k < n; ++k) {
        const Index m = c.count(k);
        auto& off = c.coface_offsets_[k];
        off.assign(std::size_t(m) + 1, 0);
        for (Index f : c.faces_[k + 1])
            ++off[f + 1];
        std::partial_sum(off.begin(), off.end(), off.begin());
        c.cofaces_[k].resize(c.faces_[k + 1].size());
        std::vector<Index> fill(off.begin(), off.end() - 1);
        for (Index s = 0; s < c.count(k + 1); ++s)
            for (int j = 0; j <= k + 1; ++j)
                c.cofaces_[k][fill[c.faces_[k + 1][std::size_t(s) * (k + 2) + j]]++] = s;
    }

    // Facets with more than two cells, or two cells on the same side, overlap.
    for (Index f = 0; f < c.count(n - 1); ++f) {
        const auto cof = c.cofaces(n - 1, f);
        if (cof.size() > 2) {
            std::ostringstream msg;
            msg << "cells " << cof[0] << " and " << cof[1] << " overlap across a shared face ("
                << cof.size() << " cells on one facet)";
            throw non_conforming_error(msg.str(), cof[0], cof[1]);
        }
        if (cof.size() == 2) {
            auto sign_in = [&](Index s) {
                const auto fs = c.faces(n, s);
                const auto sg = c.face_signs(n, s);
                for (int j = 0; j <= n; ++j)
                    if (fs[j] == f)
                        return int(sg[j]);
                return 0;
            };
            if (sign_in(cof[0]) == sign_in(cof[1])) {
                std::ostringstream msg;
                msg << "cells " << cof[0] << " and " << cof[1] << " overlap";
                throw non_conforming_error(msg.str(), cof[0], cof[1]);
            }
        }
    }

    for (int k = 0; k <= n; ++k)
        c.boundary_[k].assign(std::size_t(c.count(k)), 0);
    for (Index f = 0; f < c.count(n - 1); ++f)
        if (c.cofaces(n - 1, f).size() == 1)
            c.boundary_[n - 1][f] = 1;
    for (int k = n - 1; k >= 1; --k)
        for (Index s = 0; s < c.count(k); ++s)
            if (c.boundary_[k][s])
                for (Index f : c.faces(k, s))
                    c.boundary_[k - 1][f] = 1;

    check_hanging_vertices(c, first_cell);
    return c;
}

Chain boundary_chain(const SimplicialComplex& complex, int k, Index simplex)
{
    check_dim(complex, k, 1);
    if (simplex < 0 || simplex >= complex.count(k))
        throw lookup_error("unknown " + std::to_string(k) + "-simplex " + std::to_string(simplex));
    Chain chain;
    const auto f = complex.faces(k, simplex);
    const auto s = complex.face_signs(k, simplex);
    for (int j = 0; j <= k; ++j)
        chain.emplace_back(f[j], s[j]);
    return chain;
}

Chain boundary_of(const SimplicialComplex& complex, int k, const Chain& chain)
{
    std::map<Index, int> acc;
    for (auto [s, coeff] : chain)
        for (auto [f, sign] : boundary_chain(complex, k, s))
            acc[f] += coeff * sign;
    Chain out;
    for (auto [f, v] : acc)
        if (v != 0)
            out.emplace_back(f, v);
    return out;
}

Eigen::SparseMatrix<int> boundary_matrix(const SimplicialComplex& complex, int k)
{
    check_dim(complex, k, 1);
    std::vector<Eigen::Triplet<int>> t;
    t.reserve(std::size_t(complex.count(k)) * (k + 1));
    for (Index s = 0; s < complex.count(k); ++s) {
        const auto f = complex.faces(k, s);
        const auto sg = complex.face_signs(k, s);
        for (int j = 0; j <= k; ++j)
            t.emplace_back(f[j], s, sg[j]);
    }
    Eigen::SparseMatrix<int> m(complex.count(k - 1), complex.count(k));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SubComplex closed_star(const SimplicialComplex& complex, int k, Index simplex)
{
    check_dim(complex, k);
    if (simplex < 0 || simplex >= complex.count(k))
        throw lookup_error("unknown " + std::to_string(k) + "-simplex " + std::to_string(simplex));
    SubComplex out;
    out.simplices[k].push_back(simplex);
    for (int d = k; d < complex.dim(); ++d) {
        for (Index s : out.simplices[d])
            for (Index up : complex.cofaces(d, s))
                out.simplices[d + 1].push_back(up);
        auto& v = out.simplices[d + 1];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (int d = complex.dim(); d >= 1; --d) {
        for (Index s : out.simplices[d])
            for (Index f : complex.faces(d, s))
                out.simplices[d - 1].push_back(f);
        auto& v = out.simplices[d - 1];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

WellCentered classify_circumcenter(const Eigen::VectorXd& barycentric)
{
    const double lo = barycentric.minCoeff();
    if (lo > well_centered_tolerance)
        return WellCentered::strict;
    if (lo >= -well_centered_tolerance)
        return WellCentered::weak;
    return WellCentered::violated;
}

ShapeReport shape_report(const SimplicialComplex& complex)
{
    ShapeReport r;
    r.gamma_min = std::numeric_limits<double>::infinity();
    const int n = complex.dim();
    for (int k = 1; k <= n; ++k) {
        for (Index i = 0; i < complex.count(k); ++i) {
            const Eigen::MatrixXd p = complex.points(k, i);
            const double d = diameter(p);
            const double g = inradius(p);
            r.h = std::max(r.h, d);
            r.gamma_min = std::min(r.gamma_min, g);
            r.c_reg = std::max(r.c_reg, d / g);
            const auto status = classify_circumcenter(circumsphere(p).barycentric);
            if (int(status) > int(r.well_centered)) {
                r.well_centered = status;
                r.worst_simplex = {k, i};
            }
        }
    }
    std::vector<int> star(std::size_t(complex.count(0)), 0);
    for (Index s = 0; s < complex.count(n); ++s)
        for (Index v : complex.simplex(n, s))
            ++star[v];
    r.star_bound = *std::max_element(star.begin(), star.end());
    return r;
}

} // namespace declab
