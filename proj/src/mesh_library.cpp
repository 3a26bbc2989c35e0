#include "declab/mesh_library.hpp"

#include "declab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace declab {

const char* to_string(Family f)
{
    switch (f) {
    case Family::pentagon_wheel: return "pentagon";
    case Family::perturbed_wheel: return "perturbed";
    case Family::square: return "square";
    case Family::corner: return "corner";
    case Family::cube_kuhn: return "cube";
    case Family::from_file: return "file";
    }
    return "?";
}

Family parse_family(const std::string& name)
{
    if (name == "pentagon" || name == "pentagon_wheel" || name == "wheel")
        return Family::pentagon_wheel;
    if (name == "perturbed" || name == "perturbed_wheel")
        return Family::perturbed_wheel;
    if (name == "square")
        return Family::square;
    if (name == "corner")
        return Family::corner;
    if (name == "cube" || name == "cube_kuhn")
        return Family::cube_kuhn;
    if (name == "file" || name == "from_file")
        return Family::from_file;
    throw lookup_error("unknown mesh family '" + name + "'");
}

namespace {

constexpr double pi = std::numbers::pi;

SimplicialComplex wheel(int ngon)
{
    if (ngon < 5)
        throw range_error("a wheel needs at least 5 rim vertices to be well-centered");
    Eigen::MatrixXd X(2, ngon + 1);
    X.col(0).setZero();
    for (int j = 0; j < ngon; ++j)
        X.col(j + 1) << std::cos(2 * pi * j / ngon), std::sin(2 * pi * j / ngon);
    std::vector<std::vector<Index>> cells;
    for (int j = 0; j < ngon; ++j)
        cells.push_back({0, j + 1, (j + 1) % ngon + 1});
    return build_complex(2, X, cells);
}

int corner_sectors(double alpha) { return int(std::ceil(alpha / (2 * pi / 5) - 1e-9)); }

SimplicialComplex corner(double alpha)
{
    if (!(alpha > pi && alpha < 2 * pi))
        throw range_error("corner angle must lie in (pi, 2 pi)");
    const int m = corner_sectors(alpha);
    Eigen::MatrixXd X(2, m + 2);
    X.col(0).setZero();
    for (int j = 0; j <= m; ++j)
        X.col(j + 1) << std::cos(alpha * j / m), std::sin(alpha * j / m);
    std::vector<std::vector<Index>> cells;
    for (int j = 0; j < m; ++j)
        cells.push_back({0, j + 1, j + 2});
    SimplicialComplex c = build_complex(2, X, cells);
    c.set_boundary_marks({{{0, 1}, "gamma"}, {{0, m + 1}, "gamma"}});
    return c;
}

SimplicialComplex square(int pattern, int level)
{
    if (pattern < 1 || pattern > 3)
        throw range_error("square pattern must be 1, 2 or 3");
    const int N = 1 << (level + 1);
    const int P = N + 1;
    Eigen::MatrixXd X(2, P * P);
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i)
            X.col(i + P * j) << double(i) / N, double(j) / N;
    std::vector<std::vector<Index>> cells;
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const Index a = i + P * j, b = a + 1, c = a + P, d = c + 1;
            bool slash = true;
            if (pattern == 2)
                slash = j % 2 == 0;
            else if (pattern == 3)
                slash = (i + j) % 2 == 0;
            if (slash) {
                cells.push_back({a, b, d});
                cells.push_back({a, d, c});
            } else {
                cells.push_back({a, b, c});
                cells.push_back({b, d, c});
            }
        }
    return build_complex(2, X, cells);
}

SimplicialComplex cube(int N)
{
    const int P = N + 1;
    Eigen::MatrixXd X(3, P * P * P);
    auto id = [P](int i, int j, int k) { return Index(i + P * (j + P * k)); };
    for (int k = 0; k <= N; ++k)
        for (int j = 0; j <= N; ++j)
            for (int i = 0; i <= N; ++i)
                X.col(id(i, j, k)) << double(i) / N, double(j) / N, double(k) / N;
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do
        perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::vector<Index>> cells;
    cells.reserve(std::size_t(6) * N * N * N);
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                for (const auto& p : perms) {
                    std::array<int, 3> at{i, j, k};
                    std::vector<Index> tet{id(at[0], at[1], at[2])};
                    for (int axis : p) {
                        ++at[axis];
                        tet.push_back(id(at[0], at[1], at[2]));
                    }
                    cells.push_back(std::move(tet));
                }
    return build_complex(3, X, cells);
}

// Interior vertices get a displacement chosen by the parity of their lattice
// coordinates inside their wheel sector. The rim sits at an even lattice
// index on every level i >= 1, so each level repeats one pattern at half the
// scale of the previous one.
SimplicialComplex perturbed_wheel(int ngon, int level, double amplitude)
{
    SimplicialComplex base = wheel(ngon);
    for (int i = 0; i < level; ++i)
        base = medial_refine(base);
    Eigen::MatrixXd X = base.vertices();
    const double scale = std::ldexp(1.0, level);
    for (Index v = 0; v < base.count(0); ++v) {
        if (base.on_boundary(0, v))
            continue;
        const Eigen::Vector2d x = X.col(v);
        double t = std::atan2(x(1), x(0));
        if (t < 0)
            t += 2 * pi;
        const int j = int(std::floor(t * ngon / (2 * pi) + 1e-6)) % ngon;
        const double t0 = 2 * pi * j / ngon, t1 = 2 * pi * (j + 1) / ngon;
        Eigen::Matrix2d R;
        R << std::cos(t0), std::cos(t1), std::sin(t0), std::sin(t1);
        const Eigen::Vector2d qs = R.lu().solve(x) * scale;
        const long q = std::lround(qs(0)), s = std::lround(qs(1));
        const Eigen::Vector2d shift[4] = {{0, 0}, {0.8, 0.6}, {-0.5, 0.7}, {0.3, -0.9}};
        Eigen::Matrix2d rot;
        rot << std::cos(t0), -std::sin(t0), std::sin(t0), std::cos(t0);
        X.col(v) += rot * shift[(q & 1) + 2 * (s & 1)] * (amplitude / scale);
    }
    return build_complex(2, X, base.top_cells());
}

} // namespace

SimplicialComplex medial_refine(const SimplicialComplex& c)
{
    if (c.dim() != 2)
        throw range_error("medial refinement is defined for triangle meshes");
    const Index V = c.count(0), E = c.count(1);
    Eigen::MatrixXd X(2, V + E);
    X.leftCols(V) = c.vertices();
    for (Index e = 0; e < E; ++e) {
        const auto s = c.simplex(1, e);
        X.col(V + e) = 0.5 * (c.vertices().col(s[0]) + c.vertices().col(s[1]));
    }
    auto mid = [&](Index a, Index b) {
        const Index ids[2] = {a, b};
        return V + c.index_of(1, ids);
    };
    std::vector<std::vector<Index>> cells;
    cells.reserve(std::size_t(4) * c.count(2));
    for (Index t = 0; t < c.count(2); ++t) {
        const auto s = c.simplex(2, t);
        const Index a = s[0], b = s[1], cc = s[2];
        const Index mab = mid(a, b), mbc = mid(b, cc), mca = mid(cc, a);
        cells.push_back({a, mab, mca});
        cells.push_back({mab, b, mbc});
        cells.push_back({mca, mbc, cc});
        cells.push_back({mab, mbc, mca});
    }
    SimplicialComplex out = build_complex(2, X, cells);
    std::vector<BoundaryMark> marks;
    for (const auto& m : c.boundary_marks()) {
        const Index mm = mid(m.vertices[0], m.vertices[1]);
        marks.push_back({{m.vertices[0], mm}, m.label});
        marks.push_back({{mm, m.vertices[1]}, m.label});
    }
    out.set_boundary_marks(std::move(marks));
    return out;
}

SimplicialComplex refine(const SimplicialComplex& complex, Family family)
{
    switch (family) {
    case Family::pentagon_wheel:
    case Family::square:
    case Family::corner:
        return medial_refine(complex);
    case Family::from_file:
        if (complex.dim() == 2)
            return medial_refine(complex);
        break;
    case Family::cube_kuhn: {
        const long V = complex.count(0);
        const int N = int(std::lround(std::cbrt(double(V)))) - 1;
        if (N < 1 || long(N + 1) * (N + 1) * (N + 1) != V)
            throw range_error("not a Kuhn cube mesh");
        return cube(2 * N);
    }
    case Family::perturbed_wheel:
        break;
    }
    throw range_error(std::string("refinement is not supported for the ") + to_string(family) + " family");
}

SimplicialComplex generate(const FamilySpec& spec)
{
    if (spec.level < 0)
        throw range_error("level must be non-negative");
    switch (spec.family) {
    case Family::pentagon_wheel: {
        SimplicialComplex c = wheel(spec.ngon);
        for (int i = 0; i < spec.level; ++i)
            c = medial_refine(c);
        return c;
    }
    case Family::perturbed_wheel:
        return perturbed_wheel(spec.ngon, spec.level, spec.jitter);
    case Family::square:
        return square(spec.pattern, spec.level);
    case Family::corner: {
        SimplicialComplex c = corner(spec.alpha);
        for (int i = 0; i < spec.level; ++i)
            c = medial_refine(c);
        return c;
    }
    case Family::cube_kuhn:
        return cube(1 << (spec.level + 1));
    case Family::from_file: {
        SimplicialComplex c = load(spec.path);
        for (int i = 0; i < spec.level; ++i)
            c = refine(c, Family::from_file);
        return c;
    }
    }
    throw range_error("unknown family");
}

long estimate_vertices(const FamilySpec& spec)
{
    const long r = 1L << std::min(spec.level, 40);
    auto disk = [r](long sectors, long rim_edges) {
        const long F = sectors * r * r, B = rim_edges * r;
        const long E = (3 * F + B) / 2;
        return 1 + E - F;
    };
    switch (spec.family) {
    case Family::pentagon_wheel:
    case Family::perturbed_wheel:
        return disk(spec.ngon, spec.ngon);
    case Family::corner: {
        const int m = corner_sectors(spec.alpha);
        return disk(m, m + 2);
    }
    case Family::square: {
        const long N = 2 * r;
        return (N + 1) * (N + 1);
    }
    case Family::cube_kuhn: {
        const long N = 2 * r;
        return (N + 1) * (N + 1) * (N + 1);
    }
    case Family::from_file:
        return 0;
    }
    return 0;
}

namespace {

struct LineReader {
    std::istream& in;
    int number = 0;

    std::istringstream next(const char* expect)
    {
        std::string line;
        while (std::getline(in, line)) {
            ++number;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            return std::istringstream(line);
        }
        fail(std::string("unexpected end of file, expected ") + expect);
        return {};
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw parse_error("line " + std::to_string(number) + ": " + what);
    }
};

long read_count(LineReader& r, const char* keyword)
{
    auto s = r.next(keyword);
    std::string word;
    long n = -1;
    if (!(s >> word >> n) || word != keyword || n < 0)
        r.fail(std::string("expected '") + keyword + " <count>'");
    return n;
}

} // namespace

SimplicialComplex read_mesh(std::istream& in)
{
    LineReader r{in};
    {
        auto s = r.next("header");
        std::string magic;
        int version = 0;
        if (!(s >> magic >> version) || magic != "decmesh")
            r.fail("missing 'decmesh' header");
        if (version != 1)
            r.fail("unsupported decmesh version " + std::to_string(version));
    }
    const long n = read_count(r, "dim");
    if (n < 1 || n > max_dim)
        r.fail("dimension must be 1, 2 or 3");
    const long m = read_count(r, "vertices");
    Eigen::MatrixXd X(n, m);
    for (long v = 0; v < m; ++v) {
        auto s = r.next("vertex coordinates");
        for (long d = 0; d < n; ++d)
            if (!(s >> X(d, v)))
                r.fail("vertex " + std::to_string(v) + " needs " + std::to_string(n) + " coordinates");
    }
    const long c = read_count(r, "cells");
    std::vector<std::vector<Index>> cells(std::size_t(c), std::vector<Index>(std::size_t(n + 1)));
    for (long i = 0; i < c; ++i) {
        auto s = r.next("cell");
        for (long j = 0; j <= n; ++j)
            if (!(s >> cells[i][j]))
                r.fail("cell " + std::to_string(i) + " needs " + std::to_string(n + 1) + " vertex indices");
    }
    SimplicialComplex complex = build_complex(int(n), X, cells);

    std::vector<BoundaryMark> marks;
    std::string line;
    while (std::getline(in, line)) {
        ++r.number;
        std::istringstream s(line);
        std::string word;
        if (!(s >> word) || word[0] == '#')
            continue;
        long b = -1;
        if (word != "boundary" || !(s >> b) || b < 0)
            r.fail("expected 'boundary <count>'");
        for (long i = 0; i < b; ++i) {
            auto t = r.next("boundary face");
            BoundaryMark mark;
            mark.vertices.resize(std::size_t(n));
            for (long j = 0; j < n; ++j)
                if (!(t >> mark.vertices[j]))
                    r.fail("boundary face needs " + std::to_string(n) + " vertex indices");
            if (!(t >> mark.label))
                mark.label = "default";
            marks.push_back(std::move(mark));
        }
        break;
    }
    try {
        complex.set_boundary_marks(std::move(marks));
    } catch (const lookup_error& e) {
        r.fail(std::string("boundary mark is not a face: ") + e.what());
    }
    return complex;
}

void write_mesh(std::ostream& out, const SimplicialComplex& complex)
{
    const int n = complex.dim();
    out << "decmesh 1\n";
    out << "dim " << n << "\n";
    out << "vertices " << complex.count(0) << "\n";
    char buf[64];
    for (Index v = 0; v < complex.count(0); ++v) {
        for (int d = 0; d < n; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", complex.vertices()(d, v));
            out << (d ? " " : "") << buf;
        }
        out << "\n";
    }
    const auto cells = complex.top_cells();
    out << "cells " << cells.size() << "\n";
    for (const auto& cell : cells) {
        for (std::size_t j = 0; j < cell.size(); ++j)
            out << (j ? " " : "") << cell[j];
        out << "\n";
    }
    const auto& marks = complex.boundary_marks();
    if (!marks.empty()) {
        out << "boundary " << marks.size() << "\n";
        for (const auto& m : marks) {
            for (Index v : m.vertices)
                out << v << " ";
            out << m.label << "\n";
        }
    }
}

SimplicialComplex load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    return read_mesh(in);
}

void save(const SimplicialComplex& complex, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw dec_error("cannot write '" + path + "'");
    write_mesh(out, complex);
    if (!out)
        throw dec_error("error while writing '" + path + "'");
}

} // namespace declab
