#include "snets/triangulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace snets {

TriangulationStrategy parse_triangulation_strategy(std::string_view name) {
    if (name == "fixed") return TriangulationStrategy::Fixed;
    if (name == "shortest_diagonal") return TriangulationStrategy::ShortestDiagonal;
    if (name == "min_area") return TriangulationStrategy::MinArea;
    if (name == "most_coplanar") return TriangulationStrategy::MostCoplanar;
    throw std::invalid_argument("unknown triangulation strategy '" + std::string(name) +
                                "' (fixed|shortest_diagonal|min_area|most_coplanar)");
}

std::string_view triangulation_strategy_name(TriangulationStrategy s) {
    switch (s) {
    case TriangulationStrategy::Fixed: return "fixed";
    case TriangulationStrategy::ShortestDiagonal: return "shortest_diagonal";
    case TriangulationStrategy::MinArea: return "min_area";
    case TriangulationStrategy::MostCoplanar: return "most_coplanar";
    }
    return "?";
}

namespace {

using Vec = std::array<double, 3>;

Vec to_vec(const Point3f& p) { return {p[0], p[1], p[2]}; }
Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec cross(const Vec& a, const Vec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec tri_normal(const Vec& a, const Vec& b, const Vec& c) { return cross(sub(b, a), sub(c, a)); }

double fold(const Vec& n1, const Vec& n2) {
    const double l1 = norm(n1), l2 = norm(n2);
    if (l1 == 0.0 || l2 == 0.0) return 0.0;
    return 1.0 - dot(n1, n2) / (l1 * l2);
}

} // namespace

bool use_diagonal_bd(const Quad& quad, std::span<const Point3f> points, TriangulationStrategy strategy) {
    if (strategy == TriangulationStrategy::Fixed) return false;
    const Vec a = to_vec(points[quad[0]]), b = to_vec(points[quad[1]]);
    const Vec c = to_vec(points[quad[2]]), d = to_vec(points[quad[3]]);
    switch (strategy) {
    case TriangulationStrategy::ShortestDiagonal: {
        const Vec ac = sub(c, a), bd = sub(d, b);
        return dot(bd, bd) < dot(ac, ac);
    }
    case TriangulationStrategy::MinArea: {
        const double ac = norm(tri_normal(a, b, c)) + norm(tri_normal(a, c, d));
        const double bd = norm(tri_normal(a, b, d)) + norm(tri_normal(b, c, d));
        return bd < ac;
    }
    case TriangulationStrategy::MostCoplanar: {
        const double ac = fold(tri_normal(a, b, c), tri_normal(a, c, d));
        const double bd = fold(tri_normal(a, b, d), tri_normal(b, c, d));
        return bd < ac;
    }
    case TriangulationStrategy::Fixed: break;
    }
    return false;
}

TriangleMesh triangulate(const SurfaceNetMesh& mesh, TriangulationStrategy strategy, int threads) {
    TriangleMesh out;
    out.points = mesh.points;
    out.triangles.resize(2 * mesh.quads.size());
    out.tuples.resize(2 * mesh.quads.size());
    detail::Workers workers(threads);
    workers.for_each(mesh.quads.size(), [&](std::size_t q) {
        const Quad& v = mesh.quads[q];
        if (use_diagonal_bd(v, mesh.points, strategy)) {
            out.triangles[2 * q] = {v[0], v[1], v[3]};
            out.triangles[2 * q + 1] = {v[1], v[2], v[3]};
        } else {
            out.triangles[2 * q] = {v[0], v[1], v[2]};
            out.triangles[2 * q + 1] = {v[0], v[2], v[3]};
        }
        out.tuples[2 * q] = mesh.tuples[q];
        out.tuples[2 * q + 1] = mesh.tuples[q];
    }, 4096);
    return out;
}

} // namespace snets
