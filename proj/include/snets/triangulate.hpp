#pragma once

#include <span>
#include <string_view>

#include "snets/mesh.hpp"

namespace snets {

/// How each quad (a, b, c, d) picks its splitting diagonal. Ties always go to a-c.
///
/// - Fixed: always a-c, giving (a,b,c) + (a,c,d).
/// - ShortestDiagonal: the shorter of |a-c| and |b-d|.
/// - MinArea: the diagonal whose two triangles have the smaller summed area.
/// - MostCoplanar: the diagonal whose two triangle normals are closest to parallel, measured as
///   1 - cos(angle between unit normals). A zero-area triangle contributes deviation 0.
enum class TriangulationStrategy : std::uint8_t { Fixed, ShortestDiagonal, MinArea, MostCoplanar };

TriangulationStrategy parse_triangulation_strategy(std::string_view name);
std::string_view triangulation_strategy_name(TriangulationStrategy s);

/// True when the quad should be split along b-d instead of a-c.
bool use_diagonal_bd(const Quad& quad, std::span<const Point3f> points, TriangulationStrategy strategy);

/// Quad q becomes triangles 2q and 2q+1, keeping the quad's winding and its label tuple.
TriangleMesh triangulate(const SurfaceNetMesh& mesh, TriangulationStrategy strategy, int threads = 0);

} // namespace snets
