#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snets/volume.hpp"

namespace snets {

using PointId = std::uint32_t;
using Point3f = std::array<float, 3>;
using Quad = std::array<PointId, 4>;
using Triangle = std::array<PointId, 3>;

/// Labels on either side of a face. The face normal points from `front()` into `back()`.
using LabelPair = std::array<Label, 2>;

/// Quadrilateral surface net with its smoothing stencils.
///
/// `stencil_offsets` has points.size() + 1 entries; the neighbors of point p are
/// stencil[stencil_offsets[p] .. stencil_offsets[p+1]), sorted ascending.
struct SurfaceNetMesh {
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::vector<Point3f> anchors;
    std::vector<Point3f> points;
    std::vector<Quad> quads;
    std::vector<LabelPair> tuples;
    std::vector<std::uint64_t> stencil_offsets{0};
    std::vector<PointId> stencil;

    std::size_t num_points() const { return points.size(); }
    std::size_t num_quads() const { return quads.size(); }
    std::size_t degree(PointId p) const { return stencil_offsets[p + 1] - stencil_offsets[p]; }

    friend bool operator==(const SurfaceNetMesh&, const SurfaceNetMesh&) = default;
};

struct TriangleMesh {
    std::vector<Point3f> points;
    std::vector<Triangle> triangles;
    std::vector<LabelPair> tuples;
};

/// Structural checks: id ranges, array lengths, stencil symmetry/sortedness/degree.
/// Returns an empty string when valid, otherwise a description of the first problem.
std::string validate(const SurfaceNetMesh& mesh);

/// Order-independent byte encoding. Points are ordered by anchor (z, y, x); each quad is rotated
/// so its smallest id leads (cycle direction kept); quads are sorted together with their tuples;
/// stencil lists are re-sorted after id remapping.
std::string canonicalize(const SurfaceNetMesh& mesh);

/// Ids of quads whose tuple contains `label` (kBackground allowed).
std::vector<std::size_t> region_submesh(const SurfaceNetMesh& mesh, Label label);

/// Smoothing cache. Layout is documented in docs/FORMATS.md.
void write_snet(const SurfaceNetMesh& mesh, const std::filesystem::path& path);
SurfaceNetMesh read_snet(const std::filesystem::path& path);

/// ASCII OBJ, 1-based faces. Carries no label tuples.
void write_obj(const TriangleMesh& tri, const std::filesystem::path& path);
/// Binary little-endian PLY with per-face `label0`/`label1` properties.
void write_ply(const TriangleMesh& tri, const std::filesystem::path& path);
/// Chooses OBJ or PLY by extension.
void write_triangle_mesh(const TriangleMesh& tri, const std::filesystem::path& path);

} // namespace snets
