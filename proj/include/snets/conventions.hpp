#pragma once

// Geometry conventions shared by the parallel extractor and the reference oracle.
// Both must agree on these for their outputs to compare equal.

#include <array>
#include <cstdint>

#include "snets/mesh.hpp"
#include "snets/volume.hpp"

namespace snets {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

/// Voxel offsets (di, dj, dk) relative to an edge's origin grid point, listing the four voxels
/// that share the +axis edge. The order is counterclockwise seen looking down the edge from +axis,
/// so the quad normal points along +axis: from the origin endpoint's region into the far one's.
inline constexpr std::array<std::array<std::array<std::int8_t, 3>, 4>, 3> kQuadVoxelOffsets{{
    {{{0, -1, -1}, {0, 0, -1}, {0, 0, 0}, {0, -1, 0}}},  // x-edge: y then z
    {{{-1, 0, -1}, {-1, 0, 0}, {0, 0, 0}, {0, 0, -1}}},  // y-edge: z then x
    {{{-1, -1, 0}, {0, -1, 0}, {0, 0, 0}, {-1, 0, 0}}},  // z-edge: x then y
}};

inline constexpr std::array<std::int64_t, 3> axis_step(Axis a) {
    return {a == Axis::X ? 1 : 0, a == Axis::Y ? 1 : 0, a == Axis::Z ? 1 : 0};
}

/// True when the +axis edge at grid point (i,j,k) exists and all four voxels around it exist.
/// Only such edges produce quads; edges on the volume boundary leave the surface open.
constexpr bool edge_is_interior(Axis axis, std::int64_t i, std::int64_t j, std::int64_t k,
                                const std::array<std::int64_t, 3>& dims) {
    const std::array<std::int64_t, 3> p{i, j, k};
    for (int a = 0; a < 3; ++a) {
        if (a == static_cast<int>(axis)) {
            if (p[a] < 0 || p[a] > dims[a] - 2) return false;
        } else if (p[a] < 1 || p[a] > dims[a] - 2) {
            return false;
        }
    }
    return true;
}

/// Voxel faces f0..f5 = -x, +x, -y, +y, -z, +z.
inline constexpr std::array<std::array<std::int8_t, 3>, 6> kFaceNeighborOffsets{{
    {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1},
}};

/// Bit f set when the face-adjacent voxel across face f exists.
constexpr std::uint8_t existing_face_mask(std::int64_t i, std::int64_t j, std::int64_t k,
                                          const std::array<std::int64_t, 3>& dims) {
    std::uint8_t m = 0;
    if (i > 0) m |= 1u << 0;
    if (i + 2 < dims[0]) m |= 1u << 1;
    if (j > 0) m |= 1u << 2;
    if (j + 2 < dims[1]) m |= 1u << 3;
    if (k > 0) m |= 1u << 4;
    if (k + 2 < dims[2]) m |= 1u << 5;
    return m;
}

inline Point3f voxel_center_f(const LabeledVolume& vol, std::int64_t i, std::int64_t j,
                              std::int64_t k) {
    const auto c = vol.voxel_center(i, j, k);
    return {static_cast<float>(c[0]), static_cast<float>(c[1]), static_cast<float>(c[2])};
}

} // namespace snets
