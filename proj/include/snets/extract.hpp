#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "snets/labels.hpp"
#include "snets/mesh.hpp"
#include "snets/volume.hpp"

namespace snets {

// ---------------------------------------------------------------------------------------------
// Voxel triads

/// Per-grid-point flag byte. Bits 5-7 stay zero.
namespace triad {
inline constexpr std::uint8_t kInside = 1u << 0;        // scalar classifies as a selected label
inline constexpr std::uint8_t kXInt = 1u << 1;          // edge toward +x intersects a boundary
inline constexpr std::uint8_t kYInt = 1u << 2;
inline constexpr std::uint8_t kZInt = 1u << 3;
inline constexpr std::uint8_t kProducePoint = 1u << 4;  // voxel with this origin emits a point
inline constexpr std::uint8_t kEdgeBits = kXInt | kYInt | kZInt;
} // namespace triad

/// Triads for an M x N x O volume, padded by one zero triad on every side.
class TriadVolume {
public:
    explicit TriadVolume(const std::array<std::int64_t, 3>& dims);

    std::size_t index(std::int64_t i, std::int64_t j, std::int64_t k) const {
        return static_cast<std::size_t>((i + 1) + px_ * ((j + 1) + py_ * (k + 1)));
    }
    std::uint8_t& at(std::int64_t i, std::int64_t j, std::int64_t k) { return data_[index(i, j, k)]; }
    std::uint8_t at(std::int64_t i, std::int64_t j, std::int64_t k) const { return data_[index(i, j, k)]; }

    /// Triad (0, j, k); entries -1 and M are padding. j, k may be -1..N / -1..O.
    std::uint8_t* row(std::int64_t j, std::int64_t k) { return data_.data() + index(0, j, k); }
    const std::uint8_t* row(std::int64_t j, std::int64_t k) const { return data_.data() + index(0, j, k); }

    const std::vector<std::uint8_t>& raw() const { return data_; }
    const std::array<std::int64_t, 3>& dims() const { return dims_; }

    /// True when every padding triad is zero.
    bool padding_clear() const;

private:
    std::array<std::int64_t, 3> dims_;
    std::int64_t px_, py_;
    std::vector<std::uint8_t> data_;
};

// ---------------------------------------------------------------------------------------------
// Per-row metadata

/// Metadata for padded x-row (j, k). The counts describe voxel row (j, k) and become exclusive
/// output offsets after the Pass-3 prefix sum. The trim is over triad indices of grid row (j, k).
struct EdgeMeta {
    std::int64_t num_points = 0;
    std::int64_t num_quads = 0;
    std::int64_t num_stencil = 0;
    std::int32_t x_left = 0;
    std::int32_t x_right = 0;

    bool trim_empty() const { return x_left >= x_right; }
};

class XEdgeMetadata {
public:
    explicit XEdgeMetadata(const std::array<std::int64_t, 3>& dims);

    EdgeMeta& at(std::int64_t j, std::int64_t k) { return rows_[index(j, k)]; }
    const EdgeMeta& at(std::int64_t j, std::int64_t k) const { return rows_[index(j, k)]; }
    std::size_t index(std::int64_t j, std::int64_t k) const {
        return static_cast<std::size_t>((j + 1) + (ny_ + 2) * (k + 1));
    }

private:
    std::int64_t ny_;
    std::vector<EdgeMeta> rows_;
};

// ---------------------------------------------------------------------------------------------
// Edge and face cases

/// 12-bit voxel edge mask. Corner c_n sits at offset (n&1, (n>>1)&1, (n>>2)&1).
/// e0..e3: x-edges at (y,z) = (0,0),(1,0),(0,1),(1,1); e4..e7: y-edges at (x,z) in the same order;
/// e8..e11: z-edges at (x,y) in the same order.
using EdgeCase = std::uint16_t;

/// 6-bit face mask, f0..f5 = -x, +x, -y, +y, -z, +z.
using FaceCase = std::uint8_t;

/// Faces bordering each edge.
inline constexpr std::array<FaceCase, 12> kEdgeToFaces{
    (1u << 2) | (1u << 4), (1u << 3) | (1u << 4), (1u << 2) | (1u << 5), (1u << 3) | (1u << 5),
    (1u << 0) | (1u << 4), (1u << 1) | (1u << 4), (1u << 0) | (1u << 5), (1u << 1) | (1u << 5),
    (1u << 0) | (1u << 2), (1u << 1) | (1u << 2), (1u << 0) | (1u << 3), (1u << 1) | (1u << 3),
};

/// Assembles the edge case from the triads at corners c0..c6 (c7 contributes no edge).
constexpr EdgeCase edge_case(const std::array<std::uint8_t, 7>& t) {
    auto x = [&](int c) { return static_cast<EdgeCase>((t[c] >> 1) & 1u); };
    auto y = [&](int c) { return static_cast<EdgeCase>((t[c] >> 2) & 1u); };
    auto z = [&](int c) { return static_cast<EdgeCase>((t[c] >> 3) & 1u); };
    return static_cast<EdgeCase>(
        x(0) | x(2) << 1 | x(4) << 2 | x(6) << 3 |
        y(0) << 4 | y(1) << 5 | y(4) << 6 | y(5) << 7 |
        z(0) << 8 | z(1) << 9 | z(2) << 10 | z(3) << 11);
}

constexpr FaceCase face_case(EdgeCase ec) {
    FaceCase f = 0;
    for (int e = 0; e < 12; ++e) {
        if (ec & (1u << e)) f |= kEdgeToFaces[e];
    }
    return f;
}

/// Edge case of voxel (i, j, k) read from a triad volume.
EdgeCase voxel_edge_case(const TriadVolume& triads, std::int64_t i, std::int64_t j, std::int64_t k);

// ---------------------------------------------------------------------------------------------
// Row iterator

/// Walks a voxel row alongside its eight neighbor rows (dj, dk in {-1, 0, 1}), tracking the
/// point id each row would assign at the current x.
class RowIterator {
public:
    struct Cursor {
        std::int64_t x = 0;
        std::int64_t id = 0;
        const std::uint8_t* triads = nullptr;  // grid row (j+dj, k+dk), triad 0; null if unused
    };

    RowIterator() = default;

    /// Positions cursor (dj, dk) at `start_x` with `first_id` (the row's prefix-summed offset).
    void init(int dj, int dk, const std::uint8_t* row_triads, std::int64_t start_x, std::int64_t first_id);

    /// Moves every cursor forward to `x`, counting PRODUCE_POINT bits crossed.
    void advance(std::int64_t x) {
        for (auto& c : cursors_) {
            if (c.triads == nullptr) continue;
            for (; c.x < x; ++c.x) c.id += (c.triads[c.x] >> 4) & 1u;
        }
    }

    /// Id of the point of voxel (x, j+dj, k+dk) after advance(x). Valid only if that voxel emits.
    PointId id(int dj, int dk) const { return static_cast<PointId>(cursors_[slot(dj, dk)].id); }

private:
    static constexpr int slot(int dj, int dk) { return (dj + 1) + 3 * (dk + 1); }
    std::array<Cursor, 9> cursors_{};
};

// ---------------------------------------------------------------------------------------------
// Extraction

struct ExtractOptions {
    int threads = 0;     // 0 = all logical cores
    bool trim = true;    // false scans every row fully in Passes 2-4 (for verification)
    std::uint64_t max_points = std::numeric_limits<PointId>::max();
};

struct PassCounters {
    std::uint64_t rows_visited = 0;
    std::uint64_t elements_examined = 0;  // edges (Passes 1-2) or voxels (Passes 3-4)
    std::uint64_t outputs_emitted = 0;    // x-intersections, y/z-intersections, points, points
};

struct ExtractStats {
    std::array<PassCounters, 4> passes{};
    std::array<double, 4> seconds{};
    std::uint64_t planned_points = 0, planned_quads = 0, planned_stencil = 0;
    std::uint64_t emitted_points = 0, emitted_quads = 0, emitted_stencil = 0;
    /// Voxel rows whose Pass-4 output counts differ from the Pass-3 plan (always 0).
    std::uint64_t plan_mismatch_rows = 0;
    /// Pass-2 edge pairs examined per grid row, indexed j + N*k.
    std::vector<std::uint32_t> pass2_row_work;
};

/// Thrown when the planned output cannot be indexed or allocated.
class OutputSizeError : public Error {
public:
    OutputSizeError(const std::string& what, std::uint64_t points, std::uint64_t quads,
                    std::uint64_t stencil)
        : Error(what), points(points), quads(quads), stencil(stencil) {}
    std::uint64_t points, quads, stencil;
};

/// Output sizes computed by Pass 3, with the arrays already allocated.
struct OutputPlan {
    std::uint64_t points = 0, quads = 0, stencil = 0;
    /// Per voxel row (indexed like XEdgeMetadata) counts before the prefix sum.
    std::vector<std::array<std::int64_t, 3>> row_counts;
    SurfaceNetMesh mesh;
};

/// Voxel index range [first, second) that Passes 3-4 scan on voxel row (j, k).
std::pair<std::int64_t, std::int64_t> voxel_row_range(const XEdgeMetadata& meta,
                                                     const std::array<std::int64_t, 3>& dims,
                                                     std::int64_t j, std::int64_t k, bool trim);

void pass1_process_x_edges(const LabeledVolume& vol, const SelectedLabelSet& set, TriadVolume& triads,
                           XEdgeMetadata& meta, const ExtractOptions& opts, ExtractStats* stats = nullptr);

void pass2_process_yz_edges(const LabeledVolume& vol, TriadVolume& triads, XEdgeMetadata& meta,
                            const ExtractOptions& opts, ExtractStats* stats = nullptr);

OutputPlan pass3_configure_output(const LabeledVolume& vol, TriadVolume& triads, XEdgeMetadata& meta,
                                  const ExtractOptions& opts, ExtractStats* stats = nullptr);

void pass4_generate_output(const LabeledVolume& vol, const TriadVolume& triads, const XEdgeMetadata& meta,
                           OutputPlan& plan, const ExtractOptions& opts, ExtractStats* stats = nullptr);

/// Runs Passes 1-4. Output is identical for every thread count.
SurfaceNetMesh extract(const LabeledVolume& vol, const SelectedLabelSet& set,
                       const ExtractOptions& opts = {}, ExtractStats* stats = nullptr);

/// Number of extract() calls made by this process.
std::uint64_t extract_invocation_count();

} // namespace snets
