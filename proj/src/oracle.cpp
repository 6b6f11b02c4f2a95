#include "snets/oracle.hpp"

#include <algorithm>
#include <map>

#include "snets/conventions.hpp"

namespace snets {

namespace {

using Corner = std::array<std::int64_t, 3>;

struct Sampler {
    const LabeledVolume& vol;
    const SelectedLabelSet& set;

    Label label(const Corner& p) const { return classify(set, vol.at(p[0], p[1], p[2])); }
    bool crosses(const Corner& a, const Corner& b) const { return edge_intersects(label(a), label(b)); }
};

// The twelve edges of the unit cube as corner pairs, enumerated geometrically.
std::vector<std::pair<Corner, Corner>> cube_edges() {
    std::vector<std::pair<Corner, Corner>> edges;
    for (std::int64_t a = 0; a < 3; ++a) {
        for (std::int64_t u = 0; u < 2; ++u) {
            for (std::int64_t v = 0; v < 2; ++v) {
                Corner p{}, q{};
                const std::int64_t b = (a + 1) % 3, c = (a + 2) % 3;
                p[b] = q[b] = u;
                p[c] = q[c] = v;
                p[a] = 0;
                q[a] = 1;
                edges.emplace_back(p, q);
            }
        }
    }
    return edges;
}

} // namespace

SurfaceNetMesh oracle_extract(const LabeledVolume& vol, const SelectedLabelSet& set) {
    const auto& dims = vol.dims();
    const Sampler sample{vol, set};
    const auto edges = cube_edges();

    auto shift = [](const Corner& base, const Corner& d) {
        return Corner{base[0] + d[0], base[1] + d[1], base[2] + d[2]};
    };

    // Points: one per voxel with any intersected edge, in voxel scan order.
    std::map<Corner, PointId> point_of;  // keyed (k, j, i) so iteration follows scan order
    SurfaceNetMesh mesh;
    mesh.spacing = vol.spacing();
    mesh.origin = vol.origin();
    for (std::int64_t k = 0; k + 1 < dims[2]; ++k) {
        for (std::int64_t j = 0; j + 1 < dims[1]; ++j) {
            for (std::int64_t i = 0; i + 1 < dims[0]; ++i) {
                const Corner v{i, j, k};
                bool any = false;
                for (const auto& [a, b] : edges) any = any || sample.crosses(shift(v, a), shift(v, b));
                if (!any) continue;
                point_of.emplace(Corner{k, j, i}, static_cast<PointId>(mesh.points.size()));
                const Point3f c = voxel_center_f(vol, i, j, k);
                mesh.points.push_back(c);
                mesh.anchors.push_back(c);
            }
        }
    }
    auto id_of = [&](std::int64_t i, std::int64_t j, std::int64_t k) { return point_of.at(Corner{k, j, i}); };

    // Quads: one per intersected interior volume edge.
    for (std::int64_t k = 0; k < dims[2]; ++k) {
        for (std::int64_t j = 0; j < dims[1]; ++j) {
            for (std::int64_t i = 0; i < dims[0]; ++i) {
                for (int a = 0; a < 3; ++a) {
                    const auto axis = static_cast<Axis>(a);
                    if (!edge_is_interior(axis, i, j, k, dims)) continue;
                    const Corner p{i, j, k};
                    const Corner q = shift(p, axis_step(axis));
                    if (!sample.crosses(p, q)) continue;
                    Quad quad;
                    for (int c = 0; c < 4; ++c) {
                        const auto& off = kQuadVoxelOffsets[a][c];
                        quad[c] = id_of(i + off[0], j + off[1], k + off[2]);
                    }
                    mesh.quads.push_back(quad);
                    mesh.tuples.push_back({sample.label(p), sample.label(q)});
                }
            }
        }
    }

    // Stencils: a face links its two voxels when any of the face's four edges is intersected.
    mesh.stencil_offsets.assign(1, 0);
    // Map order is scan order, which is also point id order.
    for (const auto& entry : point_of) {
        const auto& key = entry.first;
        const std::int64_t k = key[0], j = key[1], i = key[2];
        std::vector<PointId> nbrs;
        for (int f = 0; f < 6; ++f) {
            const auto& d = kFaceNeighborOffsets[f];
            const Corner nv{i + d[0], j + d[1], k + d[2]};
            bool exists = true;
            for (int a = 0; a < 3; ++a) exists = exists && nv[a] >= 0 && nv[a] + 1 < dims[a];
            if (!exists) continue;
            const int axis = f / 2;
            const std::int64_t side = f % 2;
            bool face_cut = false;
            for (const auto& [ea, eb] : edges) {
                if (ea[axis] != side || eb[axis] != side) continue;
                face_cut = face_cut || sample.crosses(shift({i, j, k}, ea), shift({i, j, k}, eb));
            }
            if (face_cut) nbrs.push_back(id_of(nv[0], nv[1], nv[2]));
        }
        std::sort(nbrs.begin(), nbrs.end());
        mesh.stencil.insert(mesh.stencil.end(), nbrs.begin(), nbrs.end());
        mesh.stencil_offsets.push_back(mesh.stencil.size());
    }
    return mesh;
}

} // namespace snets
