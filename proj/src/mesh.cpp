#include "snets/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "binary_io.hpp"

namespace snets {

namespace fs = std::filesystem;

std::string validate(const SurfaceNetMesh& mesh) {
    const std::size_t n = mesh.points.size();
    if (mesh.anchors.size() != n) return "anchors/points length mismatch";
    if (mesh.quads.size() != mesh.tuples.size()) return "quads/tuples length mismatch";
    if (mesh.stencil_offsets.size() != n + 1) return "stencil offsets length mismatch";
    if (mesh.stencil_offsets.front() != 0 || mesh.stencil_offsets.back() != mesh.stencil.size()) {
        return "stencil offsets do not span the neighbor array";
    }
    for (const auto& q : mesh.quads) {
        for (PointId id : q) {
            if (id >= n) return "quad references missing point";
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        const auto b = mesh.stencil_offsets[p];
        const auto e = mesh.stencil_offsets[p + 1];
        if (e < b) return "stencil offsets decrease";
        if (e - b > 6) return "stencil degree exceeds 6";
        for (auto s = b; s < e; ++s) {
            const PointId nb = mesh.stencil[s];
            if (nb >= n) return "stencil references missing point";
            if (nb == p) return "stencil self-reference";
            if (s > b && mesh.stencil[s - 1] >= nb) return "stencil neighbors not strictly ascending";
            const auto nb_begin = mesh.stencil.begin() + static_cast<std::ptrdiff_t>(mesh.stencil_offsets[nb]);
            const auto nb_end = mesh.stencil.begin() + static_cast<std::ptrdiff_t>(mesh.stencil_offsets[nb + 1]);
            if (!std::binary_search(nb_begin, nb_end, static_cast<PointId>(p))) {
                return "stencil is not symmetric";
            }
        }
    }
    return {};
}

namespace {

void append_bytes(std::string& out, const void* data, std::size_t n) {
    out.append(static_cast<const char*>(data), n);
}

template <class T>
void append_le(std::string& out, T v) {
    v = detail::byteswap_if_big(v);
    append_bytes(out, &v, sizeof(T));
}

} // namespace

std::string canonicalize(const SurfaceNetMesh& mesh) {
    const std::size_t n = mesh.points.size();
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    auto key = [&](PointId p) {
        const auto& a = mesh.anchors[p];
        const auto& q = mesh.points[p];
        return std::array<float, 6>{a[2], a[1], a[0], q[2], q[1], q[0]};
    };
    std::stable_sort(order.begin(), order.end(), [&](PointId a, PointId b) { return key(a) < key(b); });
    std::vector<PointId> remap(n);
    for (std::size_t r = 0; r < n; ++r) remap[order[r]] = static_cast<PointId>(r);

    struct Face {
        Quad q;
        LabelPair t;
        auto operator<=>(const Face&) const = default;
    };
    std::vector<Face> faces;
    faces.reserve(mesh.quads.size());
    for (std::size_t f = 0; f < mesh.quads.size(); ++f) {
        Quad q;
        for (int c = 0; c < 4; ++c) q[c] = remap[mesh.quads[f][c]];
        std::rotate(q.begin(), std::min_element(q.begin(), q.end()), q.end());
        faces.push_back({q, mesh.tuples[f]});
    }
    std::sort(faces.begin(), faces.end());

    std::string out;
    out.append("SNCANON1");
    append_le<std::uint64_t>(out, n);
    append_le<std::uint64_t>(out, faces.size());
    append_le<std::uint64_t>(out, mesh.stencil.size());
    for (double s : mesh.spacing) append_le(out, s);
    for (double o : mesh.origin) append_le(out, o);
    for (PointId p : order) {
        for (float c : mesh.anchors[p]) append_le(out, c);
        for (float c : mesh.points[p]) append_le(out, c);
    }
    for (const auto& f : faces) {
        for (PointId id : f.q) append_le(out, id);
        for (Label l : f.t) append_le(out, l);
    }
    std::vector<PointId> nbrs;
    for (PointId p : order) {
        nbrs.clear();
        for (auto s = mesh.stencil_offsets[p]; s < mesh.stencil_offsets[p + 1]; ++s) {
            nbrs.push_back(remap[mesh.stencil[s]]);
        }
        std::sort(nbrs.begin(), nbrs.end());
        append_le<std::uint32_t>(out, static_cast<std::uint32_t>(nbrs.size()));
        for (PointId id : nbrs) append_le(out, id);
    }
    return out;
}

std::vector<std::size_t> region_submesh(const SurfaceNetMesh& mesh, Label label) {
    std::vector<std::size_t> ids;
    for (std::size_t f = 0; f < mesh.tuples.size(); ++f) {
        if (mesh.tuples[f][0] == label || mesh.tuples[f][1] == label) ids.push_back(f);
    }
    return ids;
}

// ---------------------------------------------------------------------------------------------
// SNET smoothing cache

namespace {

constexpr char kSnetMagic[4] = {'S', 'N', 'E', 'T'};
constexpr std::uint32_t kSnetVersion = 1;

template <class T, std::size_t N>
std::span<const T> flat(const std::vector<std::array<T, N>>& v) {
    return {v.empty() ? nullptr : v.front().data(), v.size() * N};
}

template <class T, std::size_t N>
std::span<T> flat(std::vector<std::array<T, N>>& v) {
    return {v.empty() ? nullptr : v.front().data(), v.size() * N};
}

} // namespace

void write_snet(const SurfaceNetMesh& mesh, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(kSnetMagic, 4);
    detail::write_le(out, kSnetVersion);
    detail::write_le<std::uint64_t>(out, mesh.points.size());
    detail::write_le<std::uint64_t>(out, mesh.quads.size());
    detail::write_le<std::uint64_t>(out, mesh.stencil.size());
    for (double s : mesh.spacing) detail::write_le(out, s);
    for (double o : mesh.origin) detail::write_le(out, o);
    detail::write_le_span(out, flat(mesh.anchors));
    detail::write_le_span(out, flat(mesh.points));
    detail::write_le_span(out, flat(mesh.quads));
    detail::write_le_span(out, flat(mesh.tuples));
    detail::write_le_span<std::uint64_t>(out, mesh.stencil_offsets);
    detail::write_le_span<PointId>(out, mesh.stencil);
    if (!out) throw Error("failed writing " + path.string());
}

SurfaceNetMesh read_snet(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kSnetMagic, 4) != 0) throw Error(path.string() + ": not an SNET file");
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kSnetVersion) {
        throw Error(path.string() + ": unsupported SNET version " + std::to_string(version));
    }
    const auto np = detail::read_le<std::uint64_t>(in);
    const auto nq = detail::read_le<std::uint64_t>(in);
    const auto ns = detail::read_le<std::uint64_t>(in);

    std::error_code ec;
    const auto size = fs::file_size(path, ec);
    const std::uint64_t header = 4 + 4 + 3 * 8 + 6 * 8;
    // Reject truncated files before sizing allocations off their header.
    const long double expect = static_cast<long double>(header) + np * 24.0L + nq * 24.0L +
                               (np + 1) * 8.0L + ns * 4.0L;
    if (ec || static_cast<long double>(size) != expect) {
        throw Error(path.string() + ": truncated or oversized SNET file");
    }

    SurfaceNetMesh m;
    for (double& s : m.spacing) s = detail::read_le<double>(in);
    for (double& o : m.origin) o = detail::read_le<double>(in);
    m.anchors.resize(np);
    m.points.resize(np);
    m.quads.resize(nq);
    m.tuples.resize(nq);
    m.stencil_offsets.resize(np + 1);
    m.stencil.resize(ns);
    detail::read_le_span(in, flat(m.anchors));
    detail::read_le_span(in, flat(m.points));
    detail::read_le_span(in, flat(m.quads));
    detail::read_le_span(in, flat(m.tuples));
    detail::read_le_span<std::uint64_t>(in, m.stencil_offsets);
    detail::read_le_span<PointId>(in, m.stencil);
    if (auto problem = validate(m); !problem.empty()) {
        throw Error(path.string() + ": corrupt SNET file (" + problem + ")");
    }
    return m;
}

// ---------------------------------------------------------------------------------------------
// Triangle exports

void write_obj(const TriangleMesh& tri, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << "# snets surface net: " << tri.points.size() << " vertices, " << tri.triangles.size()
        << " triangles\n";
    char buf[128];
    for (const auto& p : tri.points) {
        const int len = std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p[0], p[1], p[2]);
        out.write(buf, len);
    }
    for (const auto& t : tri.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    if (!out) throw Error("failed writing " + path.string());
}

void write_ply(const TriangleMesh& tri, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << "ply\n"
        << "format binary_little_endian 1.0\n"
        << "comment snets surface net\n"
        << "element vertex " << tri.points.size() << '\n'
        << "property float x\n"
        << "property float y\n"
        << "property float z\n"
        << "element face " << tri.triangles.size() << '\n'
        << "property list uchar uint vertex_indices\n"
        << "property uint label0\n"
        << "property uint label1\n"
        << "end_header\n";
    detail::write_le_span(out, flat(tri.points));
    for (std::size_t f = 0; f < tri.triangles.size(); ++f) {
        detail::write_le<std::uint8_t>(out, 3);
        for (PointId id : tri.triangles[f]) detail::write_le(out, id);
        detail::write_le(out, tri.tuples[f][0]);
        detail::write_le(out, tri.tuples[f][1]);
    }
    if (!out) throw Error("failed writing " + path.string());
}

void write_triangle_mesh(const TriangleMesh& tri, const fs::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj") {
        write_obj(tri, path);
    } else if (ext == ".ply") {
        write_ply(tri, path);
    } else {
        throw Error("unknown mesh extension '" + ext + "' (expected .ply or .obj)");
    }
}

} // namespace snets
