#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <cstring>
#include <string>
#include <vector>

#include "snets/labels.hpp"
#include "snets/mesh.hpp"
#include "snets/volume.hpp"

namespace snets::test {

/// Random label volume: dims in [lo, hi]^3, `labels` distinct nonzero values plus background 0.
/// Values cluster in small blobs so boundaries are neither everywhere nor nowhere.
inline LabeledVolume random_volume(std::mt19937_64& rng, int lo, int hi, int labels) {
    std::uniform_int_distribution<int> dim(lo, hi);
    const std::array<std::int64_t, 3> dims{dim(rng), dim(rng), dim(rng)};
    LabeledVolume vol(dims, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, ScalarType::U16);
    std::uniform_int_distribution<int> lab(0, labels);
    std::uniform_int_distribution<int> style(0, 2);
    const int s = style(rng);
    for (std::int64_t k = 0; k < dims[2]; ++k) {
        for (std::int64_t j = 0; j < dims[1]; ++j) {
            for (std::int64_t i = 0; i < dims[0]; ++i) {
                Label v = 0;
                if (s == 0) {
                    v = static_cast<Label>(lab(rng));  // salt and pepper
                } else if (s == 1) {
                    v = static_cast<Label>(((i / 2) + (j / 3) * 2 + (k / 2) * 3) % (labels + 1));
                    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) v = static_cast<Label>(lab(rng));
                } else {
                    v = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? static_cast<Label>(lab(rng)) : 0;
                }
                vol.set(i, j, k, v);
            }
        }
    }
    return vol;
}

/// All labels 1..n, whether or not present.
inline SelectedLabelSet labels_up_to(int n) {
    std::vector<Label> v;
    for (int i = 1; i <= n; ++i) v.push_back(static_cast<Label>(i));
    return SelectedLabelSet(v);
}

/// A single ball of `label` centered in an n^3 volume.
inline LabeledVolume ball_volume(std::int64_t n, double radius, Label label = 1) {
    LabeledVolume vol({n, n, n}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, ScalarType::U16);
    const double c = 0.5 * static_cast<double>(n - 1) + 0.25;
    for (std::int64_t k = 0; k < n; ++k)
        for (std::int64_t j = 0; j < n; ++j)
            for (std::int64_t i = 0; i < n; ++i) {
                const double dx = i - c, dy = j - c, dz = k - c;
                if (dx * dx + dy * dy + dz * dz <= radius * radius) vol.set(i, j, k, label);
            }
    return vol;
}

/// 3^3 volume whose only nonzero point is the center.
inline LabeledVolume center_point_volume(Label label = 1) {
    LabeledVolume vol({3, 3, 3}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, ScalarType::U16);
    vol.set(1, 1, 1, label);
    return vol;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("snets_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

/// Undirected edge -> number of quads using it, over the given quad ids.
inline std::map<std::pair<PointId, PointId>, int> quad_edge_use(const SurfaceNetMesh& m,
                                                              const std::vector<std::size_t>& ids) {
    std::map<std::pair<PointId, PointId>, int> use;
    for (std::size_t q : ids) {
        const Quad& v = m.quads[q];
        for (int e = 0; e < 4; ++e) {
            PointId a = v[e], b = v[(e + 1) % 4];
            if (a > b) std::swap(a, b);
            ++use[{a, b}];
        }
    }
    return use;
}

/// Minimal binary little-endian PLY reader, written against the file format rather than the
/// library's writer: parses the header generically and walks the declared properties.
struct PlyData {
    std::vector<std::array<float, 3>> vertices;
    std::vector<std::vector<std::uint32_t>> faces;
    std::vector<std::array<std::uint32_t, 2>> face_labels;
    std::size_t declared_vertices = 0, declared_faces = 0;
    bool ok = false;
};

inline PlyData read_ply(const std::filesystem::path& path) {
    PlyData out;
    std::ifstream is(path, std::ios::binary);
    std::string line;
    if (!std::getline(is, line) || line != "ply") return out;
    struct Prop {
        std::string type, count_type, name;
        bool list = false;
    };
    std::vector<std::pair<std::string, std::vector<Prop>>> elements;
    std::map<std::string, std::size_t> counts;
    while (std::getline(is, line)) {
        if (line == "end_header") break;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "format") {
            std::string f;
            ls >> f;
            if (f != "binary_little_endian") return out;
        } else if (kw == "element") {
            std::string name;
            std::size_t n = 0;
            ls >> name >> n;
            elements.push_back({name, {}});
            counts[name] = n;
        } else if (kw == "property") {
            Prop p;
            ls >> p.type;
            if (p.type == "list") {
                p.list = true;
                ls >> p.count_type >> p.type;
            }
            ls >> p.name;
            elements.back().second.push_back(p);
        }
    }
    auto size_of = [](const std::string& t) -> std::size_t {
        if (t == "uchar" || t == "char" || t == "uint8" || t == "int8") return 1;
        if (t == "ushort" || t == "short" || t == "uint16" || t == "int16") return 2;
        if (t == "double" || t == "float64") return 8;
        return 4;
    };
    auto read_uint = [&](const std::string& t) -> std::uint64_t {
        unsigned char b[8] = {};
        const std::size_t n = size_of(t);
        is.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(n));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    };
    auto read_float = [&]() {
        const auto bits = static_cast<std::uint32_t>(read_uint("float"));
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    };
    out.declared_vertices = counts["vertex"];
    out.declared_faces = counts["face"];
    for (const auto& [name, props] : elements) {
        for (std::size_t e = 0; e < counts[name]; ++e) {
            std::array<float, 3> v{};
            std::vector<std::uint32_t> idx;
            std::array<std::uint32_t, 2> labels{};
            for (const auto& p : props) {
                if (p.list) {
                    const auto n = read_uint(p.count_type);
                    for (std::uint64_t i = 0; i < n; ++i) idx.push_back(static_cast<std::uint32_t>(read_uint(p.type)));
                } else if (p.type == "float") {
                    const float f = read_float();
                    if (p.name == "x") v[0] = f;
                    if (p.name == "y") v[1] = f;
                    if (p.name == "z") v[2] = f;
                } else {
                    const auto u = static_cast<std::uint32_t>(read_uint(p.type));
                    if (p.name == "label0") labels[0] = u;
                    if (p.name == "label1") labels[1] = u;
                }
            }
            if (name == "vertex") out.vertices.push_back(v);
            if (name == "face") {
                out.faces.push_back(idx);
                out.face_labels.push_back(labels);
            }
        }
    }
    out.ok = static_cast<bool>(is) && is.peek() == std::char_traits<char>::eof();
    return out;
}

} // namespace snets::test
