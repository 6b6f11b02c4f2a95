#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>

#include "snets/extract.hpp"
#include "snets/oracle.hpp"
#include "snets/smooth.hpp"
#include "support.hpp"

using namespace snets;

namespace {

const SelectedLabelSet kOne(std::vector<Label>{1});

SurfaceNetMesh permuted(const SurfaceNetMesh& m, std::mt19937_64& rng) {
    const std::size_t n = m.num_points();
    std::vector<PointId> to(n);  // old id -> new id
    std::iota(to.begin(), to.end(), PointId{0});
    std::shuffle(to.begin(), to.end(), rng);
    SurfaceNetMesh out;
    out.spacing = m.spacing;
    out.origin = m.origin;
    out.anchors.resize(n);
    out.points.resize(n);
    std::vector<std::vector<PointId>> nb(n);
    for (PointId p = 0; p < n; ++p) {
        out.anchors[to[p]] = m.anchors[p];
        out.points[to[p]] = m.points[p];
        for (auto s = m.stencil_offsets[p]; s < m.stencil_offsets[p + 1]; ++s) nb[to[p]].push_back(to[m.stencil[s]]);
    }
    out.stencil_offsets.assign(1, 0);
    for (auto& v : nb) {
        std::sort(v.begin(), v.end());
        out.stencil.insert(out.stencil.end(), v.begin(), v.end());
        out.stencil_offsets.push_back(out.stencil.size());
    }
    std::vector<std::size_t> qorder(m.num_quads());
    std::iota(qorder.begin(), qorder.end(), std::size_t{0});
    std::shuffle(qorder.begin(), qorder.end(), rng);
    for (std::size_t q : qorder) {
        Quad v;
        for (int c = 0; c < 4; ++c) v[c] = to[m.quads[q][c]];
        std::rotate(v.begin(), v.begin() + static_cast<long>(rng() % 4), v.end());  // same cycle
        out.quads.push_back(v);
        out.tuples.push_back(m.tuples[q]);
    }
    return out;
}

template <class T>
void put(std::string& s, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    s.append(b, sizeof(T));  // test host is little-endian
}

} // namespace

TEST_CASE("validate") {
    auto m = extract(test::center_point_volume(), kOne);
    CHECK(validate(m).empty());
    SUBCASE("asymmetric stencil") {
        m.stencil[0] = m.stencil[0] == 0 ? 1 : 0;
        CHECK_FALSE(validate(m).empty());
    }
    SUBCASE("quad id out of range") {
        m.quads[0][2] = 99;
        CHECK_FALSE(validate(m).empty());
    }
    SUBCASE("tuple count") {
        m.tuples.pop_back();
        CHECK_FALSE(validate(m).empty());
    }
    SUBCASE("self reference") {
        m.stencil[m.stencil_offsets[3]] = 3;
        CHECK_FALSE(validate(m).empty());
    }
}

TEST_CASE("canonicalize") {
    SUBCASE("invariant under point and quad permutation") {
        std::mt19937_64 rng(4);
        for (int t = 0; t < 10; ++t) {
            const auto vol = test::random_volume(rng, 3, 10, 3);
            const auto m = extract(vol, test::labels_up_to(3));
            const auto p = permuted(m, rng);
            REQUIRE(validate(p).empty());
            CHECK(canonicalize(p) == canonicalize(m));
        }
    }
    SUBCASE("empty mesh constant") {
        std::string expect = "SNCANON1";
        for (int i = 0; i < 3; ++i) put<std::uint64_t>(expect, 0);
        for (double d : {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}) put(expect, d);
        CHECK(canonicalize(SurfaceNetMesh{}) == expect);
    }
    SUBCASE("sensitive to tuples and positions") {
        const auto m = extract(test::center_point_volume(), kOne);
        auto t = m;
        std::swap(t.tuples[0][0], t.tuples[0][1]);
        CHECK(canonicalize(t) != canonicalize(m));
        auto p = m;
        p.points[0][0] += 0.25f;
        CHECK(canonicalize(p) != canonicalize(m));
    }
    SUBCASE("extract vs oracle on a random 8^3 volume") {
        std::mt19937_64 rng(12);
        const auto vol = test::random_volume(rng, 8, 8, 4);
        CHECK(canonicalize(extract(vol, test::labels_up_to(4))) ==
              canonicalize(oracle_extract(vol, test::labels_up_to(4))));
    }
}

TEST_CASE("region_submesh") {
    const auto ball = test::ball_volume(12, 3.5, 4);
    const auto m = extract(ball, SelectedLabelSet(std::vector<Label>{4}));
    REQUIRE(m.num_quads() > 0);
    CHECK(region_submesh(m, 4).size() == m.num_quads());
    CHECK(region_submesh(m, kBackground).size() == m.num_quads());
    CHECK(region_submesh(m, 9).empty());

    // Two touching blocks: the interface belongs to both.
    LabeledVolume blocks({8, 6, 6}, {1, 1, 1}, {0, 0, 0}, ScalarType::U8);
    for (std::int64_t k = 1; k < 5; ++k)
        for (std::int64_t j = 1; j < 5; ++j)
            for (std::int64_t i = 1; i < 7; ++i) blocks.set(i, j, k, i < 4 ? 1 : 2);
    const auto b = extract(blocks, test::labels_up_to(2));
    const auto r1 = region_submesh(b, 1), r2 = region_submesh(b, 2);
    std::vector<std::size_t> shared;
    std::set_intersection(r1.begin(), r1.end(), r2.begin(), r2.end(), std::back_inserter(shared));
    CHECK(shared.size() == 16);  // 4x4 x-edges cross the i=3/4 interface
    for (std::size_t q : shared) CHECK(b.tuples[q] == LabelPair{1, 2});
}

TEST_CASE("snet round trip") {
    const auto dir = test::scratch_dir("snet");
    SUBCASE("3^3 fixture, bit-identical") {
        LabeledVolume vol = test::center_point_volume();
        const auto m = extract(vol, kOne);
        write_snet(m, dir / "c.snet");
        CHECK(read_snet(dir / "c.snet") == m);
    }
    SUBCASE("smoothed random mesh") {
        std::mt19937_64 rng(77);
        const auto vol = test::random_volume(rng, 6, 12, 3);
        const auto m = smooth(extract(vol, test::labels_up_to(3)), SmoothingParams{});
        write_snet(m, dir / "r.snet");
        CHECK(read_snet(dir / "r.snet") == m);
    }
    SUBCASE("wrong magic") {
        std::ofstream(dir / "bad.snet", std::ios::binary) << "SNEX" << std::string(100, '\0');
        CHECK_THROWS_AS(read_snet(dir / "bad.snet"), Error);
    }
    SUBCASE("truncated") {
        const auto m = extract(test::center_point_volume(), kOne);
        write_snet(m, dir / "t.snet");
        const auto bytes = test::slurp(dir / "t.snet");
        std::ofstream(dir / "t2.snet", std::ios::binary) << bytes.substr(0, bytes.size() - 5);
        CHECK_THROWS_AS(read_snet(dir / "t2.snet"), Error);
    }
    SUBCASE("extract, write, read, smooth equals extract, smooth") {
        const auto ball = test::ball_volume(14, 4.2);
        const auto m = extract(ball, kOne);
        write_snet(m, dir / "b.snet");
        CHECK(smooth(read_snet(dir / "b.snet"), SmoothingParams{}) == smooth(m, SmoothingParams{}));
    }
}

TEST_CASE("OBJ and PLY writers") {
    const auto dir = test::scratch_dir("writers");
    TriangleMesh one;
    one.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    one.triangles = {{0, 1, 2}};
    one.tuples = {{3, kBackground}};

    SUBCASE("one-triangle OBJ") {
        write_obj(one, dir / "t.obj");
        std::ifstream is(dir / "t.obj");
        int v = 0, f = 0;
        std::string line, face;
        while (std::getline(is, line)) {
            if (line.rfind("v ", 0) == 0) ++v;
            if (line.rfind("f ", 0) == 0) {
                ++f;
                face = line;
            }
        }
        CHECK(v == 3);
        CHECK(f == 1);
        CHECK(face == "f 1 2 3");
    }
    SUBCASE("PLY reloads through an independent reader") {
        write_ply(one, dir / "t.ply");
        const auto ply = test::read_ply(dir / "t.ply");
        REQUIRE(ply.ok);
        CHECK(ply.declared_vertices == 3);
        CHECK(ply.declared_faces == 1);
        CHECK(ply.vertices[1] == std::array<float, 3>{1, 0, 0});
        CHECK(ply.faces[0] == std::vector<std::uint32_t>{0, 1, 2});
        CHECK(ply.face_labels[0] == std::array<std::uint32_t, 2>{3, kBackground});
    }
    SUBCASE("dispatch by extension") {
        write_triangle_mesh(one, dir / "a.ply");
        write_triangle_mesh(one, dir / "a.obj");
        CHECK(test::slurp(dir / "a.ply").rfind("ply\n", 0) == 0);
        CHECK(test::slurp(dir / "a.obj").find("\nv ") != std::string::npos);
        CHECK_THROWS_AS(write_triangle_mesh(one, dir / "a.stl"), Error);
    }
}
