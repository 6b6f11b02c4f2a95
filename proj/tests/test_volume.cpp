#include "doctest.h"

#include <fstream>

#include "snets/volume.hpp"
#include "support.hpp"

using namespace snets;

namespace {

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream os(p, std::ios::binary);
    os << bytes;
}

void write_header(const std::filesystem::path& p, const std::string& dims, const std::string& dtype,
                  const std::string& data) {
    write_file(p, "dims=" + dims + "\nspacing=1 1 1\norigin=0 0 0\ndtype=" + dtype + "\ndata=" + data + "\n");
}

} // namespace

TEST_CASE("load_volume: smallest legal volume") {
    const auto dir = test::scratch_dir("vol_small");
    write_file(dir / "v.raw", std::string(8, '\0'));
    write_header(dir / "v.hdr", "2 2 2", "u8", "v.raw");
    const LabeledVolume v = load_volume(dir / "v.hdr");
    CHECK(v.dims() == std::array<std::int64_t, 3>{2, 2, 2});
    CHECK(v.size() == 8);
    for (Label s : v.scalars()) CHECK(s == 0);
}

TEST_CASE("load_volume: u16 data is little-endian") {
    const auto dir = test::scratch_dir("vol_le");
    std::string raw(27 * 2, '\0');
    raw[13 * 2] = '\x01';
    write_file(dir / "v.raw", raw);
    write_header(dir / "v.hdr", "3 3 3", "u16", "v.raw");
    const LabeledVolume v = load_volume(dir / "v.hdr");
    CHECK(v.at(1, 1, 1) == 1);
    CHECK(v.max_value() == 1);
}

TEST_CASE("load_volume: rejects bad input") {
    const auto dir = test::scratch_dir("vol_bad");
    write_file(dir / "short.raw", std::string(7, '\0'));
    write_header(dir / "short.hdr", "2 2 2", "u8", "short.raw");
    CHECK_THROWS_AS(load_volume(dir / "short.hdr"), Error);

    write_file(dir / "ok.raw", std::string(8, '\0'));
    write_header(dir / "dtype.hdr", "2 2 2", "f32", "ok.raw");
    CHECK_THROWS_AS(load_volume(dir / "dtype.hdr"), Error);

    write_header(dir / "dims.hdr", "1 2 4", "u8", "ok.raw");
    CHECK_THROWS_AS(load_volume(dir / "dims.hdr"), Error);

    write_file(dir / "sent.raw", std::string(32, '\xff'));
    write_header(dir / "sent.hdr", "2 2 2", "u32", "sent.raw");
    CHECK_THROWS_AS(load_volume(dir / "sent.hdr"), Error);

    CHECK_THROWS_AS(load_volume(dir / "missing.hdr"), Error);
}

TEST_CASE("save_volume / load_volume round trip") {
    const auto dir = test::scratch_dir("vol_rt");
    SUBCASE("3^3 with one labeled point") {
        LabeledVolume v({3, 3, 3}, {0.5, 1.0, 2.0}, {-1.0, 0.25, 3.0}, ScalarType::U8);
        v.set(1, 1, 1, 7);
        save_volume(v, dir / "c.hdr");
        CHECK(load_volume(dir / "c.hdr") == v);
    }
    SUBCASE("generated volumes, each dtype") {
        for (ScalarType t : {ScalarType::U8, ScalarType::U16, ScalarType::U32}) {
            SphereSpec s{5, 2.0, 5.0, 200, 3};
            const LabeledVolume v = gen_spheres({13, 9, 11}, {1.0, 1.5, 0.7}, s, t);
            save_volume(v, dir / "g.hdr");
            const LabeledVolume back = load_volume(dir / "g.hdr");
            CHECK(back.scalars() == v.scalars());
            CHECK(back == v);
        }
    }
}

TEST_CASE("save_volume: unwritable path") {
    LabeledVolume v({2, 2, 2}, {1, 1, 1}, {0, 0, 0}, ScalarType::U8);
    CHECK_THROWS_AS(save_volume(v, "/nonexistent_dir_snets/x.hdr"), Error);
}

TEST_CASE("LabeledVolume: construction checks") {
    CHECK_THROWS_AS(LabeledVolume({1, 4, 4}, {1, 1, 1}, {0, 0, 0}, ScalarType::U8), std::invalid_argument);
    CHECK_THROWS_AS(LabeledVolume({2, 2, 2}, {0, 1, 1}, {0, 0, 0}, ScalarType::U8), std::invalid_argument);
    LabeledVolume v({2, 2, 2}, {1, 1, 1}, {0, 0, 0}, ScalarType::U8);
    CHECK_THROWS_AS(v.set(0, 0, 0, 256), std::invalid_argument);
    CHECK(v.coord(v.index(1, 0, 1)) == Index3{1, 0, 1});
}

TEST_CASE("gen_spheres") {
    SUBCASE("sphere touching no grid point gives an all-zero volume") {
        // A real-valued center almost never lands on a grid point; radius 1e-9 then hits nothing.
        SphereSpec s{1, 1e-9, 1e-9, 1, 11};
        const LabeledVolume v = gen_spheres({8, 8, 8}, {1, 1, 1}, s);
        for (Label x : v.scalars()) CHECK(x == 0);
    }
    SUBCASE("deterministic") {
        SphereSpec s{6, 2.0, 6.0, 1, 99};
        CHECK(gen_spheres({20, 21, 22}, {1, 1, 1}, s) == gen_spheres({20, 21, 22}, {1, 1, 1}, s));
    }
    SUBCASE("frozen 64^3 histogram, 8 spheres, seed 42") {
        SphereSpec s{8, 4.0, 12.0, 1, 42};
        const auto h = label_histogram(gen_spheres({64, 64, 64}, {1, 1, 1}, s));
        const std::vector<std::pair<Label, std::uint64_t>> frozen{
            {0, 249012}, {2, 1413}, {3, 1417}, {4, 6489}, {5, 367}, {6, 461}, {7, 1792}, {8, 1193}};
        CHECK(h == frozen);
    }
    SUBCASE("bad specs") {
        CHECK_THROWS_AS(gen_spheres({4, 4, 4}, {1, 1, 1}, SphereSpec{0, 1, 2, 1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(gen_spheres({4, 4, 4}, {1, 1, 1}, SphereSpec{1, 3, 2, 1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(gen_spheres({4, 4, 4}, {1, 1, 1}, SphereSpec{2, 1, 2, 255, 0}, ScalarType::U8),
                        std::invalid_argument);
    }
}
