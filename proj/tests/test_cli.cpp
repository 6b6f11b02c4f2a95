#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "snets/extract.hpp"
#include "snets/smooth.hpp"
#include "support.hpp"

using namespace snets;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(const fs::path& dir, const std::string& args) {
    const auto o = dir / "stdout.txt", e = dir / "stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" SNETS_CLI_PATH "' " + args + " >'" + o.string() +
                            "' 2>'" + e.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = test::slurp(o);
    r.err = test::slurp(e);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("cli: gen, info, pipeline on the 64^3 fixture") {
    const auto dir = test::scratch_dir("cli_pipe");
    REQUIRE(run(dir, "gen --dims 64x64x64 --spheres 8 --radius 4:12 --seed 42 --out v.hdr").code == 0);

    const Run info = run(dir, "info v.hdr");
    REQUIRE(info.code == 0);
    const std::vector<std::string> expect{
        "volume dims=64x64x64 spacing=1,1,1 origin=0,0,0 dtype=u16",
        "label 0 249012", "label 2 1413", "label 3 1417", "label 4 6489",
        "label 5 367", "label 6 461", "label 7 1792", "label 8 1193"};
    CHECK(lines(info.out) == expect);

    const Run p = run(dir, "pipeline v.hdr --out m.ply");
    CHECK(p.code == 0);
    CHECK(fs::file_size(dir / "m.ply") > 0);
    const auto l = lines(p.out);
    REQUIRE(!l.empty());
    CHECK(l[0].rfind("totals points=", 0) == 0);
    const auto ply = test::read_ply(dir / "m.ply");
    CHECK(ply.ok);
    CHECK(l[0].find("triangles=" + std::to_string(ply.faces.size())) != std::string::npos);
}

TEST_CASE("cli: gen is deterministic") {
    const auto dir = test::scratch_dir("cli_gen");
    REQUIRE(run(dir, "gen --dims 20x18x16 --spheres 5 --radius 2:6 --seed 9 --out a.hdr").code == 0);
    REQUIRE(run(dir, "gen --dims 20x18x16 --spheres 5 --radius 2:6 --seed 9 --out b.hdr").code == 0);
    CHECK(test::slurp(dir / "a.raw") == test::slurp(dir / "b.raw"));
}

TEST_CASE("cli: usage errors and empty selections") {
    const auto dir = test::scratch_dir("cli_err");
    REQUIRE(run(dir, "gen --dims 16x16x16 --spheres 3 --radius 2:5 --seed 1 --out v.hdr").code == 0);
    CHECK(run(dir, "pipeline v.hdr --labels 1-x --out m.ply").code == 2);
    CHECK(run(dir, "extract v.hdr --labels 3,,4 --out m.snet").code == 2);
    CHECK(run(dir, "pipeline v.hdr --lambda 2 --out m.ply").code == 2);
    CHECK(run(dir, "frobnicate").code == 2);
    CHECK(run(dir, "").code == 2);
    CHECK(run(dir, "--help").code == 0);
    CHECK(run(dir, "info missing.hdr").code == 1);

    const Run absent = run(dir, "pipeline v.hdr --labels 77 --out e.ply");
    CHECK(absent.code == 0);
    CHECK(absent.err.find("warning: empty mesh") != std::string::npos);
    CHECK(absent.out.find("totals points=0 quads=0 triangles=0") != std::string::npos);
    const auto ply = test::read_ply(dir / "e.ply");
    CHECK(ply.ok);
    CHECK(ply.declared_faces == 0);
}

TEST_CASE("cli: pipeline equals extract, smooth, triangulate through files") {
    const auto dir = test::scratch_dir("cli_compose");
    REQUIRE(run(dir, "gen --dims 40x36x32 --spheres 6 --radius 3:9 --seed 5 --out v.hdr").code == 0);
    const std::string opts = "--iterations 7 --lambda 0.6 --constraint box --factor 0.9";
    REQUIRE(run(dir, "pipeline v.hdr --labels 1-4 " + opts + " --strategy min_area --out p.ply").code == 0);
    REQUIRE(run(dir, "extract v.hdr --labels 1-4 --out a.snet").code == 0);
    REQUIRE(run(dir, "smooth a.snet " + opts + " --out b.snet").code == 0);
    REQUIRE(run(dir, "triangulate b.snet --strategy min_area --out c.ply").code == 0);
    CHECK(test::slurp(dir / "p.ply") == test::slurp(dir / "c.ply"));

    REQUIRE(run(dir, "pipeline v.hdr --labels 1-4 --out p.obj --threads 3").code == 0);
    REQUIRE(run(dir, "extract v.hdr --labels 1-4 --engine oracle --out o.snet").code == 0);
    REQUIRE(run(dir, "smooth o.snet --out o2.snet").code == 0);
    REQUIRE(run(dir, "triangulate o2.snet --out o.obj").code == 0);
    // The oracle assigns ids in the same scan order, so even the files agree.
    CHECK(test::slurp(dir / "p.obj") == test::slurp(dir / "o.obj"));
}

TEST_CASE("cli: bench report") {
    const auto dir = test::scratch_dir("cli_bench");
    REQUIRE(run(dir, "gen --dims 24x24x24 --spheres 4 --radius 3:7 --seed 2 --out v.hdr").code == 0);
    const Run b = run(dir, "bench v.hdr --threads 1,2,4 --repeat 3 --iterations 3 --out bench.csv");
    REQUIRE(b.code == 0);
    const auto rows = lines(test::slurp(dir / "bench.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rfind("threads,repeat,points,triangles,pass1_s", 0) == 0);
    CHECK(rows[1].rfind("1,3,", 0) == 0);
    CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "1.00");
    CHECK(run(dir, "bench v.hdr --threads 0 --repeat 1").code == 2);
}

TEST_CASE("smoothing from a cached surface net does not re-extract") {
    const auto dir = test::scratch_dir("cache");
    const auto vol = test::ball_volume(16, 5.0);
    write_snet(extract(vol, SelectedLabelSet(std::vector<Label>{1})), dir / "n.snet");
    const auto calls = extract_invocation_count();
    SmoothingParams a, b;
    a.lambda = 0.3;
    b.lambda = 0.8;
    const auto sa = smooth(read_snet(dir / "n.snet"), a);
    const auto sb = smooth(read_snet(dir / "n.snet"), b);
    CHECK(extract_invocation_count() == calls);
    CHECK(sa.points != sb.points);
    CHECK(sa.quads == sb.quads);
}
