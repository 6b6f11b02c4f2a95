#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "snets/extract.hpp"
#include "snets/smooth.hpp"
#include "snets/triangulate.hpp"

namespace snets {

/// Wall times (seconds, monotonic clock) of one extract -> smooth -> triangulate run.
struct StageTimes {
    std::array<double, 4> pass{};
    double smooth = 0.0;
    double triangulate = 0.0;

    double total() const { return pass[0] + pass[1] + pass[2] + pass[3] + smooth + triangulate; }
};

struct PipelineOptions {
    int threads = 0;
    SmoothingParams smoothing;
    TriangulationStrategy strategy = TriangulationStrategy::ShortestDiagonal;
};

struct PipelineResult {
    SurfaceNetMesh net;  // smoothed
    TriangleMesh triangles;
    StageTimes times;
};

/// Full chain on in-memory data; no I/O inside the timed region.
PipelineResult run_pipeline(const LabeledVolume& vol, const SelectedLabelSet& set, const PipelineOptions& opts);

struct BenchOptions {
    std::vector<int> threads{1};
    int repeat = 10;
    SmoothingParams smoothing;
    TriangulationStrategy strategy = TriangulationStrategy::ShortestDiagonal;
};

struct BenchRow {
    int threads = 1;
    int repeat = 0;
    std::uint64_t points = 0;
    std::uint64_t triangles = 0;
    StageTimes mean;
    /// pass1..pass4, smooth, triangulate as percentages of mean.total().
    std::array<double, 6> percent{};
    /// Mean total of the baseline row over this row's mean total.
    double speedup = 1.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

/// For each thread count: one untimed warm-up run, then `repeat` timed runs averaged.
/// The baseline for speedup is the 1-thread row when present, otherwise the first row.
BenchReport run_bench(const LabeledVolume& vol, const SelectedLabelSet& set, const BenchOptions& opts);

void write_bench_csv(const BenchReport& report, std::ostream& os);

} // namespace snets
