#include "snets/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace snets {

PipelineResult run_pipeline(const LabeledVolume& vol, const SelectedLabelSet& set, const PipelineOptions& opts) {
    using Clock = std::chrono::steady_clock;
    PipelineResult out;
    ExtractStats stats;
    ExtractOptions eo;
    eo.threads = opts.threads;
    SurfaceNetMesh net = extract(vol, set, eo, &stats);
    out.times.pass = stats.seconds;

    auto t0 = Clock::now();
    out.net = smooth(std::move(net), opts.smoothing, opts.threads);
    out.times.smooth = std::chrono::duration<double>(Clock::now() - t0).count();

    t0 = Clock::now();
    out.triangles = triangulate(out.net, opts.strategy, opts.threads);
    out.times.triangulate = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

BenchReport run_bench(const LabeledVolume& vol, const SelectedLabelSet& set, const BenchOptions& opts) {
    if (opts.threads.empty()) throw std::invalid_argument("bench needs at least one thread count");
    if (opts.repeat < 1) throw std::invalid_argument("bench repeat must be >= 1");
    BenchReport report;
    for (int threads : opts.threads) {
        if (threads < 1) throw std::invalid_argument("thread counts must be >= 1");
        PipelineOptions po{threads, opts.smoothing, opts.strategy};
        PipelineResult warm = run_pipeline(vol, set, po);

        BenchRow row;
        row.threads = threads;
        row.repeat = opts.repeat;
        row.points = warm.net.num_points();
        row.triangles = warm.triangles.triangles.size();
        for (int r = 0; r < opts.repeat; ++r) {
            const StageTimes t = run_pipeline(vol, set, po).times;
            for (int p = 0; p < 4; ++p) row.mean.pass[p] += t.pass[p];
            row.mean.smooth += t.smooth;
            row.mean.triangulate += t.triangulate;
        }
        for (double& p : row.mean.pass) p /= opts.repeat;
        row.mean.smooth /= opts.repeat;
        row.mean.triangulate /= opts.repeat;

        const double total = row.mean.total();
        const std::array<double, 6> parts{row.mean.pass[0], row.mean.pass[1], row.mean.pass[2],
                                          row.mean.pass[3], row.mean.smooth, row.mean.triangulate};
        for (int s = 0; s < 6; ++s) row.percent[s] = total > 0.0 ? 100.0 * parts[s] / total : 0.0;
        report.rows.push_back(row);
    }

    const BenchRow* base = &report.rows.front();
    for (const auto& row : report.rows) {
        if (row.threads == 1) {
            base = &row;
            break;
        }
    }
    const double base_total = base->mean.total();
    for (auto& row : report.rows) {
        const double t = row.mean.total();
        row.speedup = t > 0.0 ? base_total / t : 1.0;
    }
    return report;
}

void write_bench_csv(const BenchReport& report, std::ostream& os) {
    os << "threads,repeat,points,triangles,pass1_s,pass2_s,pass3_s,pass4_s,smooth_s,triangulate_s,total_s,"
          "pass1_pct,pass2_pct,pass3_pct,pass4_pct,smooth_pct,triangulate_pct,speedup\n";
    char buf[64];
    auto num = [&](double v, const char* fmt) {
        std::snprintf(buf, sizeof buf, fmt, v);
        return std::string(buf);
    };
    for (const auto& r : report.rows) {
        os << r.threads << ',' << r.repeat << ',' << r.points << ',' << r.triangles;
        for (double t : r.mean.pass) os << ',' << num(t, "%.6f");
        os << ',' << num(r.mean.smooth, "%.6f") << ',' << num(r.mean.triangulate, "%.6f") << ','
           << num(r.mean.total(), "%.6f");
        for (double p : r.percent) os << ',' << num(p, "%.2f");
        os << ',' << num(r.speedup, "%.2f") << '\n';
    }
}

} // namespace snets
