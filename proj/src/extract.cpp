#include "snets/extract.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <new>

#include <tbb/combinable.h>

#include "parallel.hpp"
#include "snets/conventions.hpp"

namespace snets {

using detail::Workers;

TriadVolume::TriadVolume(const std::array<std::int64_t, 3>& dims)
    : dims_(dims), px_(dims[0] + 2), py_(dims[1] + 2),
      data_(static_cast<std::size_t>(px_ * py_ * (dims[2] + 2)), 0) {}

bool TriadVolume::padding_clear() const {
    const std::int64_t pz = dims_[2] + 2;
    for (std::int64_t z = 0; z < pz; ++z) {
        for (std::int64_t y = 0; y < py_; ++y) {
            const bool edge_row = z == 0 || z == pz - 1 || y == 0 || y == py_ - 1;
            const std::uint8_t* r = data_.data() + px_ * (y + py_ * z);
            if (edge_row) {
                if (std::any_of(r, r + px_, [](std::uint8_t b) { return b != 0; })) return false;
            } else if (r[0] != 0 || r[px_ - 1] != 0) {
                return false;
            }
        }
    }
    return true;
}

XEdgeMetadata::XEdgeMetadata(const std::array<std::int64_t, 3>& dims)
    : ny_(dims[1]), rows_(static_cast<std::size_t>((dims[1] + 2) * (dims[2] + 2))) {}

EdgeCase voxel_edge_case(const TriadVolume& t, std::int64_t i, std::int64_t j, std::int64_t k) {
    return edge_case({t.at(i, j, k), t.at(i + 1, j, k), t.at(i, j + 1, k), t.at(i + 1, j + 1, k),
                      t.at(i, j, k + 1), t.at(i + 1, j, k + 1), t.at(i, j + 1, k + 1)});
}

void RowIterator::init(int dj, int dk, const std::uint8_t* row_triads, std::int64_t start_x,
                       std::int64_t first_id) {
    cursors_[slot(dj, dk)] = Cursor{start_x, first_id, row_triads};
}

namespace {

std::atomic<std::uint64_t> g_extract_calls{0};

PassCounters& operator+=(PassCounters& a, const PassCounters& b) {
    a.rows_visited += b.rows_visited;
    a.elements_examined += b.elements_examined;
    a.outputs_emitted += b.outputs_emitted;
    return a;
}

PassCounters combine(tbb::combinable<PassCounters>& c) {
    PassCounters total;
    c.combine_each([&](const PassCounters& p) { total += p; });
    return total;
}

// Pass 2 reads INSIDE bits of neighbor rows while those rows receive their Y/Z bits, so triad
// bytes are accessed through relaxed atomics there. These are plain loads/stores on x86/ARM.
std::uint8_t load_relaxed(const std::uint8_t* p) {
    return std::atomic_ref<std::uint8_t>(*const_cast<std::uint8_t*>(p)).load(std::memory_order_relaxed);
}

void store_relaxed(std::uint8_t* p, std::uint8_t v) {
    std::atomic_ref<std::uint8_t>(*p).store(v, std::memory_order_relaxed);
}

Label classified(std::uint8_t triad_bits, Label scalar) {
    return (triad_bits & triad::kInside) ? scalar : kBackground;
}

struct Interval {
    std::int64_t lo, hi;
    bool empty() const { return lo >= hi; }
};

// Scan range for the edges between two rows a and b. Outside its Pass-1 trim each row is
// constant along x, so the first/last point comparison decides the untrimmed ends exactly.
Interval pair_scan_range(const EdgeMeta& ma, const EdgeMeta& mb, bool first_differs,
                         bool last_differs, std::int64_t m) {
    std::int64_t lo = m, hi = 0;
    for (const EdgeMeta* r : {&ma, &mb}) {
        if (r->trim_empty()) continue;
        lo = std::min<std::int64_t>(lo, r->x_left);
        hi = std::max<std::int64_t>(hi, r->x_right);
    }
    if (first_differs) lo = 0;
    if (last_differs) hi = m;
    return {lo, hi};
}

} // namespace

std::uint64_t extract_invocation_count() { return g_extract_calls.load(); }

std::pair<std::int64_t, std::int64_t> voxel_row_range(const XEdgeMetadata& meta,
                                                     const std::array<std::int64_t, 3>& dims,
                                                     std::int64_t j, std::int64_t k, bool trim) {
    const std::int64_t m = dims[0];
    if (!trim) return {0, m - 1};
    std::int64_t lo = m, hi = 0;
    for (std::int64_t dk = 0; dk < 2; ++dk) {
        for (std::int64_t dj = 0; dj < 2; ++dj) {
            const EdgeMeta& e = meta.at(j + dj, k + dk);
            if (e.trim_empty()) continue;
            lo = std::min<std::int64_t>(lo, e.x_left);
            hi = std::max<std::int64_t>(hi, e.x_right);
        }
    }
    // Voxel i reads y/z bits from triads at i+1 as well as i.
    lo = std::max<std::int64_t>(0, lo - 1);
    hi = std::min<std::int64_t>(hi, m - 1);
    if (lo >= hi) return {0, 0};
    return {lo, hi};
}

// ---------------------------------------------------------------------------------------------
// Pass 1: classify scalars, intersect x-edges, record initial trims.

void pass1_process_x_edges(const LabeledVolume& vol, const SelectedLabelSet& set, TriadVolume& triads,
                           XEdgeMetadata& meta, const ExtractOptions& opts, ExtractStats* stats) {
    const std::int64_t m = vol.nx(), n = vol.ny(), o = vol.nz();
    Workers workers(opts.threads);
    tbb::combinable<PassCounters> counters;

    workers.for_each(static_cast<std::size_t>(n * o), [&](std::size_t r) {
        const auto j = static_cast<std::int64_t>(r) % n;
        const auto k = static_cast<std::int64_t>(r) / n;
        const Label* s = vol.row(j, k);
        std::uint8_t* t = triads.row(j, k);
        LabelClassifier classify_scalar(set);

        Label prev = classify_scalar(s[0]);
        t[0] = prev != kBackground ? triad::kInside : 0;
        std::int64_t first = -1, last = -1, hits = 0;
        for (std::int64_t i = 1; i < m; ++i) {
            const Label cur = s[i] == s[i - 1] ? prev : classify_scalar(s[i]);
            t[i] = cur != kBackground ? triad::kInside : 0;
            if (edge_intersects(prev, cur)) {
                t[i - 1] |= triad::kXInt;
                if (first < 0) first = i - 1;
                last = i - 1;
                ++hits;
            }
            prev = cur;
        }
        EdgeMeta& e = meta.at(j, k);
        e.x_left = static_cast<std::int32_t>(first < 0 ? 0 : first);
        e.x_right = static_cast<std::int32_t>(first < 0 ? 0 : last + 1);
        auto& c = counters.local();
        c += PassCounters{1, static_cast<std::uint64_t>(m - 1), static_cast<std::uint64_t>(hits)};
    });
    if (stats) stats->passes[0] = combine(counters);
}

// ---------------------------------------------------------------------------------------------
// Pass 2: intersect y- and z-edges inside each row's scan range, then widen the trims.

void pass2_process_yz_edges(const LabeledVolume& vol, TriadVolume& triads, XEdgeMetadata& meta,
                            const ExtractOptions& opts, ExtractStats* stats) {
    const std::int64_t m = vol.nx(), n = vol.ny(), o = vol.nz();
    Workers workers(opts.threads);
    tbb::combinable<PassCounters> counters;
    const auto rows = static_cast<std::size_t>(n * o);
    // Neighbor rows read Pass-1 trims while this pass runs, so adjusted trims go here first.
    std::vector<Interval> adjusted(rows);
    if (stats) stats->pass2_row_work.assign(rows, 0);

    workers.for_each(rows, [&](std::size_t r) {
        const auto j = static_cast<std::int64_t>(r) % n;
        const auto k = static_cast<std::int64_t>(r) / n;
        const EdgeMeta& self = meta.at(j, k);
        Interval trim{self.x_left, self.x_right};
        const bool has_y = j + 1 < n;
        const bool has_z = k + 1 < o;

        std::uint8_t* t = triads.row(j, k);
        const Label* s = vol.row(j, k);
        const std::uint8_t* ty = has_y ? triads.row(j + 1, k) : nullptr;
        const std::uint8_t* tz = has_z ? triads.row(j, k + 1) : nullptr;
        const Label* sy = has_y ? vol.row(j + 1, k) : nullptr;
        const Label* sz = has_z ? vol.row(j, k + 1) : nullptr;

        auto differs = [&](std::int64_t i, const std::uint8_t* tp, const Label* sp) {
            return edge_intersects(classified(load_relaxed(t + i), s[i]), classified(load_relaxed(tp + i), sp[i]));
        };

        Interval scan{m, 0};
        auto add_pair = [&](const EdgeMeta& other, const std::uint8_t* tp, const Label* sp) {
            const Interval p = pair_scan_range(self, other, differs(0, tp, sp), differs(m - 1, tp, sp), m);
            if (p.empty()) return;
            scan.lo = std::min(scan.lo, p.lo);
            scan.hi = std::max(scan.hi, p.hi);
        };
        if (has_y) add_pair(meta.at(j + 1, k), ty, sy);
        if (has_z) add_pair(meta.at(j, k + 1), tz, sz);
        if (!opts.trim && (has_y || has_z)) scan = {0, m};

        std::int64_t first = -1, last = -1, hits = 0;
        for (std::int64_t i = scan.lo; i < scan.hi; ++i) {
            std::uint8_t bits = load_relaxed(t + i);
            const Label c0 = classified(bits, s[i]);
            std::uint8_t add = 0;
            if (has_y && edge_intersects(c0, classified(load_relaxed(ty + i), sy[i]))) add |= triad::kYInt;
            if (has_z && edge_intersects(c0, classified(load_relaxed(tz + i), sz[i]))) add |= triad::kZInt;
            if (add) {
                store_relaxed(t + i, bits | add);
                if (first < 0) first = i;
                last = i;
                hits += std::popcount(add);
            }
        }
        if (first >= 0) {
            if (trim.empty()) trim = {first, last + 1};
            trim.lo = std::min(trim.lo, first);
            trim.hi = std::max(trim.hi, last + 1);
        }
        adjusted[r] = trim;

        const auto work = static_cast<std::uint64_t>(std::max<std::int64_t>(0, scan.hi - scan.lo));
        if (stats) stats->pass2_row_work[r] = static_cast<std::uint32_t>(work);
        counters.local() += PassCounters{1, work, static_cast<std::uint64_t>(hits)};
    });

    workers.for_each(rows, [&](std::size_t r) {
        const auto j = static_cast<std::int64_t>(r) % n;
        const auto k = static_cast<std::int64_t>(r) / n;
        EdgeMeta& e = meta.at(j, k);
        e.x_left = static_cast<std::int32_t>(adjusted[r].lo);
        e.x_right = static_cast<std::int32_t>(adjusted[r].hi);
    }, 256);
    if (stats) stats->passes[1] = combine(counters);
}

// ---------------------------------------------------------------------------------------------
// Pass 3: edge cases, PRODUCE_POINT bits, per-row counts, prefix sum, allocation.

OutputPlan pass3_configure_output(const LabeledVolume& vol, TriadVolume& triads, XEdgeMetadata& meta,
                                  const ExtractOptions& opts, ExtractStats* stats) {
    const auto& dims = vol.dims();
    const std::int64_t n = dims[1], o = dims[2];
    const std::int64_t vn = n - 1, vo = o - 1;
    Workers workers(opts.threads);
    tbb::combinable<PassCounters> counters;

    OutputPlan plan;
    plan.row_counts.assign(static_cast<std::size_t>((n + 2) * (o + 2)), {0, 0, 0});

    auto process_row = [&](std::int64_t j, std::int64_t k) {
        EdgeMeta& e = meta.at(j, k);
        e.num_points = e.num_quads = e.num_stencil = 0;
        const auto [lo, hi] = voxel_row_range(meta, dims, j, k, opts.trim);
        std::uint8_t* t = triads.row(j, k);
        const std::uint8_t* ty = triads.row(j + 1, k);
        const std::uint8_t* tz = triads.row(j, k + 1);
        const std::uint8_t* tyz = triads.row(j + 1, k + 1);
        std::int64_t pts = 0, quads = 0, stencil = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            const EdgeCase ec = edge_case({t[i], t[i + 1], ty[i], ty[i + 1], tz[i], tz[i + 1], tyz[i]});
            if (ec == 0) continue;
            t[i] |= triad::kProducePoint;
            ++pts;
            for (int a = 0; a < 3; ++a) {
                if ((t[i] & (triad::kXInt << a)) && edge_is_interior(static_cast<Axis>(a), i, j, k, dims)) ++quads;
            }
            stencil += std::popcount(static_cast<unsigned>(face_case(ec) & existing_face_mask(i, j, k, dims)));
        }
        e.num_points = pts;
        e.num_quads = quads;
        e.num_stencil = stencil;
        plan.row_counts[meta.index(j, k)] = {pts, quads, stencil};
        counters.local() += PassCounters{1, static_cast<std::uint64_t>(hi - lo), static_cast<std::uint64_t>(pts)};
    };

    // 2x2 checkerboard: a row writes PRODUCE_POINT into grid row (j,k) and reads rows j..j+1,
    // k..k+1, so rows sharing (j mod 2, k mod 2) never touch each other's triads.
    for (int wave = 0; wave < 4; ++wave) {
        const std::int64_t pj = wave & 1, pk = wave >> 1;
        const std::int64_t cj = (vn - pj + 1) / 2, ck = (vo - pk + 1) / 2;
        if (cj <= 0 || ck <= 0) continue;
        workers.for_each(static_cast<std::size_t>(cj * ck), [&](std::size_t r) {
            const auto a = static_cast<std::int64_t>(r) % cj;
            const auto b = static_cast<std::int64_t>(r) / cj;
            process_row(pj + 2 * a, pk + 2 * b);
        });
    }

    // Serial exclusive prefix sum in row scan order (k outer, j inner).
    std::int64_t pts = 0, quads = 0, stencil = 0;
    for (std::int64_t k = 0; k < vo; ++k) {
        for (std::int64_t j = 0; j < vn; ++j) {
            EdgeMeta& e = meta.at(j, k);
            const std::int64_t np = e.num_points, nq = e.num_quads, ns = e.num_stencil;
            e.num_points = pts;
            e.num_quads = quads;
            e.num_stencil = stencil;
            pts += np;
            quads += nq;
            stencil += ns;
        }
    }
    plan.points = static_cast<std::uint64_t>(pts);
    plan.quads = static_cast<std::uint64_t>(quads);
    plan.stencil = static_cast<std::uint64_t>(stencil);
    if (stats) {
        stats->passes[2] = combine(counters);
        stats->planned_points = plan.points;
        stats->planned_quads = plan.quads;
        stats->planned_stencil = plan.stencil;
    }

    auto totals = [&] {
        return std::to_string(plan.points) + " points, " + std::to_string(plan.quads) + " quads, " +
               std::to_string(plan.stencil) + " stencil entries";
    };
    if (plan.points > opts.max_points) {
        throw OutputSizeError("output of " + totals() + " exceeds the point index limit of " +
                                  std::to_string(opts.max_points),
                              plan.points, plan.quads, plan.stencil);
    }
    try {
        SurfaceNetMesh& mesh = plan.mesh;
        mesh.spacing = vol.spacing();
        mesh.origin = vol.origin();
        mesh.points.resize(plan.points);
        mesh.anchors.resize(plan.points);
        mesh.quads.resize(plan.quads);
        mesh.tuples.resize(plan.quads);
        mesh.stencil_offsets.resize(plan.points + 1);
        mesh.stencil.resize(plan.stencil);
    } catch (const std::bad_alloc&) {
        throw OutputSizeError("cannot allocate output of " + totals(), plan.points, plan.quads, plan.stencil);
    } catch (const std::length_error&) {
        throw OutputSizeError("cannot allocate output of " + totals(), plan.points, plan.quads, plan.stencil);
    }
    return plan;
}

// ---------------------------------------------------------------------------------------------
// Pass 4: write points, quads, tuples and stencils into the planned ranges.

void pass4_generate_output(const LabeledVolume& vol, const TriadVolume& triads, const XEdgeMetadata& meta,
                           OutputPlan& plan, const ExtractOptions& opts, ExtractStats* stats) {
    const auto& dims = vol.dims();
    const std::int64_t n = dims[1], o = dims[2];
    const std::int64_t vn = n - 1, vo = o - 1;
    Workers workers(opts.threads);
    tbb::combinable<PassCounters> counters;
    tbb::combinable<std::array<std::uint64_t, 4>> emitted([] { return std::array<std::uint64_t, 4>{}; });
    SurfaceNetMesh& mesh = plan.mesh;

    // Neighbor face order that yields ascending point ids: -z, -y, -x, +x, +y, +z.
    static constexpr std::array<int, 6> kFaceOrder{4, 2, 0, 1, 3, 5};

    workers.for_each(static_cast<std::size_t>(vn * vo), [&](std::size_t r) {
        const auto j = static_cast<std::int64_t>(r) % vn;
        const auto k = static_cast<std::int64_t>(r) / vn;
        const auto [lo, hi] = voxel_row_range(meta, dims, j, k, opts.trim);
        const EdgeMeta& e = meta.at(j, k);

        RowIterator it;
        for (int dk = -1; dk <= 1; ++dk) {
            for (int dj = -1; dj <= 1; ++dj) {
                const std::int64_t jj = j + dj, kk = k + dk;
                if (jj < 0 || jj >= vn || kk < 0 || kk >= vo) continue;
                const auto start = dj == 0 && dk == 0 ? lo : voxel_row_range(meta, dims, jj, kk, opts.trim).first;
                it.init(dj, dk, triads.row(jj, kk), start, meta.at(jj, kk).num_points);
            }
        }

        const std::uint8_t* t = triads.row(j, k);
        const std::uint8_t* ty = triads.row(j + 1, k);
        const std::uint8_t* tz = triads.row(j, k + 1);
        const std::uint8_t* tyz = triads.row(j + 1, k + 1);
        const Label* s = vol.row(j, k);
        const Label* sy = j + 1 < n ? vol.row(j + 1, k) : nullptr;
        const Label* sz = k + 1 < o ? vol.row(j, k + 1) : nullptr;

        std::int64_t q = e.num_quads;
        std::int64_t st = e.num_stencil;
        std::int64_t pts = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            if (!(t[i] & triad::kProducePoint)) continue;
            it.advance(i);
            const PointId pid = it.id(0, 0);
            ++pts;
            const Point3f center = voxel_center_f(vol, i, j, k);
            mesh.points[pid] = center;
            mesh.anchors[pid] = center;

            const Label c0 = classified(t[i], s[i]);
            for (int a = 0; a < 3; ++a) {
                const auto axis = static_cast<Axis>(a);
                if (!(t[i] & (triad::kXInt << a)) || !edge_is_interior(axis, i, j, k, dims)) continue;
                Quad quad;
                for (int c = 0; c < 4; ++c) {
                    const auto& off = kQuadVoxelOffsets[a][c];
                    quad[c] = it.id(off[1], off[2]) + static_cast<PointId>(static_cast<std::int32_t>(off[0]));
                }
                Label c1 = kBackground;
                switch (axis) {
                case Axis::X: c1 = classified(t[i + 1], s[i + 1]); break;
                case Axis::Y: c1 = classified(ty[i], sy[i]); break;
                case Axis::Z: c1 = classified(tz[i], sz[i]); break;
                }
                mesh.quads[static_cast<std::size_t>(q)] = quad;
                mesh.tuples[static_cast<std::size_t>(q)] = {c0, c1};
                ++q;
            }

            const EdgeCase ec = edge_case({t[i], t[i + 1], ty[i], ty[i + 1], tz[i], tz[i + 1], tyz[i]});
            const FaceCase faces = face_case(ec) & existing_face_mask(i, j, k, dims);
            mesh.stencil_offsets[pid] = static_cast<std::uint64_t>(st);
            for (int f : kFaceOrder) {
                if (!(faces & (1u << f))) continue;
                PointId nb = 0;
                switch (f) {
                case 0: nb = pid - 1; break;
                case 1: nb = pid + 1; break;
                case 2: nb = it.id(-1, 0); break;
                case 3: nb = it.id(1, 0); break;
                case 4: nb = it.id(0, -1); break;
                case 5: nb = it.id(0, 1); break;
                }
                mesh.stencil[static_cast<std::size_t>(st++)] = nb;
            }
        }

        const auto& planned = plan.row_counts[meta.index(j, k)];
        const std::int64_t nq = q - e.num_quads, ns = st - e.num_stencil;
        auto& em = emitted.local();
        em[0] += static_cast<std::uint64_t>(pts);
        em[1] += static_cast<std::uint64_t>(nq);
        em[2] += static_cast<std::uint64_t>(ns);
        if (pts != planned[0] || nq != planned[1] || ns != planned[2]) ++em[3];
        counters.local() += PassCounters{1, static_cast<std::uint64_t>(hi - lo), static_cast<std::uint64_t>(pts)};
    });
    mesh.stencil_offsets[plan.points] = plan.stencil;

    if (stats) {
        stats->passes[3] = combine(counters);
        std::array<std::uint64_t, 4> total{};
        emitted.combine_each([&](const auto& a) {
            for (int c = 0; c < 4; ++c) total[c] += a[c];
        });
        stats->emitted_points = total[0];
        stats->emitted_quads = total[1];
        stats->emitted_stencil = total[2];
        stats->plan_mismatch_rows = total[3];
    }
}

SurfaceNetMesh extract(const LabeledVolume& vol, const SelectedLabelSet& set, const ExtractOptions& opts,
                       ExtractStats* stats) {
    ++g_extract_calls;
    using Clock = std::chrono::steady_clock;
    auto seconds_since = [](Clock::time_point t0) {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };

    TriadVolume triads(vol.dims());
    XEdgeMetadata meta(vol.dims());

    auto t0 = Clock::now();
    pass1_process_x_edges(vol, set, triads, meta, opts, stats);
    if (stats) stats->seconds[0] = seconds_since(t0);

    t0 = Clock::now();
    pass2_process_yz_edges(vol, triads, meta, opts, stats);
    if (stats) stats->seconds[1] = seconds_since(t0);

    t0 = Clock::now();
    OutputPlan plan = pass3_configure_output(vol, triads, meta, opts, stats);
    if (stats) stats->seconds[2] = seconds_since(t0);

    t0 = Clock::now();
    pass4_generate_output(vol, triads, meta, plan, opts, stats);
    if (stats) stats->seconds[3] = seconds_since(t0);

    return std::move(plan.mesh);
}

} // namespace snets
