#include "snets/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace snets {

ConstraintMode parse_constraint_mode(std::string_view name) {
    if (name == "sphere") return ConstraintMode::Sphere;
    if (name == "box") return ConstraintMode::Box;
    throw std::invalid_argument("unknown constraint mode '" + std::string(name) + "' (sphere|box)");
}

void SmoothingParams::validate() const {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    if (!(constraint_factor >= 0.0) || !std::isfinite(constraint_factor)) {
        throw std::invalid_argument("constraint factor must be >= 0");
    }
}

double constraint_radius(const std::array<double, 3>& spacing, const SmoothingParams& params) {
    return params.constraint_factor * 0.5 * std::min({spacing[0], spacing[1], spacing[2]});
}

namespace {

double distance(const Point3f& p, const Point3f& a) {
    const double dx = static_cast<double>(p[0]) - a[0];
    const double dy = static_cast<double>(p[1]) - a[1];
    const double dz = static_cast<double>(p[2]) - a[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

Point3f constrain(const std::array<double, 3>& candidate, const Point3f& anchor,
                  const std::array<double, 3>& spacing, const SmoothingParams& params) {
    Point3f out;
    if (params.constraint == ConstraintMode::Sphere) {
        const double r = constraint_radius(spacing, params);
        std::array<double, 3> d{candidate[0] - anchor[0], candidate[1] - anchor[1], candidate[2] - anchor[2]};
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        std::array<double, 3> c = candidate;
        if (len > r) {
            const double scale = r / len;
            for (int a = 0; a < 3; ++a) c[a] = anchor[a] + d[a] * scale;
        }
        for (int a = 0; a < 3; ++a) out[a] = static_cast<float>(c[a]);
        while (distance(out, anchor) > r) {
            for (int a = 0; a < 3; ++a) out[a] = std::nextafter(out[a], anchor[a]);
        }
    } else {
        for (int a = 0; a < 3; ++a) {
            const double h = params.constraint_factor * 0.5 * spacing[a];
            const double c = std::clamp(candidate[a], anchor[a] - h, anchor[a] + h);
            out[a] = static_cast<float>(c);
            while (std::abs(static_cast<double>(out[a]) - anchor[a]) > h) {
                out[a] = std::nextafter(out[a], anchor[a]);
            }
        }
    }
    return out;
}

void smooth_step(std::span<const Point3f> src, std::span<Point3f> dst, const SurfaceNetMesh& mesh,
                 const SmoothingParams& params, int threads) {
    // Sized off anchors: smooth() moves the point buffer out of `mesh` while it iterates.
    const std::size_t n = mesh.anchors.size();
    if (src.size() != n || dst.size() != n || mesh.stencil_offsets.size() != n + 1) {
        throw std::invalid_argument("smoothing buffers must match the mesh point count");
    }
    detail::Workers workers(threads);
    workers.for_each(src.size(), [&](std::size_t p) {
        const auto begin = mesh.stencil_offsets[p];
        const auto end = mesh.stencil_offsets[p + 1];
        const Point3f& here = src[p];
        if (begin == end) {
            dst[p] = here;
            return;
        }
        std::array<double, 3> sum{0.0, 0.0, 0.0};
        for (auto s = begin; s < end; ++s) {
            const Point3f& nb = src[mesh.stencil[s]];
            for (int a = 0; a < 3; ++a) sum[a] += static_cast<double>(nb[a]) - static_cast<double>(here[a]);
        }
        const auto count = static_cast<double>(end - begin);
        std::array<double, 3> candidate;
        for (int a = 0; a < 3; ++a) candidate[a] = static_cast<double>(here[a]) + params.lambda * (sum[a] / count);
        dst[p] = constrain(candidate, mesh.anchors[p], mesh.spacing, params);
    }, 1024);
}

SurfaceNetMesh smooth(SurfaceNetMesh mesh, const SmoothingParams& params, int threads) {
    params.validate();
    if (params.iterations == 0 || mesh.points.empty()) return mesh;
    std::vector<Point3f> front = std::move(mesh.points);
    std::vector<Point3f> back(front.size());
    for (int it = 0; it < params.iterations; ++it) {
        smooth_step(front, back, mesh, params, threads);
        front.swap(back);
    }
    mesh.points = std::move(front);
    return mesh;
}

} // namespace snets
