#pragma once

#include <array>
#include <span>
#include <string_view>

#include "snets/mesh.hpp"

namespace snets {

enum class ConstraintMode : std::uint8_t { Sphere, Box };

ConstraintMode parse_constraint_mode(std::string_view name);

struct SmoothingParams {
    int iterations = 25;
    double lambda = 0.5;  // relaxation factor in [0, 1]
    ConstraintMode constraint = ConstraintMode::Sphere;
    double constraint_factor = 1.0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Sphere mode radius: factor * half the smallest spacing (the inscribed sphere at factor 1).
double constraint_radius(const std::array<double, 3>& spacing, const SmoothingParams& params);

/// Pulls a candidate position back into the region around `anchor`.
///
/// Sphere mode projects radially onto the sphere; box mode clamps each axis to
/// anchor +- factor * spacing/2. The result is rounded to float and then nudged toward the anchor
/// one ulp at a time if rounding left it outside, so containment holds exactly for the stored
/// float coordinates.
Point3f constrain(const std::array<double, 3>& candidate, const Point3f& anchor,
                  const std::array<double, 3>& spacing, const SmoothingParams& params);

/// One Jacobi sweep: dst depends only on src. Points without stencil neighbors are copied.
void smooth_step(std::span<const Point3f> src, std::span<Point3f> dst, const SurfaceNetMesh& mesh,
                 const SmoothingParams& params, int threads = 0);

/// Runs `params.iterations` sweeps between two point buffers. Connectivity is untouched.
SurfaceNetMesh smooth(SurfaceNetMesh mesh, const SmoothingParams& params, int threads = 0);

} // namespace snets
