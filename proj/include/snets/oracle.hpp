#pragma once

#include "snets/labels.hpp"
#include "snets/mesh.hpp"
#include "snets/volume.hpp"

namespace snets {

/// Reference surface net built the slow way: every voxel tests all twelve edges straight from the
/// scalars, points go through an associative voxel->id map, and stencils come from testing the
/// four edges of each voxel face. No triads, trims or passes. Single-threaded.
SurfaceNetMesh oracle_extract(const LabeledVolume& vol, const SelectedLabelSet& set);

} // namespace snets
