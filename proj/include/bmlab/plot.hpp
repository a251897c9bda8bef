#pragma once

#include <array>
#include <string>
#include <vector>

#include "bmlab/voxel.hpp"

namespace bmlab {

struct SvgLayer {
  const VoxelSet* set = nullptr;  // 2-D
  std::string fill;
  double opacity = 0.5;
  std::string label;
};

/// Planar picture in world coordinates: each layer's cells (horizontal runs
/// merged), then an optional closed outline, then a legend.
std::string overlay_svg(const std::vector<SvgLayer>& layers,
                        const std::vector<std::array<Rational, 2>>& outline, const std::string& title);

/// Cells whose `axis` range [lo, hi) contains `at`, as a set one dimension lower.
VoxelSet axis_slice(const VoxelSet& a, std::size_t axis, const Rational& at);

}  // namespace bmlab
