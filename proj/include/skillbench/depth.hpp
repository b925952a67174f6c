#pragma once

#include "skillbench/image.hpp"

namespace skillbench {

/// Colormapped rendering of a relative depth map. Closer (larger) values
/// land on brighter colormap entries. Throws Error(data) naming the first
/// non-finite pixel.
Frame render_depth(const DepthMap& depth);

}  // namespace skillbench
