#include "skillbench/depth.hpp"

#include <cmath>
#include <string>

#include "skillbench/error.hpp"

namespace skillbench {

Frame render_depth(const DepthMap& depth) {
  const auto values = depth.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::data, "non-finite depth value at pixel " + std::to_string(i) + " (x=" +
                                       std::to_string(i % static_cast<std::size_t>(depth.width())) +
                                       ", y=" +
                                       std::to_string(i / static_cast<std::size_t>(depth.width())) +
                                       ")");
    }
  }
  return apply_colormap(depth);
}

}  // namespace skillbench
