#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "skillbench/depth.hpp"
#include "skillbench/error.hpp"

using namespace skillbench;

TEST_CASE("render_depth examples") {
  const ColorLut& lut = colormap_lut();
  CHECK(render_depth(DepthMap(2, 2, {3.0, 3.0, 3.0, 3.0})) == Frame(2, 2, lut[0]));

  const Frame f = render_depth(DepthMap(2, 2, {1.0, 2.0, 3.0, 4.0}));
  CHECK(f.at(0, 0) == lut[0]);
  CHECK(f.at(1, 0) == lut[85]);
  CHECK(f.at(0, 1) == lut[170]);
  CHECK(f.at(1, 1) == lut[255]);

  CHECK(render_depth(DepthMap(2, 2, {2.0, 4.0, 6.0, 8.0})) == f);
}

TEST_CASE("non-finite depth names the pixel") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    render_depth(DepthMap(3, 2, {0.0, 1.0, 2.0, 3.0, nan, 5.0}));
    FAIL("expected a data error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::data);
    const std::string msg = e.what();
    CHECK(msg.find("4") != std::string::npos);
  }
  CHECK_THROWS_AS(render_depth(DepthMap(1, 1, {std::numeric_limits<double>::infinity()})), Error);
}

TEST_CASE("render_depth is monotone in depth") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(64);
    for (double& v : d) v = u(rng);
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    const double mn = *lo, mx = *hi;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[i] < d[j]) REQUIRE(colormap_index(d[i], mn, mx) <= colormap_index(d[j], mn, mx));
      }
    }
    // Index arithmetic against a direct evaluation.
    for (double v : d) {
      const int expect = static_cast<int>(std::floor((v - mn) / (mx - mn) * 255.0 + 0.5));
      REQUIRE(colormap_index(v, mn, mx) == expect);
    }
  }
}
