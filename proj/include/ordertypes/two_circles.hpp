#pragma once

// Hull statistics of large samples from two concentric circles.

#include <cstdint>
#include <vector>

#include "ordertypes/geometry.hpp"

namespace ordertypes {

struct TwoCirclesTrial {
  int hull = 0;                // |C_N|
  double hull_fraction = 0;    // |C_N| / N
  int covering_edges = 0;      // hull edges ab with a hull vertex c such that abc contains every interior point
};

struct TwoCirclesReport {
  int n = 0;
  Rational t;
  std::uint64_t seed = 0;
  std::vector<TwoCirclesTrial> trials;

  int in_band(double lo, double hi) const;
  double median_covering() const;
  std::string to_json() const;
};

/// Hull edges of `hull` (indices into pts, counter-clockwise) that form,
/// with some third hull vertex, a triangle containing every non-hull point.
int covering_edges(const PointSet& pts, const std::vector<int>& hull);

/// t = 0 runs the t -> 0 regime: outer points on the unit circle, inner
/// points collapsed to the centre (a triangle covers them iff it contains
/// the origin).  inner_share = 0 puts every point on the outer circle.
TwoCirclesReport two_circles_experiment(int n, const Rational& t, int trials, std::uint64_t seed,
                                        const Rational& inner_share = Rational(1, 2), int threads = 1);

}  // namespace ordertypes
