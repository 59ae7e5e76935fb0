#include <doctest.h>

#include <sstream>

#include "ordertypes/geometry.hpp"
#include "support.hpp"

using namespace ordertypes;
using testing::q;

namespace {

PointSet square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// Brute-force oracle: p is extreme iff it is not inside any triangle of the others.
bool extreme(const PointSet& pts, std::size_t i) {
  const auto n = pts.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (a == i || b == i || c == i) continue;
        const int s1 = orient(pts[a], pts[b], pts[i]);
        const int s2 = orient(pts[b], pts[c], pts[i]);
        const int s3 = orient(pts[c], pts[a], pts[i]);
        if (s1 == s2 && s2 == s3) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("orient on the unit triangle") {
  CHECK(orient({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient({0, 0}, {1, 1}, {2, 2}) == 0);
  CHECK(orient({0, 0}, {0, 1}, {1, 0}) == -1);
}

TEST_CASE("orient is exact near degeneracy") {
  // (1/3, 1/3) lies on y = x; a naive double evaluation of these can round to either side
  const Point p{q(0), q(0)}, r{q(1, 3), q(1, 3)};
  CHECK(orient(p, {q(1), q(1)}, r) == 0);
  const Point nudged{q(1, 3), q(1, 3) + ratio(1, Integer(1) << 200)};
  CHECK(orient(p, {q(1), q(1)}, nudged) == 1);
}

TEST_CASE("general position") {
  CHECK(general_position(square()));
  auto bad = square();
  bad.push_back({q(1, 2), q(0)});
  CHECK_FALSE(general_position(bad));
  CHECK(general_position(PointSet{}));
  CHECK_FALSE(general_position(PointSet{{0, 0}, {0, 0}}));
}

TEST_CASE("convex hull and position") {
  const PointSet tri{{0, 0}, {3, 0}, {0, 3}, {1, 1}};
  CHECK(convex_hull(tri).size() == 3);
  CHECK_FALSE(convex_position(tri));
  const PointSet pent{{0, 0}, {2, 0}, {3, 2}, {1, 3}, {-1, 2}};
  CHECK(convex_hull(pent).size() == 5);
  CHECK(convex_hull(PointSet{{5, 5}}) == PointSet{{5, 5}});
  const PointSet hex{{2, 0}, {1, 2}, {-1, 2}, {-2, 0}, {-1, -2}, {1, -2}};
  CHECK(convex_position(hex));
  CHECK(convex_position(PointSet{{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("peeling depth") {
  CHECK(peeling_depth(PointSet{}) == 0);
  CHECK(peeling_depth(PointSet{{0, 0}, {2, 0}, {3, 2}, {1, 3}, {-1, 2}}) == 1);
  const PointSet nested{{2, 2}, {-2, 2}, {-2, -2}, {2, -2}, {1, q(1, 10)}, {q(-1, 10), 1}, {-1, q(-1, 10)}, {q(1, 10), -1}};
  CHECK(peeling_depth(nested) == 2);
  CHECK(peeling_depth(PointSet{{0, 0}, {3, 0}, {0, 3}, {1, 1}}) == 2);
}

TEST_CASE("degenerate input is rejected by the hull") {
  CHECK_THROWS_AS(convex_hull(PointSet{{0, 0}, {1, 1}, {2, 2}, {0, 1}}), DegenerateConfiguration);
}

TEST_CASE("point set text round trip") {
  const PointSet pts{{q(1, 3), q(-2, 7)}, {q(5), q(0)}, {q(-1, 2), q(9, 4)}};
  std::stringstream s;
  write_point_set(s, pts);
  CHECK(s.str().rfind("OTPS v1 n=3\n", 0) == 0);
  CHECK(read_point_set(s) == pts);
}

TEST_CASE("property: orient is antisymmetric") {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto p = testing::random_point(rng, 8), r = testing::random_point(rng, 8), s = testing::random_point(rng, 8);
    const int o = orient(p, r, s);
    CHECK(orient(r, p, s) == -o);
    CHECK(orient(p, s, r) == -o);
    CHECK(orient(r, s, p) == o);
  }
}

TEST_CASE("property: direct affine maps preserve orientation, reflections flip it") {
  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    Rational a, b, c, d;
    do {
      a = testing::random_rational(rng, 9);
      b = testing::random_rational(rng, 9);
      c = testing::random_rational(rng, 9);
      d = testing::random_rational(rng, 9);
    } while (a * d - b * c == 0);
    const int det = sgn(a * d - b * c);
    const auto e = testing::random_rational(rng), f = testing::random_rational(rng);
    const auto map = [&](const Point& p) { return Point{a * p.x + b * p.y + e, c * p.x + d * p.y + f}; };
    const auto p = testing::random_point(rng), r = testing::random_point(rng), s = testing::random_point(rng);
    CHECK(orient(map(p), map(r), map(s)) == det * orient(p, r, s));
  }
}

TEST_CASE("property: hull against brute force, idempotence, convexity") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng.below(9));
    const auto pts = testing::random_general_set(rng, n, 20);
    const auto hull = convex_hull(pts);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) expected += extreme(pts, i);
    CHECK(hull.size() == expected);
    CHECK(convex_hull(hull) == hull);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& u = hull[i];
      const auto& v = hull[(i + 1) % hull.size()];
      for (const auto& p : pts) {
        if (!(p == u) && !(p == v)) CHECK(orient(u, v, p) == 1);
      }
    }
    CHECK(convex_position(pts) == (peeling_depth(pts) == 1));
  }
}
