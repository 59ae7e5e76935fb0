#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ordertypes/models.hpp"
#include "ordertypes/spherical.hpp"
#include "ordertypes/two_circles.hpp"
#include "support.hpp"

using namespace ordertypes;
using testing::code;
using testing::db;
using testing::q;

namespace {

// f(3) = 1/2, f(s) = s/(2^s - 2) f(s-1)
Rational cup_recursion(int s) {
  Rational f = q(1, 2);
  for (int i = 4; i <= s; ++i) f = f * i / ((Integer(1) << i) - 2);
  return f;
}

bool covers(const Estimate& e, const Rational& value) { return e.covers(value.get_d()); }

// Brute force: edge (h_i, h_{i+1}) counts if some other hull vertex c makes a
// closed triangle containing every non-hull point.
int oracle_covering(const PointSet& pts, const std::vector<int>& hull) {
  std::vector<int> inside;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (std::find(hull.begin(), hull.end(), i) == hull.end()) inside.push_back(i);
  }
  int count = 0;
  const int h = static_cast<int>(hull.size());
  for (int e = 0; e < h; ++e) {
    const auto& a = pts[hull[e]];
    const auto& b = pts[hull[(e + 1) % h]];
    bool found = false;
    for (int c = 0; c < h && !found; ++c) {
      if (c == e || c == (e + 1) % h) continue;
      const auto& C = pts[hull[c]];
      found = std::all_of(inside.begin(), inside.end(), [&](int i) {
        return orient(a, b, pts[i]) > 0 && orient(b, C, pts[i]) > 0 && orient(C, a, pts[i]) > 0;
      });
    }
    count += found;
  }
  return count;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Rng streams") {
  Rng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_stream |= x != c();
    differs_seed |= x != d();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0);
    CHECK(u < 1);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("Wilson interval") {
  const auto e = wilson(30, 100);
  const double z = 1.959963984540054, n = 100, p = 0.3;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  CHECK(e.mean == doctest::Approx(0.3));
  CHECK(e.lower == doctest::Approx(centre - half));
  CHECK(e.upper == doctest::Approx(centre + half));
  CHECK(wilson(0, 50).lower < 1e-12);
  CHECK(wilson(50, 50).upper == doctest::Approx(1));
  CHECK(wilson(500, 1000).half_width() < wilson(50, 100).half_width() / 3);
}

TEST_CASE("sampling basics") {
  Rng rng(1);
  CHECK(sample_points(TwoCircles{q(1, 2)}, 0, rng).empty());
  const TwoCircles tc{q(1, 100)};
  for (const auto& p : sample_points(tc, 50, rng)) {
    const Rational r2 = p.x * p.x + p.y * p.y;
    CHECK((r2 == 1 || r2 == q(1, 10000)));
  }
  for (const auto& p : sample_points(CantorRect{}, 50, rng)) {
    CHECK(p.x >= 0);
    CHECK(p.x <= 1);
    CHECK(p.y >= 0);
    CHECK(p.y <= 1);
  }
  for (const auto& model : {parse_model("two-circles"), parse_model("cantor:1/4,1/16"), parse_model("square")}) {
    for (int t = 0; t < 20; ++t) CHECK(general_position(sample_points(model, 12, rng)));
  }
  for (int t = 0; t < 20; ++t) CHECK(peeling_depth(sample_points(tc, 40, rng)) <= 2);
  CHECK_THROWS_AS(sample_points(TwoCirclesLimit{}, 3, rng), std::invalid_argument);
}

TEST_CASE("model names parse back") {
  for (const char* spec : {"two-circles:1/100:1/2", "two-circles-limit", "cantor:1/4,1/16", "polygon:5", "words:40"}) {
    CHECK(model_name(parse_model(model_name(parse_model(spec)))) == model_name(parse_model(spec)));
  }
  CHECK_THROWS(parse_model("cantor:1/4,1/4"));
  CHECK_THROWS(parse_model("nonsense"));
  CHECK(CantorRect{q(1, 4), q(1, 16)}.flat());
  CHECK_FALSE(CantorRect{q(1, 4), q(1, 8)}.flat());
}

TEST_CASE("chi_E") {
  CHECK(chi_E(parse_word("000"), parse_word("010"), parse_word("100")) == -1);
  CHECK(chi_E(parse_word("000"), parse_word("100"), parse_word("110")) == 1);
  CHECK_THROWS_AS(chi_E(parse_word("000"), parse_word("000"), parse_word("100")), PrefixCollision);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto w = sample_words(64, 3, rng);
    const int s = chi_E(w[0], w[1], w[2]);
    CHECK(chi_E(w[1], w[0], w[2]) == -s);
    CHECK(chi_E(w[0], w[2], w[1]) == -s);
    CHECK(chi_E(w[1], w[2], w[0]) == s);
  }
}

TEST_CASE("a random word triple is counter-clockwise half of the time") {
  const auto e = bernoulli_estimate(200000, 3, {}, [](Rng& rng) {
    const auto w = sample_words(64, 3, rng);
    return chi_E(w[0], w[1], w[2]) == 1;
  });
  CHECK(e.covers(0.5));
}

TEST_CASE("cup probabilities") {
  CHECK(exact_cup_probability(3) == q(1, 2));
  CHECK(exact_cup_probability(4) == q(1, 7));
  CHECK(exact_cup_probability(5) == q(1, 42));
  for (int s = 3; s <= 12; ++s) CHECK(exact_cup_probability(s) == cup_recursion(s));
  CHECK(covers(estimate_cup_probability(4, 200000, 4), q(1, 7)));
  CHECK(covers(estimate_cup_probability(5, 200000, 5), q(1, 42)));
}

TEST_CASE("estimates are reproducible and independent of the thread count") {
  MonteCarloOptions one, four;
  four.threads = 4;
  const auto a = estimate_density(TwoCirclesLimit{}, code("convex-4"), 100000, 77, one);
  const auto b = estimate_density(TwoCirclesLimit{}, code("convex-4"), 100000, 77, four);
  CHECK(a.successes == b.successes);
  CHECK(a.seed == 77);
  CHECK(a.trials == 100000);
  const auto c = estimate_density(TwoCirclesLimit{}, code("convex-4"), 100000, 78, one);
  CHECK(a.successes != c.successes);
}

TEST_CASE("two-circles limit: triangle with a point") {
  // by the number k of inner points among four: k=1 needs the outer triangle
  // around the centre (1/4); k=2 and k=3 each give the type with probability 1/2
  const Rational expected = q(4, 16) * q(1, 4) + q(6, 16) * q(1, 2) + q(4, 16) * q(1, 2);
  CHECK(expected == q(3, 8));
  CHECK(covers(estimate_density(TwoCirclesLimit{}, code("triangle-point"), 400000, 8), expected));
}

TEST_CASE("two-circles limit agrees with a small inner radius") {
  for (const char* name : {"triangle-point", "hull3-size5", "hull4-size5"}) {
    const auto w = code(name);
    const auto limit = estimate_density(TwoCirclesLimit{}, w, 40000, 9);
    const auto finite = estimate_density(TwoCircles{q(1, 1000)}, w, 40000, 10);
    CHECK(std::abs(limit.mean - finite.mean) <= limit.half_width() + finite.half_width());
  }
}

TEST_CASE("convex quadrilaterals in the square") {
  // (C(2k-2, k-1) / k!)^2 at k = 4
  CHECK(covers(estimate_density(parse_model("square"), code("convex-4"), 100000, 11), q(25, 36)));
}

TEST_CASE("kernel distance") {
  const auto square = parse_model("square");
  const Point x{q(1, 3), q(1, 4)}, y{q(2, 3), q(3, 5)};
  const auto same = kernel_distance_estimate(square, x, x, 20000, 12);
  CHECK(same.successes == 0);
  CHECK(same.mean == 0);
  const auto xy = kernel_distance_estimate(square, x, y, 100000, 13);
  const auto yx = kernel_distance_estimate(square, y, x, 100000, 13);
  CHECK(xy.successes == yx.successes);
  CHECK(xy.mean > 3 * xy.half_width());
}

TEST_CASE("Cantor rectangles against words") {
  const auto r = cantor_vs_words(q(1, 4), q(1, 16), code("convex-4"), 20000, 14);
  CHECK(r.agree);
  CHECK(r.cantor.trials == 20000);
  CHECK_THROWS_AS(cantor_vs_words(q(1, 4), q(1, 8), code("convex-4"), 100, 1), ConditionViolated);
  for (const auto& rec : db().records(6)) CHECK(mirror(mirror(rec.code)) == rec.code);
}

TEST_CASE("covering edges against brute force") {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const auto pts = sample_points(TwoCircles{q(1, 5)}, 12, rng);
    const auto hull = convex_hull_indices(pts);
    CHECK(covering_edges(pts, hull) == oracle_covering(pts, hull));
  }
}

TEST_CASE("two-circles experiment") {
  const auto outer_only = two_circles_experiment(200, q(1, 100), 3, 16, 0);
  for (const auto& tr : outer_only.trials) CHECK(tr.hull_fraction == 1);
  const auto a = two_circles_experiment(400, q(1, 100), 4, 17, q(1, 2), 1);
  const auto b = two_circles_experiment(400, q(1, 100), 4, 17, q(1, 2), 3);
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].hull == b.trials[i].hull);
    CHECK(a.trials[i].covering_edges == b.trials[i].covering_edges);
    CHECK(a.trials[i].hull_fraction > 0.3);
    CHECK(a.trials[i].hull_fraction < 0.7);
  }
}

TEST_CASE("rotations") {
  const auto r = cayley_rotation(q(1, 3), q(-2, 5), q(7, 2));
  CHECK(is_rotation(r));
  CHECK(det3(r) == 1);
  CHECK(is_rotation(identity3()));
  Rng rng(18);
  for (int t = 0; t < 50; ++t) CHECK(is_rotation(random_rotation(rng)));
}

TEST_CASE("spherical transforms") {
  const PointSet pts{{0, 0}, {2, 1}, {1, 3}, {-1, 1}, {q(1, 2), q(1, 3)}};
  CHECK(spherical_transform(pts, identity3()) == pts);
  const auto c = canonical_code(Chirotope::of(pts));
  const auto spun = spherical_transform(pts, z_rotation(q(1, 3)));
  CHECK(canonical_code(Chirotope::of(spun)) == c);
  // tilting by about 90 degrees sends (2, 1) below the equator
  CHECK_THROWS_AS(spherical_transform(pts, cayley_rotation(q(0), q(1), q(0))), HemisphereViolation);
  AffineMap flip;
  flip.a = -1;
  CHECK_THROWS_AS(spherical_transform(pts, identity3(), flip), std::invalid_argument);

  AffineMap g{2, 1, -1, 3, 5, -7};
  const auto moved = spherical_transform(pts, cayley_rotation(q(1, 10), q(-1, 8), q(3)), g);
  CHECK(canonical_code(Chirotope::of(moved)) == c);
}

TEST_CASE("compactification keeps the order type") {
  const PointSet far{{0, 1}, {1000, 2}, {-500, 3}, {7, 4000}, {3, q(3, 2)}};
  const auto c = canonical_code(Chirotope::of(far));
  const auto img = compactify(far, 0, 1, 0);  // line y = 0, all points above
  CHECK(canonical_code(Chirotope::of(img)) == c);
  // for y = 0 the map is (x, y) -> (-x/y, 1/y): the line goes to infinity
  REQUIRE(img.size() == far.size());
  for (std::size_t i = 0; i < far.size(); ++i) {
    CHECK(img[i].x == -far[i].x / far[i].y);
    CHECK(img[i].y == 1 / far[i].y);
  }
  CHECK_THROWS_AS(compactify(PointSet{{0, 1}, {0, -1}}, 0, 1, 0), HemisphereViolation);
}
