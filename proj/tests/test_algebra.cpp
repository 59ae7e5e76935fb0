#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "ordertypes/algebra.hpp"
#include "ordertypes/combinatorics.hpp"
#include "support.hpp"

using namespace ordertypes;
using testing::alg;
using testing::code;
using testing::db;
using testing::q;

namespace {

// Subset count straight from the witness points.
Rational oracle_density(const CanonicalCode& small, const CanonicalCode& big) {
  const auto& w = db().record(big).witness;
  long hits = 0, total = 0;
  for_each_subset(big.size, small.size, [&](const std::vector<int>& s) {
    PointSet sub;
    for (int i : s) sub.push_back(w[i]);
    hits += canonical_code(Chirotope::of(sub)) == small;
    ++total;
  });
  return ratio(hits, total);
}

Rational oracle_split(const CanonicalCode& a, const CanonicalCode& b, const CanonicalCode& big) {
  if (big.size != a.size + b.size) return 0;
  const auto& w = db().record(big).witness;
  long hits = 0, total = 0;
  for_each_subset(big.size, a.size, [&](const std::vector<int>& s) {
    PointSet first, second;
    for (int i = 0; i < big.size; ++i) (std::find(s.begin(), s.end(), i) != s.end() ? first : second).push_back(w[i]);
    hits += canonical_code(Chirotope::of(first)) == a && canonical_code(Chirotope::of(second)) == b;
    ++total;
  });
  return ratio(hits, total);
}

// Labeled occurrences of every flag, by trying all injections of the root on the witness.
std::map<FlagCode, long> oracle_embeddings(const Chirotope& root, const CanonicalCode& omega, long& injections) {
  const auto& w = db().record(omega).witness;
  const int k = root.size(), n = omega.size;
  std::map<FlagCode, long> out;
  injections = 0;
  // every ordered k-tuple of distinct points, via permutations of the first k positions of each subset
  for_each_subset(n, k, [&](const std::vector<int>& s) {
    auto labels = s;
    do {
      ++injections;
      PointSet pts;
      for (int i : labels) pts.push_back(w[i]);
      if (!(Chirotope::of(pts) == root)) continue;
      for (int i = 0; i < n; ++i) {
        if (std::find(labels.begin(), labels.end(), i) == labels.end()) pts.push_back(w[i]);
      }
      ++out[flag_code(Chirotope::of(pts), k)];
    } while (std::next_permutation(labels.begin(), labels.end()));
  });
  return out;
}

std::vector<CanonicalCode> codes(int n) {
  std::vector<CanonicalCode> out;
  for (const auto& r : db().records(n)) out.push_back(r.code);
  return out;
}

AlgebraElement random_element(Rng& rng, int level) {
  AlgebraElement e(level);
  for (const auto& c : codes(level)) {
    if (rng.coin()) e.add(c, testing::random_rational(rng, 5));
  }
  return e;
}

}  // namespace

TEST_CASE("densities of the worked examples") {
  CHECK(alg().density(code("convex-4"), code("convex-5")) == 1);
  CHECK(alg().density(code("convex-4"), code("hull4-size5")) == q(3, 5));
  CHECK(alg().density(code("convex-4"), code("hull3-size5")) == q(1, 5));
  CHECK_THROWS_AS(alg().density(code("convex-5"), code("convex-4")), SizeMismatch);
}

TEST_CASE("density tables agree with the witness oracle") {
  const int top = std::min(db().max_size(), 6);
  for (int m = 0; m <= top; ++m) {
    for (int k = 0; k <= m; ++k) {
      for (const auto& big : codes(m)) {
        for (const auto& small : codes(k)) CHECK(alg().density(small, big) == oracle_density(small, big));
      }
    }
  }
}

TEST_CASE("split probabilities") {
  CHECK(alg().split_probability(code("convex-4"), code("point"), code("convex-5")) == 1);
  CHECK(alg().split_probability(code("triangle-point"), code("point"), code("hull4-size5")) == q(2, 5));
  CHECK(alg().split_probability(code("convex-3"), code("convex-3"), code("convex-5")) == 0);
  for (const auto& big : codes(6)) {
    for (const auto& a : codes(3)) {
      for (const auto& b : codes(3)) CHECK(alg().split_probability(a, b, big) == oracle_split(a, b, big));
    }
    for (const auto& a : codes(4)) {
      for (const auto& b : codes(2)) CHECK(alg().split_probability(a, b, big) == oracle_split(a, b, big));
    }
  }
}

TEST_CASE("lift of the convex quadrilateral") {
  const auto l = alg().lift(AlgebraElement::of(code("convex-4")), 5);
  CHECK(l.terms().size() == 3);
  CHECK(l.coefficient(code("convex-5")) == 1);
  CHECK(l.coefficient(code("hull4-size5")) == q(3, 5));
  CHECK(l.coefficient(code("hull3-size5")) == q(1, 5));
}

TEST_CASE("lift of the point is the sum of all types") {
  for (int n = 1; n <= std::min(db().max_size(), 7); ++n) {
    const auto l = alg().lift(AlgebraElement::of(code("point")), n);
    CHECK(l.terms().size() == db().count(n));
    for (const auto& [f, v] : l.terms()) CHECK(v == 1);
  }
}

TEST_CASE("lift tower property") {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_element(rng, 4);
    CHECK(alg().lift(alg().lift(a, 5), 6) == alg().lift(a, 6));
  }
}

TEST_CASE("evaluation") {
  for (int n = 1; n <= db().max_size(); ++n) {
    CHECK(alg().evaluate(AlgebraElement::of(code("point")), db().records(n).back().code) == 1);
  }
  if (db().max_size() >= 8) {
    CHECK(alg().evaluate(AlgebraElement::of(code("convex-4")), code("convex-8")) == 1);
    const auto c4 = AlgebraElement::of(code("convex-4"));
    const auto lifted = alg().lift(c4, 5);
    for (const auto& r : db().records(8)) CHECK(alg().evaluate(lifted, r.code) == alg().evaluate(c4, r.code));
  }
}

TEST_CASE("normalization: densities at one size sum to one") {
  for (int m = 0; m <= std::min(db().max_size(), 7); ++m) {
    for (const auto& big : codes(m)) {
      for (int k = 0; k <= m; ++k) {
        Rational s = 0;
        for (const auto& small : codes(k)) s += alg().density(small, big);
        CHECK(s == 1);
      }
    }
  }
}

TEST_CASE("chain rule through every intermediate size") {
  const int top = std::min(db().max_size(), 7);
  for (int m = 0; m <= top; ++m) {
    for (const auto& big : codes(m)) {
      for (int j = 0; j <= std::min(m, 4); ++j) {
        for (const auto& small : codes(j)) {
          for (int k = j; k <= m; ++k) {
            Rational s = 0;
            for (const auto& mid : codes(k)) s += alg().density(small, mid) * alg().density(mid, big);
            CHECK(s == alg().density(small, big));
          }
        }
      }
    }
  }
}

TEST_CASE("products") {
  const auto pp = alg().product(AlgebraElement::of(code("point")), AlgebraElement::of(code("point")));
  CHECK(pp == AlgebraElement::of(code("edge")));

  const auto tp = alg().product(AlgebraElement::of(code("convex-3")), AlgebraElement::of(code("point")));
  Rational total = 0;
  for (const auto& c : codes(4)) {
    CHECK(tp.coefficient(c) == oracle_split(code("convex-3"), code("point"), c));
    total += tp.coefficient(c);
  }
  // both size-4 types split into a triangle and a point in every way, so the
  // product is the lift of the triangle: it evaluates to 1 everywhere
  CHECK(tp.coefficient(code("convex-4")) == 1);
  CHECK(tp.coefficient(code("triangle-point")) == 1);
  CHECK(total == 2);
  for (const auto& big : codes(6)) CHECK(alg().evaluate(tp, big) == 1);

  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_element(rng, 3), b = random_element(rng, 2), c = random_element(rng, 2);
    CHECK(alg().product(a, b + c) == alg().product(a, b) + alg().product(a, c));
    CHECK(alg().product(b, a) == alg().product(a, b));
  }
}

TEST_CASE("product-split proximity") {
  if (db().max_size() < 7) return;
  for (int s1 = 2; s1 <= 3; ++s1) {
    for (int s2 = 2; s2 <= 3; ++s2) {
      for (const auto& w1 : codes(s1)) {
        for (const auto& w2 : codes(s2)) {
          const auto prod = alg().product(AlgebraElement::of(w1), AlgebraElement::of(w2));
          for (const auto& big : codes(7)) {
            const Rational gap = alg().density(w1, big) * alg().density(w2, big) - alg().evaluate(prod, big);
            CHECK(abs(gap) <= q(s1 * s2, 7));
          }
        }
      }
    }
  }
}

TEST_CASE("flag counts of the edge root and the seven size-4 edge flags") {
  const auto edge = resolve_root(db(), "size-2");
  CHECK(alg().flags(edge, 3).size() == 2);
  const auto& four = alg().flags(edge, 4);
  CHECK(four.size() == 7);
  CHECK(alg().flags(edge, 5).size() == 44);
  const auto& three = alg().flags(edge, 3);
  for (const auto& small : three) {
    std::vector<Rational> values;
    for (const auto& big : four) values.push_back(alg().flag_density(small, big));
    std::sort(values.begin(), values.end());
    const std::vector<Rational> expected{0, 0, q(1, 2), q(1, 2), q(1, 2), 1, 1};
    CHECK(values == expected);
  }
}

TEST_CASE("flag densities and splits") {
  const auto edge = resolve_root(db(), "size-2");
  const auto& three = alg().flags(edge, 3);
  const auto& four = alg().flags(edge, 4);
  const auto root_only = alg().flags(edge, 2).front();
  for (const auto& f : four) {
    CHECK(alg().flag_density(f, f) == 1);
    CHECK(alg().flag_density(root_only, f) == 1);
    for (const auto& g : four) {
      if (!(g == f)) CHECK(alg().flag_density(g, f) == 0);
      CHECK(alg().flag_split_probability(root_only, g, f) == alg().flag_density(g, f));
    }
  }
  for (const auto& big : four) {
    for (const auto& a : three) {
      for (const auto& b : three) {
        CHECK(alg().flag_split_probability(a, b, big) == alg().flag_split_probability(b, a, big));
        CHECK(alg().flag_split_probability(a, b, alg().flags(edge, 5).front()) == 0);
      }
    }
  }
  const auto tri = resolve_root(db(), "convex-3");
  CHECK_THROWS_AS(alg().flag_density(alg().flags(tri, 4).front(), four.front()), RootMismatch);
}

TEST_CASE("averaging over the labeled triangle") {
  const auto tri = resolve_root(db(), "convex-3");
  const auto labeled = AlgebraElement::of(alg().flags(tri, 3).front());
  CHECK(alg().average(labeled) == AlgebraElement::of(code("convex-3"), q(1, 2)));
  for (const auto& f : alg().flags(tri, 4)) {
    const auto omega = canonical_code(flag_chirotope(f));
    const Rational expected = omega == code("convex-4") ? q(1, 6) : q(1, 8);
    CHECK(alg().average(AlgebraElement::of(f)) == AlgebraElement::of(omega, expected));
  }
}

TEST_CASE("embedding distributions against the injection oracle") {
  for (const char* root_name : {"size-1", "size-2", "convex-3"}) {
    const auto root = resolve_root(db(), root_name);
    for (int n = root.size(); n <= std::min(db().max_size(), 6); ++n) {
      for (const auto& omega : codes(n)) {
        long injections = 0;
        const auto expected = oracle_embeddings(root, omega, injections);
        const auto e = alg().embeddings(root, omega);
        CHECK(e.injections == injections);
        long admissible = 0;
        for (const auto& [f, m] : expected) admissible += m;
        CHECK(e.admissible == admissible);
        CHECK(e.flags.size() == expected.size());
        for (const auto& entry : e.flags) {
          CHECK(expected.count(entry.flag) == 1);
          if (expected.count(entry.flag)) CHECK(entry.multiplicity == expected.at(entry.flag));
          CHECK(alg().average(AlgebraElement::of(entry.flag)).coefficient(omega) == ratio(entry.multiplicity, injections));
        }
      }
    }
  }
  const auto point = resolve_root(db(), "size-1");
  const auto e = alg().embeddings(point, code("convex-5"));
  CHECK(e.injections == 5);
  CHECK(e.admissible == 5);
  const auto tri = resolve_root(db(), "convex-3");
  CHECK(alg().embeddings(tri, code("convex-3")).flags.size() == 1);
  CHECK(alg().embeddings(tri, code("convex-3")).admissible == 3);
}

TEST_CASE("lower bound from the quadrilateral lift holds on every size-7 evaluation") {
  if (db().max_size() < 7) return;
  const auto c4 = AlgebraElement::of(code("convex-4")), c5 = AlgebraElement::of(code("convex-5"));
  for (const auto& big : codes(7)) {
    CHECK(alg().evaluate(c5, big) >= q(5, 2) * alg().evaluate(c4, big) - q(3, 2));
  }
}

TEST_CASE("explicit limit vectors of the two-model mixture") {
  // half the convex-position limit plus half the two-circles limit, written at sizes 4 and 5
  LimitVector l4{4, {{code("triangle-point"), q(1, 32)}, {code("convex-4"), q(31, 32)}}};
  CHECK(alg().evaluate(AlgebraElement::of(code("triangle-point")), l4) *
            alg().evaluate(AlgebraElement::of(code("point")), l4) ==
        q(1, 32));
  LimitVector l5{5,
                 {{code("hull3-size5"), q(5, 128)}, {code("hull4-size5"), q(5, 128)}, {code("convex-5"), q(59, 64)}}};
  const auto prod = alg().product(AlgebraElement::of(code("triangle-point")), AlgebraElement::of(code("point")));
  CHECK(prod.coefficient(code("hull3-size5")) == q(4, 5));
  CHECK(prod.coefficient(code("hull4-size5")) == q(2, 5));
  CHECK(prod.coefficient(code("convex-5")) == 0);
  CHECK(alg().evaluate(prod, l5) == q(3, 64));
}

TEST_CASE("element JSON round trip and quotient equality") {
  Rng rng(13);
  const auto a = random_element(rng, 5);
  CHECK(AlgebraElement::from_json(a.to_json()) == a);
  const auto tri = resolve_root(db(), "convex-3");
  const auto rooted = AlgebraElement::of(alg().flags(tri, 4).front(), q(-7, 3));
  CHECK(AlgebraElement::from_json(rooted.to_json()) == rooted);
  const auto c4 = AlgebraElement::of(code("convex-4"));
  CHECK(alg().equivalent(c4, alg().lift(c4, 6)));
  CHECK_FALSE(alg().equivalent(c4, AlgebraElement::of(code("triangle-point"))));
}
