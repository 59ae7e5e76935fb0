#pragma once

#include <cstdlib>
#include <filesystem>
#include <memory>

#include "ordertypes/aliases.hpp"
#include "ordertypes/algebra.hpp"
#include "ordertypes/rng.hpp"
#include "ordertypes/store.hpp"

namespace testing {

// The ctest fixture writes the database and points ORDERTYPES_DB at it.
// Run by hand without it, the tests build a size-6 store in memory.
inline const ordertypes::OrderTypeStore& db() {
  static const auto store = [] {
    const char* path = std::getenv("ORDERTYPES_DB");
    if (path && std::filesystem::exists(path)) return ordertypes::store_load(path);
    return ordertypes::enumerate_up_to(6);
  }();
  return store;
}

inline const ordertypes::FlagAlgebra& alg() {
  static const ordertypes::FlagAlgebra algebra(db());
  return algebra;
}

inline ordertypes::CanonicalCode code(const char* name) { return ordertypes::resolve_order_type(db(), name); }

inline ordertypes::Rational q(long p, long d = 1) { return ordertypes::ratio(p, d); }

// Small random rationals: numerator in [-range, range], denominator in [1, 16].
inline ordertypes::Rational random_rational(ordertypes::Rng& rng, long range = 64) {
  const long p = static_cast<long>(rng.below(2 * range + 1)) - range;
  const long d = static_cast<long>(rng.below(16)) + 1;
  return ordertypes::ratio(p, d);
}

inline ordertypes::Point random_point(ordertypes::Rng& rng, long range = 64) {
  return {random_rational(rng, range), random_rational(rng, range)};
}

inline ordertypes::PointSet random_general_set(ordertypes::Rng& rng, int n, long range = 64) {
  for (;;) {
    ordertypes::PointSet pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, range));
    if (ordertypes::general_position(pts)) return pts;
  }
}

}  // namespace testing
