#pragma once

// Human-friendly names for order types and roots used by the CLI, the Python
// module and the tests.

#include <string>
#include <string_view>
#include <vector>

#include "ordertypes/store.hpp"

namespace ordertypes {

/// k points on the parabola y = x^2.
PointSet convex_polygon(int k);

/// Number of extreme points of the witness of `code`.
int hull_size(const OrderTypeStore& store, const CanonicalCode& code);

/// Accepts a canonical-code hex string or one of the aliases
///   point, edge, convex-<k>, triangle-point, hull<h>-size<n>
/// (the last only when exactly one stored type of size n has h extreme
/// points).  Throws UnknownCode otherwise.
CanonicalCode resolve_order_type(const OrderTypeStore& store, std::string_view name);

/// A root chirotope: "empty", "size-1", "size-2", or any order-type name,
/// which is labeled by its canonical labeling.
Chirotope resolve_root(const OrderTypeStore& store, std::string_view name);

/// Friendly name of a stored order type if it has one, else its hex code.
std::string describe(const OrderTypeStore& store, const CanonicalCode& code);

/// Root presets by level: "default" gives {empty} for N=5, {empty, size-2}
/// for N=6 and the 24-root layout (empty, size-2, both size-4 types, all
/// size-6 types) for N=8; "level8" always gives the 24-root layout; any other
/// value is a comma-separated list of root names.
std::vector<Chirotope> root_preset(const OrderTypeStore& store, std::string_view preset, int level);

}  // namespace ordertypes
