#include "ordertypes/aliases.hpp"

#include <charconv>

namespace ordertypes {

namespace {

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

CanonicalCode unique_with_hull(const OrderTypeStore& store, int h, int n, std::string_view name) {
  if (!store.has_size(n)) throw MissingSize(n);
  const CanonicalCode* found = nullptr;
  for (const auto& r : store.records(n)) {
    if (static_cast<int>(convex_hull_indices(r.witness).size()) != h) continue;
    if (found) throw UnknownCode("alias '" + std::string(name) + "' is ambiguous");
    found = &r.code;
  }
  if (!found) throw UnknownCode("no order type matches alias '" + std::string(name) + "'");
  return *found;
}

}  // namespace

PointSet convex_polygon(int k) {
  PointSet out;
  for (int i = 0; i < k; ++i) out.emplace_back(i, static_cast<long>(i) * i);
  return out;
}

int hull_size(const OrderTypeStore& store, const CanonicalCode& code) {
  return static_cast<int>(convex_hull_indices(store.record(code).witness).size());
}

CanonicalCode resolve_order_type(const OrderTypeStore& store, std::string_view name) {
  if (name == "point") return store.records(1).front().code;
  if (name == "edge") return store.records(2).front().code;
  if (name == "triangle-point") return unique_with_hull(store, 3, 4, name);
  if (name.rfind("convex-", 0) == 0) {
    int k;
    if (!parse_int(name.substr(7), k) || k < 0) throw UnknownCode("bad alias '" + std::string(name) + "'");
    auto code = canonical_code(Chirotope::of(convex_polygon(k)));
    if (!store.find(code)) throw MissingSize(k);
    return code;
  }
  if (name.rfind("hull", 0) == 0) {
    const auto dash = name.find("-size");
    int h, n;
    if (dash == std::string_view::npos || !parse_int(name.substr(4, dash - 4), h) || !parse_int(name.substr(dash + 5), n)) {
      throw UnknownCode("bad alias '" + std::string(name) + "'");
    }
    return unique_with_hull(store, h, n, name);
  }
  CanonicalCode code;
  try {
    code = CanonicalCode::from_hex(name);
  } catch (const std::invalid_argument&) {
    throw UnknownCode("'" + std::string(name) + "' is neither a code nor a known alias");
  }
  store.index_of(code);
  return code;
}

Chirotope resolve_root(const OrderTypeStore& store, std::string_view name) {
  if (name == "empty") return Chirotope::from_triples(0, {});
  if (name == "size-1") return Chirotope::from_triples(1, {});
  if (name == "size-2") return Chirotope::from_triples(2, {});
  const auto code = resolve_order_type(store, name);
  return chirotope_of_code(code.size, code.bytes);
}

std::string describe(const OrderTypeStore& store, const CanonicalCode& code) {
  if (code.size == 1) return "point";
  if (code.size == 2) return "edge";
  const int h = hull_size(store, code);
  if (h == code.size) return "convex-" + std::to_string(h);
  int same = 0;
  for (const auto& r : store.records(code.size)) {
    if (static_cast<int>(convex_hull_indices(r.witness).size()) == h) ++same;
  }
  if (same == 1) return code.size == 4 ? "triangle-point" : "hull" + std::to_string(h) + "-size" + std::to_string(code.size);
  return code.hex();
}

std::vector<Chirotope> root_preset(const OrderTypeStore& store, std::string_view preset, int level) {
  const auto level8 = [&] {
    std::vector<Chirotope> roots{resolve_root(store, "empty"), resolve_root(store, "size-2")};
    for (const auto& r : store.records(4)) roots.push_back(chirotope_of_code(4, r.code.bytes));
    for (const auto& r : store.records(6)) roots.push_back(chirotope_of_code(6, r.code.bytes));
    return roots;
  };
  if (preset == "default") {
    if (level == 8) return level8();
    if (level % 2 == 0) return {resolve_root(store, "empty"), resolve_root(store, "size-2")};
    return {resolve_root(store, "empty")};
  }
  if (preset == "level8") return level8();
  std::vector<Chirotope> roots;
  std::size_t pos = 0;
  while (pos <= preset.size()) {
    auto comma = preset.find(',', pos);
    if (comma == std::string_view::npos) comma = preset.size();
    roots.push_back(resolve_root(store, preset.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return roots;
}

}  // namespace ordertypes
