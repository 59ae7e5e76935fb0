#include "ordertypes/chirotope.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ordertypes {

Chirotope::Chirotope(int n) : n_(n), table_(static_cast<std::size_t>(n) * n * n, 0) {}

void Chirotope::set(int i, int j, int k, int sign) {
  const auto at = [&](int a, int b, int c) -> std::int8_t& {
    return table_[static_cast<std::size_t>((a * n_ + b) * n_ + c)];
  };
  const auto s = static_cast<std::int8_t>(sign);
  at(i, j, k) = s;
  at(j, k, i) = s;
  at(k, i, j) = s;
  at(j, i, k) = static_cast<std::int8_t>(-s);
  at(i, k, j) = static_cast<std::int8_t>(-s);
  at(k, j, i) = static_cast<std::int8_t>(-s);
}

Chirotope Chirotope::of(std::span<const Point> points) {
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (points[i] == points[j]) throw DegenerateConfiguration("repeated point");
    }
  }
  Chirotope chi(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int s = orient(points[i], points[j], points[k]);
        if (s == 0) throw DegenerateConfiguration("aligned triple");
        chi.set(i, j, k, s);
      }
    }
  }
  return chi;
}

Chirotope Chirotope::from_triples(int n, std::span<const int> signs) {
  if (static_cast<std::int64_t>(signs.size()) != binomial(n, 3)) {
    throw std::invalid_argument("sign count does not match chirotope size");
  }
  Chirotope chi(n);
  std::size_t t = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int s = signs[t++];
        if (s != 1 && s != -1) throw std::invalid_argument("chirotope signs must be +1 or -1");
        chi.set(i, j, k, s);
      }
    }
  }
  return chi;
}

Chirotope Chirotope::from_sign_string(std::string_view signs) {
  int n = 0;
  while (binomial(n, 3) < static_cast<std::int64_t>(signs.size())) ++n;
  if (binomial(n, 3) != static_cast<std::int64_t>(signs.size())) {
    throw std::invalid_argument("sign string length is not a binomial C(n,3)");
  }
  if (signs.empty()) {
    throw std::invalid_argument("empty sign string is ambiguous; give the size explicitly");
  }
  std::vector<int> values;
  for (char c : signs) {
    if (c == '+') values.push_back(1);
    else if (c == '-') values.push_back(-1);
    else throw std::invalid_argument("sign string may only contain '+' and '-'");
  }
  return from_triples(n, values);
}

Chirotope Chirotope::restrict(std::span<const int> indices) const {
  const int m = static_cast<int>(indices.size());
  Chirotope sub(m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      for (int c = b + 1; c < m; ++c) {
        sub.set(a, b, c, (*this)(indices[a], indices[b], indices[c]));
      }
    }
  }
  return sub;
}

std::string Chirotope::sign_string() const {
  std::string out;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      for (int k = j + 1; k < n_; ++k) out.push_back((*this)(i, j, k) > 0 ? '+' : '-');
    }
  }
  return out;
}

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

void append_hex_byte(std::string& out, unsigned v) {
  out.push_back(kHexDigits[(v >> 4) & 0xF]);
  out.push_back(kHexDigits[v & 0xF]);
}

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex code must have an even length");
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
  };
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

std::size_t packed_length(int n) { return static_cast<std::size_t>((binomial(n, 3) + 7) / 8); }

// Running lexicographic minimum of sign bit strings over candidate orders.
class MinimumTracker {
 public:
  explicit MinimumTracker(int n) : n_(n), best_(static_cast<std::size_t>(binomial(n, 3))), scratch_(best_.size()) {}

  void consider(const std::vector<int>& order, const Chirotope& chi) {
    if (!have_) {
      std::size_t t = 0;
      for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
          for (int c = b + 1; c < n_; ++c) best_[t++] = chi(order[a], order[b], order[c]) > 0;
      best_order_ = order;
      have_ = true;
      return;
    }
    bool smaller = false;
    std::size_t t = 0;
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        for (int c = b + 1; c < n_; ++c) {
          const std::uint8_t bit = chi(order[a], order[b], order[c]) > 0;
          if (!smaller) {
            if (bit > best_[t]) return;
            if (bit < best_[t]) smaller = true;
          }
          scratch_[t++] = bit;
        }
      }
    }
    if (!smaller) return;
    best_.swap(scratch_);
    best_order_ = order;
  }

  std::vector<std::uint8_t> packed() const {
    std::vector<std::uint8_t> out(packed_length(n_), 0);
    for (std::size_t t = 0; t < best_.size(); ++t) {
      if (best_[t]) out[t / 8] |= static_cast<std::uint8_t>(0x80u >> (t % 8));
    }
    return out;
  }

  const std::vector<int>& order() const { return best_order_; }

 private:
  int n_;
  bool have_ = false;
  std::vector<std::uint8_t> best_;
  std::vector<std::uint8_t> scratch_;
  std::vector<int> best_order_;
};

// Writes into order[first..] the points of `rest` sorted by angle around
// `pivot`, measured counter-clockwise from the ray pivot->start.
void radial_sort(const Chirotope& chi, int pivot, int start, std::vector<int>& order, std::size_t first) {
  const auto half = [&](int q) { return chi(pivot, start, q) > 0 ? 0 : 1; };
  // Small arrays: insertion sort keeps this allocation free.
  for (std::size_t i = first + 1; i < order.size(); ++i) {
    const int v = order[i];
    const int hv = half(v);
    std::size_t j = i;
    while (j > first) {
      const int u = order[j - 1];
      const int hu = half(u);
      const bool before = hv != hu ? hv < hu : chi(pivot, v, u) > 0;
      if (!before) break;
      order[j] = u;
      --j;
    }
    order[j] = v;
  }
}

FlagForm canonical_with_labels(const Chirotope& chi, int labels) {
  const int n = chi.size();
  if (labels < 0 || labels > n) throw std::invalid_argument("label count exceeds chirotope size");
  FlagForm out;
  out.code.size = n;
  out.code.labels = labels;
  if (binomial(n, 3) == 0) {
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    return out;
  }

  MinimumTracker tracker(n);
  std::vector<int> order(n);
  if (labels >= 2) {
    std::iota(order.begin(), order.end(), 0);
    radial_sort(chi, 0, 1, order, static_cast<std::size_t>(labels));
    tracker.consider(order, chi);
  } else if (labels == 1) {
    for (int start = 1; start < n; ++start) {
      order[0] = 0;
      order[1] = start;
      std::size_t pos = 2;
      for (int q = 1; q < n; ++q) {
        if (q != start) order[pos++] = q;
      }
      radial_sort(chi, 0, start, order, 2);
      tracker.consider(order, chi);
    }
  } else {
    for (int pivot = 0; pivot < n; ++pivot) {
      for (int start = 0; start < n; ++start) {
        if (start == pivot) continue;
        order[0] = pivot;
        order[1] = start;
        std::size_t pos = 2;
        for (int q = 0; q < n; ++q) {
          if (q != pivot && q != start) order[pos++] = q;
        }
        radial_sort(chi, pivot, start, order, 2);
        tracker.consider(order, chi);
      }
    }
  }
  out.code.bytes = tracker.packed();
  out.order = tracker.order();
  return out;
}

}  // namespace

std::string CanonicalCode::hex() const {
  std::string out;
  append_hex_byte(out, static_cast<unsigned>(size));
  for (auto b : bytes) append_hex_byte(out, b);
  return out;
}

CanonicalCode CanonicalCode::from_hex(std::string_view hex) {
  auto raw = parse_hex(hex);
  if (raw.empty()) throw std::invalid_argument("empty order type code");
  CanonicalCode code;
  code.size = raw[0];
  code.bytes.assign(raw.begin() + 1, raw.end());
  if (code.bytes.size() != packed_length(code.size)) {
    throw std::invalid_argument("order type code length does not match its size");
  }
  return code;
}

std::string FlagCode::hex() const {
  std::string out;
  append_hex_byte(out, static_cast<unsigned>(size));
  append_hex_byte(out, static_cast<unsigned>(labels));
  for (auto b : bytes) append_hex_byte(out, b);
  return out;
}

FlagCode FlagCode::from_hex(std::string_view hex) {
  auto raw = parse_hex(hex);
  if (raw.size() < 2) throw std::invalid_argument("flag code too short");
  FlagCode code;
  code.size = raw[0];
  code.labels = raw[1];
  code.bytes.assign(raw.begin() + 2, raw.end());
  if (code.labels > code.size || code.bytes.size() != packed_length(code.size)) {
    throw std::invalid_argument("flag code length does not match its size");
  }
  return code;
}

CanonicalForm canonical_form(const Chirotope& chi) {
  auto f = canonical_with_labels(chi, 0);
  return {f.code.as_order_type(), std::move(f.order)};
}

CanonicalCode canonical_code(const Chirotope& chi) { return canonical_form(chi).code; }

FlagForm flag_form(const Chirotope& chi, int labels) { return canonical_with_labels(chi, labels); }

FlagCode flag_code(const Chirotope& chi, int labels) { return canonical_with_labels(chi, labels).code; }

Chirotope chirotope_of_code(int size, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != packed_length(size)) throw std::invalid_argument("code length does not match size");
  std::vector<int> signs(static_cast<std::size_t>(binomial(size, 3)));
  for (std::size_t t = 0; t < signs.size(); ++t) {
    signs[t] = (bytes[t / 8] & (0x80u >> (t % 8))) ? 1 : -1;
  }
  return Chirotope::from_triples(size, signs);
}

bool same_order_type(std::span<const Point> a, std::span<const Point> b) {
  if (a.size() != b.size()) return false;
  return canonical_code(Chirotope::of(a)) == canonical_code(Chirotope::of(b));
}

std::size_t CodeHash::operator()(const CanonicalCode& c) const noexcept {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(c.size);
  for (auto b : c.bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::size_t CodeHash::operator()(const FlagCode& c) const noexcept {
  std::uint64_t h = 1469598103934665603ull ^ (static_cast<std::uint64_t>(c.size) << 8) ^ static_cast<std::uint64_t>(c.labels);
  for (auto b : c.bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace ordertypes
