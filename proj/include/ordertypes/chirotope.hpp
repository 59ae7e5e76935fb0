#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordertypes/geometry.hpp"

namespace ordertypes {

/// Labeled orientation map of a point sequence.  Signs are stored for every
/// ordered triple so lookups need no sorting; repeated indices map to 0.
class Chirotope {
 public:
  Chirotope() = default;

  /// Orientation table of a point sequence.  Throws DegenerateConfiguration
  /// if the points are not in general position.
  static Chirotope of(std::span<const Point> points);

  /// Builds a chirotope from the signs of the triples i<j<k listed in
  /// lexicographic order.
  static Chirotope from_triples(int n, std::span<const int> signs);

  /// Inverse of sign_string(): one '+' or '-' per triple i<j<k.
  static Chirotope from_sign_string(std::string_view signs);

  int size() const { return n_; }

  int operator()(int i, int j, int k) const {
    return table_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
  }

  /// Sets the sign of (i,j,k) and of all its permutations.
  void set(int i, int j, int k, int sign);

  /// Sub-chirotope on `indices`, relabeled 0..|indices|-1 in the given order.
  Chirotope restrict(std::span<const int> indices) const;

  /// "+" / "-" per triple i<j<k in lexicographic order.
  std::string sign_string() const;

  friend bool operator==(const Chirotope& a, const Chirotope& b) {
    return a.n_ == b.n_ && a.table_ == b.table_;
  }

 private:
  explicit Chirotope(int n);

  int n_ = 0;
  std::vector<std::int8_t> table_;
};

/// Relabeling-invariant identifier of an order type: the lexicographically
/// smallest sign bit string (bit 1 = counter-clockwise) over the radial-sweep
/// relabelings, packed most significant bit first.
struct CanonicalCode {
  int size = 0;
  std::vector<std::uint8_t> bytes;

  /// Two hex digits for the size followed by the packed bytes.
  std::string hex() const;
  static CanonicalCode from_hex(std::string_view hex);

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
};

/// Identifier of a flag: the first `labels` points are labeled in order, the
/// rest are ordered canonically.  A flag code with zero labels is an order
/// type code.
struct FlagCode {
  int size = 0;
  int labels = 0;
  std::vector<std::uint8_t> bytes;

  static FlagCode unlabeled(const CanonicalCode& code) { return {code.size, 0, code.bytes}; }
  CanonicalCode as_order_type() const { return {size, bytes}; }

  /// Size, label count (two hex digits each), then the packed bytes.
  std::string hex() const;
  static FlagCode from_hex(std::string_view hex);

  friend auto operator<=>(const FlagCode&, const FlagCode&) = default;
  friend bool operator==(const FlagCode&, const FlagCode&) = default;
};

struct CanonicalForm {
  CanonicalCode code;
  /// order[i] = original index placed at canonical position i.
  std::vector<int> order;
};

struct FlagForm {
  FlagCode code;
  std::vector<int> order;
};

CanonicalForm canonical_form(const Chirotope& chi);
CanonicalCode canonical_code(const Chirotope& chi);

/// Canonical form of `chi` where indices 0..labels-1 carry labels 0..labels-1.
FlagForm flag_form(const Chirotope& chi, int labels);
FlagCode flag_code(const Chirotope& chi, int labels);

/// Chirotope encoded by a code, in its canonical labeling.
Chirotope chirotope_of_code(int size, std::span<const std::uint8_t> bytes);

bool same_order_type(std::span<const Point> a, std::span<const Point> b);

struct CodeHash {
  std::size_t operator()(const CanonicalCode& c) const noexcept;
  std::size_t operator()(const FlagCode& c) const noexcept;
};

}  // namespace ordertypes
