#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ordertypes/chirotope.hpp"
#include "ordertypes/geometry.hpp"

namespace ordertypes {

struct OrderTypeRecord {
  CanonicalCode code;
  PointSet witness;
};

class UnknownCode : public std::invalid_argument {
 public:
  explicit UnknownCode(const std::string& what) : std::invalid_argument(what) {}
};

class MissingSize : public std::out_of_range {
 public:
  explicit MissingSize(int n) : std::out_of_range("store does not contain size " + std::to_string(n)), size(n) {}
  int size;
};

/// All realizable order types of sizes 0..max_size(), sorted by code within
/// each size.
class OrderTypeStore {
 public:
  static constexpr std::string_view kVersion = "OTDB v1";

  /// Store holding the single order types of sizes 0, 1, 2 and 3.
  static OrderTypeStore base();

  int max_size() const { return static_cast<int>(levels_.size()) - 1; }
  bool has_size(int n) const { return n >= 0 && n <= max_size(); }

  const std::vector<OrderTypeRecord>& records(int n) const;
  std::size_t count(int n) const { return records(n).size(); }

  std::optional<std::size_t> find(const CanonicalCode& code) const;
  /// Throws UnknownCode.
  std::size_t index_of(const CanonicalCode& code) const;
  const OrderTypeRecord& record(const CanonicalCode& code) const;

  /// Installs size n (which must be max_size()+1); records are sorted by code.
  void append_level(std::vector<OrderTypeRecord> records);

  /// Drops sizes above n.
  void truncate(int n);

  friend bool operator==(const OrderTypeStore& a, const OrderTypeStore& b);

 private:
  std::vector<std::vector<OrderTypeRecord>> levels_;
  std::vector<std::unordered_map<CanonicalCode, std::size_t, CodeHash>> index_;
};

enum class SamplingStrategy {
  /// One point per cell of a vertical decomposition of the arrangement.
  Slabs,
  /// Points just off every arrangement vertex, one per incident sector.
  VertexSectors,
};

struct EnumerateOptions {
  SamplingStrategy strategy = SamplingStrategy::Slabs;
  int threads = 1;
  /// Replace each new witness point by the simplest dyadic point of its cell.
  bool snap = true;
};

/// Sign vector of `q` against every line through two points of `base`, one
/// bit per pair i<j (bit set when orient(base_i, base_j, q) > 0).  Returns
/// nullopt if q lies on one of the lines or coincides with a base point.
std::optional<std::uint64_t> cell_key(const PointSet& base, const Point& q);

/// One sample point per cell of the arrangement of lines through pairs of
/// `base`, keyed by the cell's sign vector.
std::vector<std::pair<std::uint64_t, Point>> arrangement_cells(const PointSet& base, SamplingStrategy strategy);

/// Extends `store` by one size: every order type of size max_size()+1 that is
/// obtained by adding one point to a stored witness.
void enumerate_next(OrderTypeStore& store, const EnumerateOptions& options = {});

/// Base store extended up to `max_size`.
OrderTypeStore enumerate_up_to(int max_size, const EnumerateOptions& options = {});

class StoreFormatError : public std::runtime_error {
 public:
  enum class Kind { Io, Version, Checksum, Corrupt };
  StoreFormatError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Binary layout: the 8 bytes "OTDB v1\n", uint32 level count, then per level
/// a uint32 record count and per record (uint32 code length, code bytes,
/// uint32 point count, coordinates as uint32-length-prefixed "p/q" strings),
/// and finally the CRC-32 of everything before it.  Integers little endian.
void store_save(const OrderTypeStore& store, const std::filesystem::path& path);
OrderTypeStore store_load(const std::filesystem::path& path);

}  // namespace ordertypes
