#pragma once

// Philox4x32-10 counter-based generator.  A stream is fixed by (seed,
// stream id); draws are a pure function of (seed, stream, position), so
// batched Monte Carlo runs are reproducible under any scheduling.

#include <array>
#include <cstdint>
#include <limits>

namespace ordertypes {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class Rng {
 public:
  using result_type = std::uint32_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  std::uint64_t next_u64();
  /// 53-bit uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (operator()() & 1u) != 0; }

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
};

}  // namespace ordertypes
