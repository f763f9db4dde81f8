#pragma once

#include <array>
#include <cstdint>

namespace bbibp {

/// Philox4x32-10 counter-based bijection.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

/// Normal variates for one path: block j of path p uses counter (j, tag, p_lo, p_hi).
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t path, std::uint32_t tag = 0) noexcept;

  /// Next standard normal (Box-Muller, two per Philox block).
  double normal() noexcept;

 private:
  Philox4x32::Key key_;
  std::uint64_t path_;
  std::uint32_t tag_;
  std::uint32_t block_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Uniform in (0, 1) from 64 random bits, never 0 or 1.
double uniform_open(std::uint64_t bits) noexcept;

}  // namespace bbibp
