#pragma once

#include <array>
#include <cstdint>

namespace wigner {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

/// Random stream for one matrix entry. The stream is a pure function of
/// (seed, i, j, tag), so entries can be drawn in any order or in parallel.
class EntryStream {
 public:
  EntryStream(std::uint64_t seed, std::uint32_t i, std::uint32_t j, std::uint32_t tag = 0);

  std::uint32_t next_u32();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  PhiloxKey key_;
  PhiloxCounter ctr_;
  PhiloxCounter block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wigner
