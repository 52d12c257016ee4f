// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Philox4x64-10 counter-based generator (Salmon et al. constants).

#ifndef SOUNDSMOOTH_PHILOX_HPP
#define SOUNDSMOOTH_PHILOX_HPP

#include <array>
#include <cstdint>

namespace soundsmooth::sampler {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

namespace detail {
inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}
}  // namespace detail

inline PhiloxCounter philox4x64_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo(kM0, ctr[0], hi0, lo0);
    detail::mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Sequential 64-bit outputs of Philox keyed by (seed, stream), counter starting at 0.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  std::uint64_t next() {
    if (index_ == 4) {
      block_ = philox4x64_10(counter_, key_);
      for (auto& c : counter_) {
        if (++c != 0) break;
      }
      index_ = 0;
    }
    return block_[index_++];
  }

 private:
  PhiloxKey key_;
  PhiloxCounter counter_{0, 0, 0, 0};
  PhiloxCounter block_{};
  unsigned index_ = 4;
};

}  // namespace soundsmooth::sampler

#endif  // SOUNDSMOOTH_PHILOX_HPP
