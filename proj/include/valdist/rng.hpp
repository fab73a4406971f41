#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace valdist {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3").
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

/// Counter-based stream: (seed, stream id) fully determine the sequence, so
/// sample i can be regenerated on any thread.
class PhiloxStream {
public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      block_ = philox4x32_10({block_index_lo_, block_index_hi_, stream_lo_, stream_hi_}, key_);
      if (++block_index_lo_ == 0) ++block_index_hi_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  /// Uniform double in the open interval (0, 1), 53 random bits.
  double uniform() {
    std::uint64_t a = next_u32() >> 5, b = next_u32() >> 6;
    return (static_cast<double>(a * 67108864ull + b) + 0.5) / 9007199254740992.0;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span);
  }

  /// Standard normal by Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint32_t block_index_lo_ = 0, block_index_hi_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace valdist
