#pragma once

// Philox4x32-10 counter-based generator. Output depends only on
// (key, counter), so replicate r can be drawn from counter (r, block)
// on any thread and the stream is the same for every thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace wavebound {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
  explicit Philox4x32(Key key) : key_(key) {}

  [[nodiscard]] Block operator()(Block ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  /// Block for 64-bit stream id and 64-bit position within the stream.
  [[nodiscard]] Block at(std::uint64_t stream, std::uint64_t position) const {
    return (*this)({static_cast<std::uint32_t>(position), static_cast<std::uint32_t>(position >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)});
  }

 private:
  Key key_;
};

/// Uniform in the open interval (0, 1) from 52 bits; the extremes are 2^-53 and 1 - 2^-53.
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Two standard normals per block by Box-Muller.
inline std::array<double, 2> normal_pair(const Philox4x32::Block& b) {
  const double u1 = uniform_open(b[0], b[1]);
  const double u2 = uniform_open(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

/// Fills out[0..n) with the standard normals of stream `stream`.
template <class Out>
void fill_normals(const Philox4x32& gen, std::uint64_t stream, std::size_t n, Out& out) {
  for (std::size_t i = 0; i < n; i += 2) {
    const auto z = normal_pair(gen.at(stream, i / 2));
    out[static_cast<decltype(out.size())>(i)] = z[0];
    if (i + 1 < n) out[static_cast<decltype(out.size())>(i + 1)] = z[1];
  }
}

}  // namespace wavebound
