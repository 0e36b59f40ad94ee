#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace magsim {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * Stateless: each (key, counter) pair maps to four independent 32-bit words,
 * so any sample can be regenerated without replaying a stream. That is what
 * makes the parallel Monte-Carlo reproducible independent of scheduling.
 */
class Philox4x32 {
public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
  {
  }

  Block operator()(Block ctr) const
  {
    std::array<std::uint32_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kW0;
        k[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  // Uniform on (0, 1] with 53 random bits from two words.
  static double to_unit(std::uint32_t hi, std::uint32_t lo)
  {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(hi >> 5) << 26) | static_cast<std::uint64_t>(lo >> 6);
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  // Two independent standard normals via Box-Muller.
  std::pair<double, double> normal_pair(const Block& ctr) const
  {
    const Block r = (*this)(ctr);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

private:
  static constexpr std::uint32_t kM0 = 0xD2511F53;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57;
  static constexpr std::uint32_t kW0 = 0x9E3779B9;
  static constexpr std::uint32_t kW1 = 0xBB67AE85;
  std::array<std::uint32_t, 2> key_;
};

} // namespace magsim
