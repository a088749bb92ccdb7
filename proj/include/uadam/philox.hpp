#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace uadam {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key): no stream state, so draws are reproducible
/// regardless of evaluation order or thread assignment.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Recorded in run metadata so traces name the exact generator.
inline constexpr std::string_view kRngIdentifier = "philox4x32-10/box-muller";

/// Uniform on the open interval (0, 1) from 53 bits.
constexpr double uniform_open01(std::uint32_t hi, std::uint32_t lo) noexcept {
  // 52 bits keep (bits + 0.5) exactly representable below 2^52.
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normal draw keyed by (seed, step, coordinate, stream).
inline double standard_normal(std::uint64_t seed, std::uint64_t step,
                              std::uint32_t coord, std::uint32_t stream) noexcept {
  const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(step),
                                   static_cast<std::uint32_t>(step >> 32), coord,
                                   stream};
  const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32)};
  const auto r = Philox4x32::generate(ctr, key);
  const double u1 = uniform_open01(r[0], r[1]);
  const double u2 = uniform_open01(r[2], r[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace uadam
