#pragma once

// Counter-based random streams. A draw is a pure function of
// (seed, stream_index, position), so any chunk of any estimator can be
// regenerated independently of thread schedule.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace mixvol {

/// Philox4x32-10 block cipher (Salmon et al., Random123).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

/// Standard normal variates from one stream, two per Philox block via
/// Box-Muller. Normal number `p` of a stream is always the same value.
class NormalGenerator {
 public:
  explicit NormalGenerator(RngStream stream, std::uint64_t position = 0) noexcept
      : key_{static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32)},
        stream_(stream.stream_index) {
    seek(position);
  }

  void seek(std::uint64_t position) noexcept {
    block_ = position / 2;
    refill();
    slot_ = static_cast<int>(position % 2);
  }

  std::uint64_t position() const noexcept { return 2 * block_ + static_cast<std::uint64_t>(slot_) - 2; }

  double operator()() noexcept {
    if (slot_ == 2) {
      refill();
      slot_ = 0;
    }
    return cache_[slot_++];
  }

  void fill(std::span<double> out) noexcept {
    for (double& x : out) x = (*this)();
  }

  /// The uniform in (0, 1] built from one 64-bit half of a block.
  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

 private:
  void refill() noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_),
                                  static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = Philox4x32::block(ctr, key_);
    const double u1 = to_unit(out[0], out[1]);
    const double u2 = to_unit(out[2], out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cache_[0] = r * std::cos(angle);
    cache_[1] = r * std::sin(angle);
    ++block_;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> cache_{};
  int slot_ = 0;
};

/// Uniform (0, 1] variates from one stream; independent of NormalGenerator
/// draws only when given a different stream index.
class UniformGenerator {
 public:
  explicit UniformGenerator(RngStream stream) noexcept
      : key_{static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32)},
        stream_(stream.stream_index) {}

  double operator()() noexcept {
    if (slot_ == 2) {
      const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                    static_cast<std::uint32_t>(block_ >> 32),
                                    static_cast<std::uint32_t>(stream_),
                                    static_cast<std::uint32_t>(stream_ >> 32)};
      const auto out = Philox4x32::block(ctr, key_);
      cache_ = {NormalGenerator::to_unit(out[0], out[1]), NormalGenerator::to_unit(out[2], out[3])};
      ++block_;
      slot_ = 0;
    }
    return cache_[slot_++];
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> cache_{};
  int slot_ = 2;
};

}  // namespace mixvol
