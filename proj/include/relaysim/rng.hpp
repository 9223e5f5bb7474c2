#pragma once

// Counter-based random number generation for reproducible parallel Monte
// Carlo. Every trial owns an independent substream derived from
// (master_seed, trial_index); no state is shared between trials, so results
// are invariant under any partition of trials across workers.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace relaysim {

// Philox4x32-10 block cipher (Salmon et al. counter-based generator).
struct Philox4x32 {
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Block generate(Block counter, Key key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t prod0 = std::uint64_t{kMult0} * counter[0];
      const std::uint64_t prod1 = std::uint64_t{kMult1} * counter[2];
      counter = {static_cast<std::uint32_t>(prod1 >> 32) ^ counter[1] ^ key[0],
                 static_cast<std::uint32_t>(prod1),
                 static_cast<std::uint32_t>(prod0 >> 32) ^ counter[3] ^ key[1],
                 static_cast<std::uint32_t>(prod0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }
};

// One random substream. The key carries the master seed, the counter words
// 0..1 the trial index and words 2..3 a running block index, so streams for
// distinct (seed, trial) pairs never overlap.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trial_index)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        trial_{static_cast<std::uint32_t>(trial_index),
               static_cast<std::uint32_t>(trial_index >> 32)} {}

  std::uint32_t next_u32() {
    if (word_pos_ == 4) refill();
    return block_[word_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform draw in (0, 1]; never zero, safe under log().
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
  }

  // Circularly-symmetric complex Gaussian, zero mean, unit variance
  // (E|z|^2 = 1). Consumes exactly two uniforms.
  std::complex<double> next_complex_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  void refill() {
    const Philox4x32::Block counter = {
        trial_[0], trial_[1], static_cast<std::uint32_t>(block_index_),
        static_cast<std::uint32_t>(block_index_ >> 32)};
    block_ = Philox4x32::generate(counter, key_);
    ++block_index_;
    word_pos_ = 0;
  }

  Philox4x32::Key key_;
  std::array<std::uint32_t, 2> trial_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Block block_{};
  int word_pos_ = 4;
};

}  // namespace relaysim
