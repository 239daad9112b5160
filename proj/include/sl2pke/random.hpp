#pragma once

// Seedable random source.
//
// Output is the ChaCha20 (IETF variant, libsodium) keystream keyed by a
// 256-bit seed. Keystream is drawn in 4 KiB blocks; block i uses the 96-bit
// nonce le64(i) || 0^32. fork(s) derives an independent child keyed by
// BLAKE2b-256(seed || "sl2pke-fork" || le64(s)), so parallel work split by
// a fixed stream index stays reproducible whatever the thread count.
//
// A RandomSource is owned by one caller at a time; it is not thread-safe.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "sl2pke/modring.hpp"

namespace sl2pke {

class RandomSource {
 public:
  using Seed = std::array<std::uint8_t, 32>;

  explicit RandomSource(const Seed& seed);

  /// 1 to 64 hex digits, left-padded with zeros to 256 bits; optional "0x".
  static RandomSource from_seed_hex(std::string_view hex);
  static RandomSource from_os_entropy();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  std::uint8_t next_bit();
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Uniform integer in [0, 2^bits).
  BigInt uniform_bits(unsigned bits);

  RandomSource fork(std::uint64_t stream) const;

  const Seed& seed() const noexcept { return seed_; }

 private:
  void refill();

  Seed seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = buf_.size();
  std::uint64_t bit_cache_ = 0;
  unsigned bits_left_ = 0;
};

std::string to_hex(const RandomSource::Seed& seed);

}  // namespace sl2pke
