#include "sl2pke/random.hpp"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <stdexcept>

#include "sl2pke/errors.hpp"

namespace sl2pke {

namespace {

void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
}

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

RandomSource::RandomSource(const Seed& seed) : seed_(seed) { ensure_sodium(); }

RandomSource RandomSource::from_seed_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) throw UsageError("seed must be 1 to 64 hex digits");
  std::string padded(64 - hex.size(), '0');
  padded.append(hex);
  Seed seed{};
  for (std::size_t i = 0; i < seed.size(); ++i) {
    const int hi = hex_value(padded[2 * i]);
    const int lo = hex_value(padded[2 * i + 1]);
    if (hi < 0 || lo < 0) throw UsageError("seed contains a non-hex character");
    seed[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return RandomSource(seed);
}

RandomSource RandomSource::from_os_entropy() {
  ensure_sodium();
  Seed seed{};
  randombytes_buf(seed.data(), seed.size());
  return RandomSource(seed);
}

void RandomSource::refill() {
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(block_ >> (8 * i));
  crypto_stream_chacha20_ietf(buf_.data(), buf_.size(), nonce.data(), seed_.data());
  ++block_;
  pos_ = 0;
}

void RandomSource::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

std::uint64_t RandomSource::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

std::uint8_t RandomSource::next_bit() {
  if (bits_left_ == 0) {
    bit_cache_ = next_u64();
    bits_left_ = 64;
  }
  const auto bit = static_cast<std::uint8_t>(bit_cache_ & 1u);
  bit_cache_ >>= 1;
  --bits_left_;
  return bit;
}

std::uint64_t RandomSource::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("uniform_below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

BigInt RandomSource::uniform_bits(unsigned bits) {
  std::vector<std::uint8_t> bytes((bits + 7) / 8);
  fill(bytes);
  BigInt v;
  if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), -1, 1, 0, 0, bytes.data());
  mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
  return v;
}

RandomSource RandomSource::fork(std::uint64_t stream) const {
  static constexpr char kTag[] = "sl2pke-fork";
  std::array<std::uint8_t, 32 + sizeof(kTag) - 1 + 8> input{};
  std::memcpy(input.data(), seed_.data(), 32);
  std::memcpy(input.data() + 32, kTag, sizeof(kTag) - 1);
  for (int i = 0; i < 8; ++i) input[32 + sizeof(kTag) - 1 + i] = static_cast<std::uint8_t>(stream >> (8 * i));
  Seed child{};
  crypto_generichash(child.data(), child.size(), input.data(), input.size(), nullptr, 0);
  return RandomSource(child);
}

std::string to_hex(const RandomSource::Seed& seed) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : seed) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

}  // namespace sl2pke
