#include "sl2pke/scheme.hpp"

#include <fmt/format.h>

#include <cctype>

namespace sl2pke {

namespace {

constexpr std::uint64_t kMaxModulusBits = 1u << 24;
constexpr unsigned kMaxBlock = 1024;

ResidueMatrix generator_matrix(const Bits& g, unsigned n, const Modulus& mod) {
  return embed_block(word_to_matrix(generator_word(g)), n, mod);
}

Rejection reject(RejectReason r, std::string detail) { return Rejection{r, std::move(detail)}; }

}  // namespace

void Params::validate() const {
  if (l == 0 || lambda == 0 || n == 0) throw UsageError("parameters l, lambda, n must all be >= 1");
  if (static_cast<std::uint64_t>(l) * lambda > kMaxModulusBits)
    throw UsageError(fmt::format("l*lambda = {} exceeds the supported maximum of {} bits",
                                 static_cast<std::uint64_t>(l) * lambda, kMaxModulusBits));
  if (n > kMaxBlock) throw UsageError(fmt::format("n = {} exceeds the supported maximum of {}", n, kMaxBlock));
}

Params Params::preset(std::string_view name) {
  if (name == "set1") return Params{256, 256, 1};
  if (name == "set2") return Params{1, 256, 16};
  if (name == "set3") return Params{16, 256, 4};
  throw UsageError(fmt::format("unknown preset '{}' (expected set1, set2 or set3)", name));
}

std::string describe(const Params& p) {
  return fmt::format("l={} lambda={} n={} (K={} bits, {}x{} matrices)", p.l, p.lambda, p.n, p.modulus_bits(), p.dim(),
                     p.dim());
}

const char* to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::BadBlock:
      return "BadBlock";
    case RejectReason::BadFactor:
      return "BadFactor";
    case RejectReason::BadChunk:
      return "BadChunk";
    case RejectReason::BadLength:
      return "BadLength";
  }
  return "Unknown";
}

ResidueMatrix embed_block(const NatMatrix& m, unsigned n, const Modulus& mod) {
  if (n == 0) throw UsageError("embed_block: n must be >= 1");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  std::vector<BigInt> e(d * d, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    e[i * d + i] = m.a;
    e[i * d + n + i] = m.b;
    e[(n + i) * d + i] = m.c;
    e[(n + i) * d + n + i] = m.d;
  }
  return ResidueMatrix(d, mod, std::move(e));
}

ResidueMatrix embed_block(const ResidueMatrix& m2, unsigned n) {
  if (m2.dim() != 2) throw UsageError("embed_block: expected a 2x2 matrix");
  return embed_block(NatMatrix{m2(0, 0), m2(0, 1), m2(1, 0), m2(1, 1)}, n, m2.modulus());
}

std::optional<ResidueMatrix> reduce_block(const ResidueMatrix& m) {
  const std::size_t d = m.dim();
  if (d % 2 != 0) throw UsageError("reduce_block: dimension must be even");
  const std::size_t n = d / 2;
  std::vector<BigInt> out(4);
  for (std::size_t bi = 0; bi < 2; ++bi)
    for (std::size_t bj = 0; bj < 2; ++bj) {
      const BigInt& scalar = m(bi * n, bj * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const BigInt& v = m(bi * n + i, bj * n + j);
          if (i == j ? v != scalar : v != 0) return std::nullopt;
        }
      out[bi * 2 + bj] = scalar;
    }
  return ResidueMatrix(2, m.modulus(), std::move(out));
}

ResidueMatrix sample_uniform_matrix(std::size_t dim, const Modulus& mod, RandomSource& rng) {
  std::vector<BigInt> e(dim * dim);
  for (auto& x : e) x = rng.uniform_bits(mod.bits());
  return ResidueMatrix(dim, mod, std::move(e));
}

std::pair<ResidueMatrix, std::size_t> sample_invertible(std::size_t dim, const Modulus& mod, RandomSource& rng) {
  for (std::size_t draws = 1;; ++draws) {
    auto s = sample_uniform_matrix(dim, mod, rng);
    if (is_invertible(s)) return {std::move(s), draws};
  }
}

std::pair<SecretKey, PublicKey> keygen(const Params& params, RandomSource& rng, GeneratorMode mode) {
  params.validate();
  const Modulus mod = params.modulus();

  Bits g0, g1;
  if (mode == GeneratorMode::FirstAttempt) {
    if (params.l != 1) throw UsageError("first-attempt generators {L, R} require l = 1");
    g0 = {0};
    g1 = {1};
  } else {
    do {
      g0.resize(params.l);
      g1.resize(params.l);
      for (auto& b : g0) b = rng.next_bit();
      for (auto& b : g1) b = rng.next_bit();
    } while (g0 == g1);
  }

  auto [s, draws] = sample_invertible(params.dim(), mod, rng);
  (void)draws;
  ResidueMatrix s_inv = mat_invert(s);
  ResidueMatrix p0 = mat_conjugate(s, s_inv, generator_matrix(g0, params.n, mod));
  ResidueMatrix p1 = mat_conjugate(s, s_inv, generator_matrix(g1, params.n, mod));

  SecretKey sk{params, std::move(g0), std::move(g1), std::move(s), std::move(s_inv)};
  PublicKey pk{params, std::move(p0), std::move(p1)};
  return {std::move(sk), std::move(pk)};
}

PublicKey derive_public_key(const SecretKey& sk) {
  const Modulus mod = sk.params.modulus();
  return PublicKey{sk.params, mat_conjugate(sk.s, sk.s_inv, generator_matrix(sk.g0_bits, sk.params.n, mod)),
                   mat_conjugate(sk.s, sk.s_inv, generator_matrix(sk.g1_bits, sk.params.n, mod))};
}

ResidueMatrix encrypt_product(const PublicKey& pk, const Bits& bits) {
  if (bits.empty()) return ResidueMatrix::identity(pk.p0.dim(), pk.p0.modulus());
  ResidueMatrix c = pk.generator(bits[0]);
  for (std::size_t i = 1; i < bits.size(); ++i) c = mat_mul(c, pk.generator(bits[i]));
  return c;
}

Ciphertext encrypt(const PublicKey& pk, const Bits& message) {
  if (message.size() != pk.params.lambda)
    throw UsageError(fmt::format("message has {} bits, expected lambda = {}", message.size(), pk.params.lambda));
  return Ciphertext{pk.params, encrypt_product(pk, message), std::nullopt};
}

Ciphertext encrypt_with_mask(const PublicKey& pk, const Bits& message, const Bits& mask) {
  if (mask.size() != pk.params.lambda)
    throw UsageError(fmt::format("mask has {} bits, expected lambda = {}", mask.size(), pk.params.lambda));
  Ciphertext ct = encrypt(pk, xor_bits(message, mask));
  ct.mask = mask;
  return ct;
}

Ciphertext encrypt_masked(const PublicKey& pk, const Bits& message, RandomSource& rng) {
  Bits mask(pk.params.lambda);
  for (auto& b : mask) b = rng.next_bit();
  return encrypt_with_mask(pk, message, mask);
}

DecryptResult decrypt_matrix(const SecretKey& sk, const ResidueMatrix& c, std::size_t message_bits) {
  if (c.dim() != sk.params.dim() || !(c.modulus() == sk.s.modulus()))
    throw UsageError(fmt::format("ciphertext is {}x{} mod 2^{}, key expects {}x{} mod 2^{}", c.dim(), c.dim(),
                                 c.modulus().bits(), sk.params.dim(), sk.params.dim(), sk.params.modulus_bits()));

  // S C S^-1 undoes the public conjugation.
  const ResidueMatrix unmasked = mat_conjugate(sk.s_inv, sk.s, c);
  const auto reduced = reduce_block(unmasked);
  if (!reduced) return reject(RejectReason::BadBlock, "conjugated ciphertext is not block-scalar");

  const auto& r = *reduced;
  NatMatrix lifted{r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
  const std::size_t expected = message_bits * sk.params.l;
  auto word = factor(std::move(lifted), expected);
  if (!word) {
    const FactorError e = word.error();
    return reject(e == FactorError::NegativeEntry ? RejectReason::BadFactor : RejectReason::BadLength,
                  fmt::format("factorization over {} letters failed: {}", expected, to_string(e)));
  }

  auto bits = word_to_bits(word.value(), generator_word(sk.g0_bits), generator_word(sk.g1_bits));
  if (!bits) return reject(RejectReason::BadChunk, "word contains a chunk matching neither generator");
  return std::move(*bits);
}

DecryptResult decrypt(const SecretKey& sk, const Ciphertext& ct) {
  if (!(ct.params == sk.params))
    throw UsageError(fmt::format("ciphertext parameters ({}) do not match the key ({})", describe(ct.params),
                                 describe(sk.params)));
  if (ct.mask && ct.mask->size() != sk.params.lambda)
    throw UsageError(fmt::format("mask has {} bits, expected lambda = {}", ct.mask->size(), sk.params.lambda));
  auto out = decrypt_matrix(sk, ct.c, sk.params.lambda);
  if (!out || !ct.mask) return out;
  return xor_bits(out.value(), *ct.mask);
}

Bits bits_from_hex(std::string_view hex, std::size_t nbits) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  const std::size_t digits = (nbits + 3) / 4;
  if (hex.size() != digits)
    throw UsageError(fmt::format("message must be exactly {} hex digits for {} bits, got {}", digits, nbits,
                                 hex.size()));
  for (char ch : hex)
    if (!std::isxdigit(static_cast<unsigned char>(ch))) throw UsageError("message contains a non-hex character");
  BigInt v(std::string(hex), 16);
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > nbits && v != 0)
    throw UsageError(fmt::format("message value does not fit in {} bits", nbits));
  Bits bits(nbits);
  for (std::size_t i = 0; i < nbits; ++i) bits[i] = mpz_tstbit(v.get_mpz_t(), nbits - 1 - i) ? 1 : 0;
  return bits;
}

std::string bits_to_hex(const Bits& bits) {
  BigInt v = 0;
  for (auto b : bits) {
    v <<= 1;
    if (b) v += 1;
  }
  std::string s = v.get_str(16);
  const std::size_t digits = (bits.size() + 3) / 4;
  if (s.size() < digits) s.insert(0, digits - s.size(), '0');
  if (bits.empty()) s.clear();
  return s;
}

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw UsageError("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<std::uint8_t>((a[i] ^ b[i]) & 1u);
  return out;
}

}  // namespace sl2pke
