#pragma once

// Public-key encryption over SL2(N): the message bits select a product of
// two secret generator words, block-embedded into 2n x 2n matrices and
// conjugated by a secret S modulo 2^(l*lambda).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "sl2pke/errors.hpp"
#include "sl2pke/modring.hpp"
#include "sl2pke/monoid.hpp"
#include "sl2pke/random.hpp"

namespace sl2pke {

struct Params {
  unsigned l = 1;       // generator word length
  unsigned lambda = 1;  // message bits
  unsigned n = 1;       // block size; matrices are 2n x 2n

  unsigned modulus_bits() const { return l * lambda; }
  std::size_t dim() const { return 2 * static_cast<std::size_t>(n); }
  Modulus modulus() const { return Modulus(modulus_bits()); }

  /// Throws UsageError unless l, lambda, n >= 1 and l*lambda fits.
  void validate() const;

  /// "set1" (256,256,1), "set2" (1,256,16), "set3" (16,256,4).
  static Params preset(std::string_view name);

  friend bool operator==(const Params&, const Params&) = default;
};

std::string describe(const Params& p);

struct SecretKey {
  Params params;
  Bits g0_bits;
  Bits g1_bits;
  ResidueMatrix s;
  ResidueMatrix s_inv;
};

struct PublicKey {
  Params params;
  ResidueMatrix p0;
  ResidueMatrix p1;

  const ResidueMatrix& generator(std::uint8_t bit) const { return bit ? p1 : p0; }
};

struct Ciphertext {
  Params params;
  ResidueMatrix c;
  std::optional<Bits> mask;
};

enum class RejectReason : std::uint8_t { BadBlock, BadFactor, BadChunk, BadLength };

const char* to_string(RejectReason r) noexcept;

struct Rejection {
  RejectReason reason;
  std::string detail;
};

using DecryptResult = Outcome<Bits, Rejection>;

enum class GeneratorMode : std::uint8_t {
  Random,        // uniform distinct l-letter words
  FirstAttempt,  // G0 = L, G1 = R exactly; requires l = 1
};

/// [[a I, b I], [c I, d I]] mod 2^K.
ResidueMatrix embed_block(const NatMatrix& m, unsigned n, const Modulus& mod);
ResidueMatrix embed_block(const ResidueMatrix& m2, unsigned n);

/// Inverse of embed_block; nullopt unless every n x n block is scalar * I.
std::optional<ResidueMatrix> reduce_block(const ResidueMatrix& m);

/// Uniform d x d matrix resampled until invertible; returns it with the
/// number of draws taken.
std::pair<ResidueMatrix, std::size_t> sample_invertible(std::size_t dim, const Modulus& mod, RandomSource& rng);

ResidueMatrix sample_uniform_matrix(std::size_t dim, const Modulus& mod, RandomSource& rng);

std::pair<SecretKey, PublicKey> keygen(const Params& params, RandomSource& rng,
                                       GeneratorMode mode = GeneratorMode::Random);

/// Left-to-right product of P_{bits[i]} for any number of bits (empty -> identity).
ResidueMatrix encrypt_product(const PublicKey& pk, const Bits& bits);

/// Requires |message| = lambda.
Ciphertext encrypt(const PublicKey& pk, const Bits& message);

/// Draws a uniform mask rho, encrypts message XOR rho, and ships rho alongside.
Ciphertext encrypt_masked(const PublicKey& pk, const Bits& message, RandomSource& rng);

/// Uses the supplied mask; an all-zero mask gives the plain ciphertext matrix.
Ciphertext encrypt_with_mask(const PublicKey& pk, const Bits& message, const Bits& mask);

DecryptResult decrypt(const SecretKey& sk, const Ciphertext& ct);

/// Decrypts a bare matrix expecting a message of `message_bits` bits (no mask).
DecryptResult decrypt_matrix(const SecretKey& sk, const ResidueMatrix& c, std::size_t message_bits);

/// The public key corresponding to a secret key.
PublicKey derive_public_key(const SecretKey& sk);

/// MSB-first: the first hex digit's high bit is bits[0]. Length must be lambda
/// and the value must fit in lambda bits.
Bits bits_from_hex(std::string_view hex, std::size_t nbits);
std::string bits_to_hex(const Bits& bits);

Bits xor_bits(const Bits& a, const Bits& b);

}  // namespace sl2pke
