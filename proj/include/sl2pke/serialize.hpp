#pragma once

// Line-oriented ASCII format for keys and ciphertexts:
//
//   SL2PKE v1 <pk|sk|ct>
//   l=<dec> lambda=<dec> n=<dec>
//   <name>=<hex>,<hex>,...          one line per matrix, 4n^2 entries row-major
//   G0=<bits> / G1=<bits> / mask=<bits>
//
// Hex is lowercase without leading zeros; every entry lies in [0, 2^(l*lambda)).
// sk carries G0, G1, S, Sinv; pk carries P0, P1; ct carries C and optionally
// mask. The file must end with a newline. Unknown, duplicate, or missing
// fields are parse errors.

#include <cstdint>
#include <string>
#include <string_view>

#include "sl2pke/scheme.hpp"

namespace sl2pke {

enum class FileKind : std::uint8_t { PublicKey, SecretKey, Ciphertext };

std::string serialize(const PublicKey& pk);
std::string serialize(const SecretKey& sk);
std::string serialize(const Ciphertext& ct);

PublicKey parse_public_key(std::string_view text);
SecretKey parse_secret_key(std::string_view text);
Ciphertext parse_ciphertext(std::string_view text);

/// Kind named on the header line; throws ParseError if it is not a v1 header.
FileKind peek_kind(std::string_view text);

/// Bits of matrix payload in a serialized object: (number of matrix entries) * K.
std::uint64_t matrix_payload_bits(std::string_view text);

/// Closed-form sizes in bits.
std::uint64_t public_key_bits(const Params& p);   // 8 n^2 l lambda
std::uint64_t ciphertext_bits(const Params& p);   // 4 n^2 l lambda
std::uint64_t secret_key_bits(const Params& p);   // 4 n^2 l lambda + 2l (S and the generators)

}  // namespace sl2pke
