#pragma once

// The free monoid SL2(N) on L = [[1,0],[1,1]] and R = [[1,1],[0,1]], with
// exact non-negative integer arithmetic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sl2pke/errors.hpp"
#include "sl2pke/modring.hpp"

namespace sl2pke {

enum class Letter : std::uint8_t { L = 0, R = 1 };

using Word = std::vector<Letter>;

/// Plaintext and generator bits, one 0/1 value per element.
using Bits = std::vector<std::uint8_t>;

/// 2x2 matrix [[a, b], [c, d]] over an unsigned integer type.
template <class Int>
struct Mat2 {
  Int a{1}, b{0}, c{0}, d{1};

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

using NatMatrix = Mat2<BigInt>;
/// Fixed-width variant for enumeration; exact while entries stay below 2^64.
using SmallMatrix = Mat2<std::uint64_t>;

/// M <- M * x.
template <class Int>
inline void right_multiply(Mat2<Int>& m, Letter x) {
  if (x == Letter::L) {
    m.a += m.b;
    m.c += m.d;
  } else {
    m.b += m.a;
    m.d += m.c;
  }
}

template <class Int>
inline Int mat_trace(const Mat2<Int>& m) {
  return m.a + m.d;
}

template <class Int>
inline Int sup_norm(const Mat2<Int>& m) {
  Int x = m.a;
  if (m.b > x) x = m.b;
  if (m.c > x) x = m.c;
  if (m.d > x) x = m.d;
  return x;
}

/// trace(M * x) from trace(M): adds b for L, c for R.
template <class Int>
inline Int trace_step(const Mat2<Int>& m, Letter x) {
  return mat_trace(m) + (x == Letter::L ? m.b : m.c);
}

NatMatrix word_to_matrix(const Word& w);

enum class FactorError : std::uint8_t {
  NegativeEntry,  // the greedy step would leave SL2(N)
  EarlyIdentity,  // reached the identity before expected_len letters
  Leftover,       // not the identity after expected_len letters
};

const char* to_string(FactorError e) noexcept;

/// Euclidean factorizer. Emits L when a <= c (c > 0), R when a > c or c = 0,
/// strips that letter from the left, and repeats exactly expected_len times.
Outcome<Word, FactorError> factor(NatMatrix m, std::size_t expected_len);

/// Maximum entry over all words of length k. Equals F(k+1) with F(1) = F(2) = 1.
BigInt entry_bound_exact(unsigned k);

/// g_{bits[0]} || g_{bits[1]} || ... Throws UsageError on an invalid generator pair.
Word bits_to_word(const Bits& bits, const Word& g0, const Word& g1);

/// Splits w into |g0|-letter chunks, each of which must be g0 (0) or g1 (1).
std::optional<Bits> word_to_bits(const Word& w, const Word& g0, const Word& g1);

/// Generator word from generator bits: 0 -> L, 1 -> R.
Word generator_word(const Bits& bits);

std::string to_string(const Word& w);
/// Parses "LRRL"; throws UsageError on other characters.
Word parse_word(std::string_view text);

}  // namespace sl2pke
