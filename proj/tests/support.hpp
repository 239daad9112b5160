#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sl2pke/modring.hpp"
#include "sl2pke/monoid.hpp"
#include "sl2pke/random.hpp"

namespace sl2pke::test {

inline RandomSource rng_for(const std::string& tag) {
  std::string hex;
  for (unsigned char ch : tag) {
    static const char* digits = "0123456789abcdef";
    hex += digits[ch >> 4];
    hex += digits[ch & 15];
  }
  return RandomSource::from_seed_hex(hex.substr(0, 64));
}

inline ResidueMatrix mat(unsigned bits, std::size_t dim, std::vector<long> values) {
  std::vector<BigInt> entries;
  for (long v : values) entries.emplace_back(v);
  return ResidueMatrix(dim, Modulus(bits), std::move(entries));
}

/// Naive product of letter matrices, independent of right_multiply.
inline NatMatrix naive_product(const Word& w) {
  BigInt a = 1, b = 0, c = 0, d = 1;
  for (Letter x : w) {
    const BigInt xa = 1, xb = x == Letter::R ? 1 : 0, xc = x == Letter::L ? 1 : 0, xd = 1;
    BigInt na = a * xa + b * xc, nb = a * xb + b * xd, nc = c * xa + d * xc, nd = c * xb + d * xd;
    a = na, b = nb, c = nc, d = nd;
  }
  return NatMatrix{a, b, c, d};
}

/// Word number `index` of length k, first letter from the top bit; 1 = R.
inline Word word_from_index(std::uint64_t index, unsigned k) {
  Word w(k);
  for (unsigned i = 0; i < k; ++i) w[i] = ((index >> (k - 1 - i)) & 1u) ? Letter::R : Letter::L;
  return w;
}

inline Word random_word(RandomSource& rng, std::size_t len) {
  Word w(len);
  for (auto& x : w) x = rng.next_bit() ? Letter::R : Letter::L;
  return w;
}

inline Bits random_bits(RandomSource& rng, std::size_t len) {
  Bits b(len);
  for (auto& x : b) x = rng.next_bit();
  return b;
}

/// Rank of a 0/1 matrix over GF(2), by plain row reduction on bool vectors.
inline std::size_t gf2_rank(std::vector<std::vector<bool>> rows) {
  std::size_t rank = 0;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot][col]) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][col])
        for (std::size_t c = 0; c < n; ++c) rows[r][c] = rows[r][c] != rows[rank][c];
    ++rank;
  }
  return rank;
}

}  // namespace sl2pke::test
