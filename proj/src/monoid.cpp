#include "sl2pke/monoid.hpp"

#include <algorithm>

namespace sl2pke {

namespace {

void require_generator_pair(const Word& g0, const Word& g1) {
  if (g0.empty() || g1.empty()) throw UsageError("generator words must be nonempty");
  if (g0.size() != g1.size()) throw UsageError("generator words must have equal length");
  if (g0 == g1) throw UsageError("generator words must differ");
}

bool is_identity(const NatMatrix& m) { return m.a == 1 && m.b == 0 && m.c == 0 && m.d == 1; }

}  // namespace

NatMatrix word_to_matrix(const Word& w) {
  NatMatrix m;
  for (Letter x : w) right_multiply(m, x);
  return m;
}

const char* to_string(FactorError e) noexcept {
  switch (e) {
    case FactorError::NegativeEntry:
      return "negative entry";
    case FactorError::EarlyIdentity:
      return "identity reached early";
    case FactorError::Leftover:
      return "not the identity after expected length";
  }
  return "unknown";
}

Outcome<Word, FactorError> factor(NatMatrix m, std::size_t expected_len) {
  Word out;
  out.reserve(expected_len);
  for (std::size_t step = 0; step < expected_len; ++step) {
    if (is_identity(m)) return FactorError::EarlyIdentity;
    if (sgn(m.c) > 0 && m.a <= m.c) {
      // L^-1 M = [[a, b], [c - a, d - b]]
      if (m.d < m.b) return FactorError::NegativeEntry;
      m.c -= m.a;
      m.d -= m.b;
      out.push_back(Letter::L);
    } else {
      // R^-1 M = [[a - c, b - d], [c, d]]
      if (m.a < m.c || m.b < m.d) return FactorError::NegativeEntry;
      m.a -= m.c;
      m.b -= m.d;
      out.push_back(Letter::R);
    }
  }
  if (!is_identity(m)) return FactorError::Leftover;
  return out;
}

BigInt entry_bound_exact(unsigned k) {
  BigInt f;
  mpz_fib_ui(f.get_mpz_t(), k + 1);
  return f;
}

Word bits_to_word(const Bits& bits, const Word& g0, const Word& g1) {
  require_generator_pair(g0, g1);
  Word w;
  w.reserve(bits.size() * g0.size());
  for (auto bit : bits) {
    const Word& g = bit ? g1 : g0;
    w.insert(w.end(), g.begin(), g.end());
  }
  return w;
}

std::optional<Bits> word_to_bits(const Word& w, const Word& g0, const Word& g1) {
  require_generator_pair(g0, g1);
  const std::size_t l = g0.size();
  if (w.size() % l != 0) return std::nullopt;
  Bits bits;
  bits.reserve(w.size() / l);
  for (auto it = w.begin(); it != w.end(); it += static_cast<std::ptrdiff_t>(l)) {
    if (std::equal(g0.begin(), g0.end(), it)) {
      bits.push_back(0);
    } else if (std::equal(g1.begin(), g1.end(), it)) {
      bits.push_back(1);
    } else {
      return std::nullopt;
    }
  }
  return bits;
}

Word generator_word(const Bits& bits) {
  Word w;
  w.reserve(bits.size());
  for (auto b : bits) w.push_back(b ? Letter::R : Letter::L);
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s.push_back(x == Letter::L ? 'L' : 'R');
  return s;
}

Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char ch : text) {
    if (ch == 'L') {
      w.push_back(Letter::L);
    } else if (ch == 'R') {
      w.push_back(Letter::R);
    } else {
      throw UsageError(std::string("not a letter of {L,R}: '") + ch + "'");
    }
  }
  return w;
}

}  // namespace sl2pke
