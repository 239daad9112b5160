#include "sl2pke/attacks.hpp"

#include <fmt/format.h>

namespace sl2pke::attacks {

namespace {

ResidueMatrix mat2(const Modulus& mod, BigInt a, BigInt b, BigInt c, BigInt d) {
  return ResidueMatrix(2, mod, {std::move(a), std::move(b), std::move(c), std::move(d)});
}

BigInt inverse(const BigInt& x, const Modulus& mod) {
  BigInt r;
  mpz_invert(r.get_mpz_t(), x.get_mpz_t(), mod.value().get_mpz_t());
  return r;
}

bool is_odd(const BigInt& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

// Candidates for an entry u given u^2 and the linear fallback value: the
// square roots when u^2 is odd, else the linear solution alone.
std::vector<BigInt> entry_candidates(const BigInt& square, const BigInt& linear, const Modulus& mod) {
  std::vector<BigInt> out;
  if (is_odd(square)) {
    for (const auto& r : sqrt_mod_pow2(Residue(square, mod))) out.push_back(r.value());
  } else {
    out.push_back(mod.reduced(linear));
  }
  return out;
}

}  // namespace

const char* to_string(Normalization n) noexcept { return n == Normalization::TopLeft ? "a=1" : "c=1"; }

Outcome<std::vector<RecoveredConjugator>, NoSolution> recover_conjugator_n1(const ResidueMatrix& p0,
                                                                            const ResidueMatrix& p1) {
  if (p0.dim() != 2 || p1.dim() != 2) throw UsageError("n=1 recovery needs 2x2 public matrices");
  if (!(p0.modulus() == p1.modulus())) throw UsageError("public matrices use different moduli");
  const Modulus& mod = p0.modulus();

  // With S = [[a, b], [c, d]] and D = det S:
  //   P0 - I = D^-1 [[-ab, -b^2], [a^2,  ab]]
  //   P1 - I = D^-1 [[ cd,  d^2], [-c^2, -cd]]
  // S only matters up to a unit scalar, so one odd entry of its first column
  // can be set to 1; D, the other first-column entry squared, and the mixed
  // products then follow from single entries.
  const BigInt n0_00 = mod.reduced(p0(0, 0) - 1), n0_01 = p0(0, 1), n0_10 = p0(1, 0);
  const BigInt n1_00 = mod.reduced(p1(0, 0) - 1), n1_01 = p1(0, 1), n1_10 = p1(1, 0);
  const ResidueMatrix l = mat2(mod, 1, 0, 1, 1);
  const ResidueMatrix r = mat2(mod, 1, 1, 0, 1);

  std::vector<RecoveredConjugator> found;
  auto try_candidate = [&](ResidueMatrix s, Normalization norm) {
    if (!is_invertible(s)) return;
    const ResidueMatrix s_inv = mat_invert(s);
    if (mat_conjugate(s, s_inv, l) == p0 && mat_conjugate(s, s_inv, r) == p1)
      found.push_back(RecoveredConjugator{std::move(s), norm, true});
  };

  if (is_odd(n0_10)) {
    // a = 1: n0_10 = 1/D, b = -n0_00 D, c^2 = -n1_10 D, cd = n1_00 D, d = D + bc.
    const BigInt det = inverse(n0_10, mod);
    const BigInt b = mod.reduced(-n0_00 * det);
    const BigInt c_sq = mod.reduced(-n1_10 * det);
    const BigInt cd = mod.reduced(n1_00 * det);
    const BigInt c_linear = (cd - b * c_sq) * n0_10;
    for (const auto& c : entry_candidates(c_sq, c_linear, mod))
      try_candidate(mat2(mod, 1, b, c, det + b * c), Normalization::TopLeft);
  }
  if (found.empty() && is_odd(n1_10)) {
    // c = 1: n1_10 = -1/D, d = n1_00 D, a^2 = n0_10 D, ab = -n0_00 D, b = ad - D.
    const BigInt det = mod.reduced(-inverse(n1_10, mod));
    const BigInt d = mod.reduced(n1_00 * det);
    const BigInt a_sq = mod.reduced(n0_10 * det);
    const BigInt ab = mod.reduced(-n0_00 * det);
    const BigInt a_linear = (a_sq * d - ab) * inverse(det, mod);
    for (const auto& a : entry_candidates(a_sq, a_linear, mod))
      try_candidate(mat2(mod, a, a * d - det, 1, d), Normalization::BottomLeft);
  }

  if (found.empty()) return NoSolution{"no normalization yields a conjugator reproducing P0 and P1"};
  return found;
}

Residue trace_leak(const ResidueMatrix& c) { return trace(c); }

Guess distinguish_deterministic(const PublicKey& pk, const Ciphertext& ct, const Bits& mu0, const Bits& mu1) {
  if (ct.c == encrypt(pk, mu0).c) return Guess::Zero;
  if (ct.c == encrypt(pk, mu1).c) return Guess::One;
  return Guess::Unknown;
}

GameResult play_distinguishing_game(const PublicKey& pk, std::size_t trials, bool masked, RandomSource& rng) {
  const std::size_t lambda = pk.params.lambda;
  if (lambda == 0) throw UsageError("lambda must be >= 1");
  GameResult result;
  result.trials = trials;
  Bits mu0(lambda), mu1(lambda);
  for (std::size_t t = 0; t < trials; ++t) {
    do {
      for (auto& b : mu0) b = rng.next_bit();
      for (auto& b : mu1) b = rng.next_bit();
    } while (mu0 == mu1);
    const std::uint8_t challenge = rng.next_bit();
    const Bits& mu = challenge ? mu1 : mu0;
    const Ciphertext ct = masked ? encrypt_masked(pk, mu, rng) : encrypt(pk, mu);

    std::uint8_t guess = 0;
    switch (distinguish_deterministic(pk, ct, mu0, mu1)) {
      case Guess::Zero:
        guess = 0;
        break;
      case Guess::One:
        guess = 1;
        break;
      case Guess::Unknown:
        ++result.unknown;
        guess = rng.next_bit();
        break;
    }
    if (guess == challenge) ++result.wins;
  }
  return result;
}

Ciphertext extend_ciphertext(const PublicKey& pk, const Ciphertext& ct, std::uint8_t bit) {
  return Ciphertext{ct.params, mat_mul(ct.c, pk.generator(bit)), ct.mask};
}

Ciphertext strip_last_bit(const PublicKey& pk, const Ciphertext& ct, std::uint8_t guess) {
  return Ciphertext{ct.params, mat_mul(ct.c, mat_invert(pk.generator(guess))), ct.mask};
}

}  // namespace sl2pke::attacks
