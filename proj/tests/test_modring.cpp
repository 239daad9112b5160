#include <doctest.h>

#include <algorithm>

#include "sl2pke/errors.hpp"
#include "sl2pke/modring.hpp"
#include "sl2pke/scheme.hpp"
#include "support.hpp"

using namespace sl2pke;
using sl2pke::test::mat;

namespace {

bool entries_in_range(const ResidueMatrix& m) {
  const auto& mod = m.modulus();
  return std::all_of(m.entries().begin(), m.entries().end(), [&](const BigInt& x) { return mod.contains(x); });
}

std::vector<std::vector<bool>> mod2_rows(const ResidueMatrix& m) {
  std::vector<std::vector<bool>> rows(m.dim(), std::vector<bool>(m.dim()));
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) rows[r][c] = mpz_odd_p(m(r, c).get_mpz_t()) != 0;
  return rows;
}

}  // namespace

TEST_CASE("modulus reduces negatives and large values into range") {
  const Modulus mod(8);
  CHECK(mod.reduced(BigInt(-1)) == 255);
  CHECK(mod.reduced(BigInt(256 * 3 + 7)) == 7);
  CHECK(mod.contains(BigInt(255)));
  CHECK_FALSE(mod.contains(BigInt(256)));
  CHECK_FALSE(mod.contains(BigInt(-1)));
  CHECK_THROWS_AS(Modulus(0), UsageError);
}

TEST_CASE("mat_mul examples") {
  const auto l = mat(4, 2, {1, 0, 1, 1});
  const auto r = mat(4, 2, {1, 1, 0, 1});
  CHECK(mat_mul(l, r) == mat(4, 2, {1, 1, 1, 2}));

  auto rng = test::rng_for("mat_mul identity");
  const Modulus mod(64);
  const auto a = sample_uniform_matrix(5, mod, rng);
  CHECK(mat_mul(ResidueMatrix::identity(5, mod), a) == a);
  CHECK(mat_mul(a, ResidueMatrix::identity(5, mod)) == a);

  const auto m15 = mat(4, 2, {15, 0, 0, 1});
  CHECK(mat_mul(m15, m15).is_identity());
}

TEST_CASE("mat_mul rejects mismatched operands") {
  CHECK_THROWS_AS(mat_mul(mat(8, 2, {1, 0, 0, 1}), mat(8, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})), UsageError);
  CHECK_THROWS_AS(mat_mul(mat(8, 2, {1, 0, 0, 1}), mat(9, 2, {1, 0, 0, 1})), UsageError);
  CHECK_THROWS_AS(ResidueMatrix(2, Modulus(8), {BigInt(1)}), UsageError);
}

TEST_CASE("parallel and serial products agree") {
  auto rng = test::rng_for("parallel vs serial");
  for (std::size_t dim : {1u, 2u, 7u, 32u}) {
    const Modulus mod(dim == 32 ? 1024 : 200);
    const auto a = sample_uniform_matrix(dim, mod, rng);
    const auto b = sample_uniform_matrix(dim, mod, rng);
    CHECK(mat_mul(a, b) == mat_mul_serial(a, b));
  }
}

TEST_CASE("mat_mul is associative and stays in range") {
  auto rng = test::rng_for("associativity");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng.uniform_below(8);
    const Modulus mod(1 + static_cast<unsigned>(rng.uniform_below(300)));
    const auto a = sample_uniform_matrix(dim, mod, rng);
    const auto b = sample_uniform_matrix(dim, mod, rng);
    const auto c = sample_uniform_matrix(dim, mod, rng);
    const auto ab_c = mat_mul(mat_mul(a, b), c);
    CHECK(ab_c == mat_mul(a, mat_mul(b, c)));
    CHECK(entries_in_range(ab_c));
  }
}

TEST_CASE("mat_invert examples") {
  const Modulus mod(8);
  CHECK(mat_invert(ResidueMatrix::identity(3, mod)).is_identity());
  CHECK(mat_invert(mat(8, 2, {1, 1, 0, 1})) == mat(8, 2, {1, 255, 0, 1}));
  CHECK_THROWS_AS(mat_invert(mat(8, 2, {2, 0, 0, 1})), NotInvertible);
  CHECK_THROWS_AS(mat_invert(mat(8, 2, {3, 5, 3, 5})), NotInvertible);
}

TEST_CASE("mat_invert of a random 8x8 matrix modulo 2^4096") {
  auto rng = test::rng_for("invert 8x8 4096");
  const Modulus mod(4096);
  const auto a = sample_invertible(8, mod, rng).first;
  const auto b = mat_invert(a);
  CHECK(mat_mul(a, b).is_identity());
  CHECK(mat_mul(b, a).is_identity());
  CHECK(entries_in_range(b));
}

TEST_CASE("inverse property over random sizes and moduli") {
  auto rng = test::rng_for("inverse property");
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + rng.uniform_below(12);
    const Modulus mod(1 + static_cast<unsigned>(rng.uniform_below(512)));
    const auto a = sample_uniform_matrix(dim, mod, rng);
    if (is_invertible(a)) {
      const auto b = mat_invert(a);
      CHECK(mat_mul(a, b).is_identity());
      CHECK(mat_mul(b, a).is_identity());
    } else {
      CHECK_THROWS_AS(mat_invert(a), NotInvertible);
    }
  }
}

TEST_CASE("is_invertible examples") {
  CHECK(is_invertible(ResidueMatrix::identity(4, Modulus(16))));
  CHECK_FALSE(is_invertible(mat(16, 2, {2, 0, 0, 1})));
  CHECK_FALSE(is_invertible(mat(16, 3, {1, 2, 3, 1, 2, 3, 7, 7, 7})));
}

TEST_CASE("invertibility: GF(2) test, Bareiss determinant, elimination and rank oracle agree") {
  auto rng = test::rng_for("invertibility routes");
  int invertible = 0, singular = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + rng.uniform_below(32);
    const Modulus mod(trial % 10 == 0 ? 4096 : 1 + static_cast<unsigned>(rng.uniform_below(128)));
    const auto a = sample_uniform_matrix(dim, mod, rng);
    const bool via_gf2 = is_invertible(a);
    const bool via_det = determinant(a).is_unit();
    const bool via_rank = test::gf2_rank(mod2_rows(a)) == dim;
    bool via_elim = true;
    try {
      (void)mat_invert(a);
    } catch (const NotInvertible&) {
      via_elim = false;
    }
    CHECK(via_gf2 == via_det);
    CHECK(via_gf2 == via_rank);
    CHECK(via_gf2 == via_elim);
    (via_gf2 ? invertible : singular)++;
  }
  CHECK(invertible > 0);
  CHECK(singular > 0);
}

TEST_CASE("determinant matches cofactor expansion on small matrices") {
  auto rng = test::rng_for("det 3x3");
  for (int trial = 0; trial < 20; ++trial) {
    const Modulus mod(32);
    const auto m = sample_uniform_matrix(3, mod, rng);
    const BigInt expect = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                          m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                          m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    CHECK(determinant(m).value() == mod.reduced(expect));
  }
}

TEST_CASE("sqrt_mod_pow2 examples") {
  auto values = [](const std::vector<Residue>& roots) {
    std::vector<long> out;
    for (const auto& r : roots) out.push_back(r.value().get_si());
    return out;
  };
  CHECK(values(sqrt_mod_pow2(Residue(1, Modulus(3)))) == std::vector<long>{1, 3, 5, 7});
  CHECK(values(sqrt_mod_pow2(Residue(9, Modulus(4)))) == std::vector<long>{3, 5, 11, 13});
  CHECK(sqrt_mod_pow2(Residue(3, Modulus(3))).empty());
  CHECK(values(sqrt_mod_pow2(Residue(1, Modulus(1)))) == std::vector<long>{1});
  CHECK(values(sqrt_mod_pow2(Residue(1, Modulus(2)))) == std::vector<long>{1, 3});
  CHECK(sqrt_mod_pow2(Residue(3, Modulus(2))).empty());
  CHECK_THROWS_AS(sqrt_mod_pow2(Residue(4, Modulus(8))), UsageError);
}

TEST_CASE("sqrt_mod_pow2 equals brute force for K <= 16") {
  for (unsigned k = 1; k <= 16; ++k) {
    const unsigned long m = 1ul << k;
    // Squares of every residue, bucketed by value.
    std::vector<std::vector<long>> roots_of(m);
    for (unsigned long x = 0; x < m; ++x) roots_of[(x * x) & (m - 1)].push_back(static_cast<long>(x));
    for (unsigned long a = 1; a < m; a += 2) {
      std::vector<long> got;
      for (const auto& r : sqrt_mod_pow2(Residue(BigInt(a), Modulus(k)))) got.push_back(r.value().get_si());
      if (got != roots_of[a]) {
        FAIL_CHECK("K=" << k << " a=" << a);
      }
    }
  }
}

TEST_CASE("sqrt_mod_pow2 roots square back at large K") {
  auto rng = test::rng_for("sqrt large");
  for (unsigned k : {64u, 128u, 256u, 4096u}) {
    const Modulus mod(k);
    const BigInt x = rng.uniform_bits(k) | 1;
    const Residue a(mod.reduced(x * x), mod);
    const auto roots = sqrt_mod_pow2(a);
    REQUIRE(roots.size() == 4);
    for (const auto& r : roots) CHECK(mod.reduced(r.value() * r.value()) == a.value());
    CHECK(std::any_of(roots.begin(), roots.end(), [&](const Residue& r) { return r.value() == mod.reduced(x); }));
  }
}

TEST_CASE("mat_conjugate examples") {
  auto rng = test::rng_for("conjugate");
  const Modulus mod(128);
  const auto m = sample_uniform_matrix(4, mod, rng);
  const auto id = ResidueMatrix::identity(4, mod);
  CHECK(mat_conjugate(id, id, m) == m);

  for (int trial = 0; trial < 10; ++trial) {
    const auto s = sample_invertible(4, mod, rng).first;
    const auto s_inv = mat_invert(s);
    const auto c = mat_conjugate(s, s_inv, m);
    CHECK(c == mat_mul(mat_mul(s_inv, m), s));
    CHECK(trace(c) == trace(m));
    CHECK(mat_conjugate(s_inv, s, c) == m);
  }
  CHECK_THROWS_AS(mat_conjugate(id, id, ResidueMatrix::identity(2, mod)), UsageError);
}
