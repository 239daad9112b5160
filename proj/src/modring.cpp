#include "sl2pke/modring.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "sl2pke/errors.hpp"

namespace sl2pke {

namespace {

void require_compatible(const ResidueMatrix& a, const ResidueMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw UsageError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
  }
  if (!(a.modulus() == b.modulus())) {
    throw UsageError(std::string(op) + ": modulus mismatch (2^" + std::to_string(a.modulus().bits()) +
                     " vs 2^" + std::to_string(b.modulus().bits()) + ")");
  }
}

// Below this many limb-multiplications the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelWorkThreshold = 1u << 14;

std::size_t limbs_for(const Modulus& mod) { return (mod.bits() + 63) / 64; }

}  // namespace

Modulus::Modulus(unsigned bits) : bits_(bits) {
  if (bits == 0) throw UsageError("modulus exponent K must be >= 1");
  auto v = std::make_shared<BigInt>();
  mpz_setbit(v->get_mpz_t(), bits);
  value_ = std::move(v);
}

void Modulus::reduce(BigInt& x) const { mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits_); }

BigInt Modulus::reduced(const BigInt& x) const {
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), x.get_mpz_t(), bits_);
  return r;
}

bool Modulus::contains(const BigInt& x) const { return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= bits_ && x < *value_; }

Residue::Residue(BigInt value, Modulus mod) : value_(std::move(value)), mod_(std::move(mod)) { mod_.reduce(value_); }

ResidueMatrix::ResidueMatrix(std::size_t dim, Modulus mod, std::vector<BigInt> entries)
    : dim_(dim), mod_(std::move(mod)), entries_(std::move(entries)) {
  if (dim_ == 0) throw UsageError("matrix dimension must be >= 1");
  if (entries_.size() != dim_ * dim_) {
    throw UsageError("expected " + std::to_string(dim_ * dim_) + " entries, got " + std::to_string(entries_.size()));
  }
  for (auto& e : entries_) mod_.reduce(e);
}

ResidueMatrix ResidueMatrix::identity(std::size_t dim, Modulus mod) {
  std::vector<BigInt> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
  return ResidueMatrix(dim, std::move(mod), std::move(e));
}

ResidueMatrix ResidueMatrix::with_entry(std::size_t row, std::size_t col, const BigInt& value) const {
  if (row >= dim_ || col >= dim_) throw UsageError("with_entry: index out of range");
  auto e = entries_;
  e[row * dim_ + col] = value;
  return ResidueMatrix(dim_, mod_, std::move(e));
}

bool ResidueMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

ResidueMatrix mat_mul(const ResidueMatrix& a, const ResidueMatrix& b) {
  require_compatible(a, b, "mat_mul");
  const std::size_t d = a.dim();
  const Modulus& mod = a.modulus();
  std::vector<BigInt> out(d * d);
  const auto n = static_cast<std::ptrdiff_t>(d * d);
  const std::size_t limbs = limbs_for(mod);
  const bool go_parallel = d * d * d * limbs * limbs >= kParallelWorkThreshold;

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / d;
    const std::size_t j = static_cast<std::size_t>(idx) % d;
    BigInt acc = 0;
    for (std::size_t k = 0; k < d; ++k) mpz_addmul(acc.get_mpz_t(), a(i, k).get_mpz_t(), b(k, j).get_mpz_t());
    mod.reduce(acc);
    out[static_cast<std::size_t>(idx)] = std::move(acc);
  }
  return ResidueMatrix(d, mod, std::move(out));
}

ResidueMatrix mat_mul_serial(const ResidueMatrix& a, const ResidueMatrix& b) {
  require_compatible(a, b, "mat_mul");
  const std::size_t d = a.dim();
  std::vector<BigInt> out(d * d, BigInt(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < d; ++j) out[i * d + j] += aik * b(k, j);
    }
  return ResidueMatrix(d, a.modulus(), std::move(out));
}

ResidueMatrix mat_invert(const ResidueMatrix& a) {
  const std::size_t d = a.dim();
  const Modulus& mod = a.modulus();
  std::vector<BigInt> m(a.entries().begin(), a.entries().end());
  std::vector<BigInt> inv(d * d, BigInt(0));
  for (std::size_t i = 0; i < d; ++i) inv[i * d + i] = 1;
  auto at = [d](std::vector<BigInt>& v, std::size_t r, std::size_t c) -> BigInt& { return v[r * d + c]; };
  const bool go_parallel = d * d * limbs_for(mod) * limbs_for(mod) >= kParallelWorkThreshold;

  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && mpz_even_p(at(m, piv, col).get_mpz_t())) ++piv;
    if (piv == d) throw NotInvertible();
    if (piv != col) {
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(at(m, piv, j), at(m, col, j));
        std::swap(at(inv, piv, j), at(inv, col, j));
      }
    }

    BigInt pinv;
    mpz_invert(pinv.get_mpz_t(), at(m, col, col).get_mpz_t(), mod.value().get_mpz_t());
    for (std::size_t j = col; j < d; ++j) {
      at(m, col, j) *= pinv;
      mod.reduce(at(m, col, j));
    }
    for (std::size_t j = 0; j < d; ++j) {
      at(inv, col, j) *= pinv;
      mod.reduce(at(inv, col, j));
    }

#pragma omp parallel for schedule(static) if (go_parallel)
    for (std::ptrdiff_t sr = 0; sr < static_cast<std::ptrdiff_t>(d); ++sr) {
      const auto r = static_cast<std::size_t>(sr);
      if (r == col || at(m, r, col) == 0) continue;
      const BigInt f = at(m, r, col);
      for (std::size_t j = col; j < d; ++j) {
        mpz_submul(at(m, r, j).get_mpz_t(), f.get_mpz_t(), at(m, col, j).get_mpz_t());
        mod.reduce(at(m, r, j));
      }
      for (std::size_t j = 0; j < d; ++j) {
        mpz_submul(at(inv, r, j).get_mpz_t(), f.get_mpz_t(), at(inv, col, j).get_mpz_t());
        mod.reduce(at(inv, r, j));
      }
    }
  }
  return ResidueMatrix(d, mod, std::move(inv));
}

bool is_invertible(const ResidueMatrix& a) {
  const std::size_t d = a.dim();
  const std::size_t words = (d + 63) / 64;
  std::vector<std::uint64_t> rows(d * words, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (mpz_odd_p(a(i, j).get_mpz_t())) rows[i * words + j / 64] |= std::uint64_t{1} << (j % 64);

  auto bit = [&](std::size_t r, std::size_t c) { return (rows[r * words + c / 64] >> (c % 64)) & 1u; };
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && !bit(piv, col)) ++piv;
    if (piv == d) return false;
    if (piv != col)
      std::swap_ranges(rows.begin() + static_cast<std::ptrdiff_t>(piv * words),
                       rows.begin() + static_cast<std::ptrdiff_t>((piv + 1) * words),
                       rows.begin() + static_cast<std::ptrdiff_t>(col * words));
    for (std::size_t r = col + 1; r < d; ++r)
      if (bit(r, col))
        for (std::size_t w = 0; w < words; ++w) rows[r * words + w] ^= rows[col * words + w];
  }
  return true;
}

Residue determinant(const ResidueMatrix& a) {
  const std::size_t d = a.dim();
  std::vector<BigInt> m(a.entries().begin(), a.entries().end());
  auto at = [&](std::size_t r, std::size_t c) -> BigInt& { return m[r * d + c]; };
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (at(k, k) == 0) {
      std::size_t i = k + 1;
      while (i < d && at(i, k) == 0) ++i;
      if (i == d) return Residue(0, a.modulus());
      for (std::size_t j = 0; j < d; ++j) std::swap(at(i, j), at(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      for (std::size_t j = k + 1; j < d; ++j) {
        BigInt t = at(i, j) * at(k, k);
        mpz_submul(t.get_mpz_t(), at(i, k).get_mpz_t(), at(k, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  BigInt det = at(d - 1, d - 1);
  if (sign < 0) det = -det;
  return Residue(std::move(det), a.modulus());
}

Residue trace(const ResidueMatrix& a) {
  BigInt t = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return Residue(std::move(t), a.modulus());
}

ResidueMatrix mat_conjugate(const ResidueMatrix& s, const ResidueMatrix& s_inv, const ResidueMatrix& m) {
  require_compatible(s, s_inv, "mat_conjugate");
  require_compatible(s, m, "mat_conjugate");
  return mat_mul(mat_mul(s_inv, m), s);
}

std::vector<Residue> sqrt_mod_pow2(const Residue& a) {
  const Modulus& mod = a.modulus();
  const unsigned k = mod.bits();
  if (!a.is_unit()) throw UsageError("sqrt_mod_pow2: only odd residues are supported");

  std::vector<BigInt> roots;
  const unsigned long low3 = mpz_fdiv_ui(a.value().get_mpz_t(), 8);
  if (k == 1) {
    roots = {1};
  } else if (k == 2) {
    if (low3 % 4 == 1) roots = {1, 3};
  } else if (low3 == 1) {
    // x = 1 is a root mod 8. Lift one bit at a time keeping err = x^2 - a,
    // which is divisible by 2^j at step j. If bit j of err is set, adding
    // 2^(j-1) to x clears it: the cross term 2^j*x flips bit j and the square
    // 2^(2j-2) lands at bit j+1 or higher.
    BigInt x = 1;
    BigInt err = 1 - a.value();
    for (unsigned j = 3; j < k; ++j) {
      if (mpz_tstbit(err.get_mpz_t(), j)) {
        BigInt step;
        mpz_mul_2exp(step.get_mpz_t(), x.get_mpz_t(), j);
        err += step;
        mpz_set_ui(step.get_mpz_t(), 0);
        mpz_setbit(step.get_mpz_t(), 2 * j - 2);
        err += step;
        mpz_set_ui(step.get_mpz_t(), 0);
        mpz_setbit(step.get_mpz_t(), j - 1);
        x += step;
      }
    }
    BigInt half = 0;
    mpz_setbit(half.get_mpz_t(), k - 1);
    roots = {x, mod.value() - x, x + half, mod.value() - x + half};
    for (auto& r : roots) mod.reduce(r);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  }

  std::vector<Residue> out;
  out.reserve(roots.size());
  for (auto& r : roots) out.emplace_back(std::move(r), mod);
  return out;
}

}  // namespace sl2pke
