#pragma once

// Arithmetic on residues and square matrices modulo m = 2^K.
//
// Values are immutable; every operation returns a fresh result, so shared
// matrices may be read from any number of threads. Nothing here is
// constant-time.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sl2pke {

using BigInt = mpz_class;

class Modulus {
 public:
  explicit Modulus(unsigned bits);

  unsigned bits() const noexcept { return bits_; }
  const BigInt& value() const noexcept { return *value_; }

  /// Reduce in place into [0, 2^K); negative inputs wrap.
  void reduce(BigInt& x) const;
  BigInt reduced(const BigInt& x) const;
  bool contains(const BigInt& x) const;

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.bits_ == b.bits_; }

 private:
  unsigned bits_;
  std::shared_ptr<const BigInt> value_;
};

class Residue {
 public:
  Residue(BigInt value, Modulus mod);

  const BigInt& value() const noexcept { return value_; }
  const Modulus& modulus() const noexcept { return mod_; }
  bool is_unit() const { return mpz_odd_p(value_.get_mpz_t()) != 0; }

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.mod_ == b.mod_ && a.value_ == b.value_;
  }

 private:
  BigInt value_;
  Modulus mod_;
};

/// Square d x d matrix over Z/2^K, row-major.
class ResidueMatrix {
 public:
  /// Entries are reduced into [0, 2^K). Throws UsageError if entries.size() != dim*dim.
  ResidueMatrix(std::size_t dim, Modulus mod, std::vector<BigInt> entries);

  static ResidueMatrix identity(std::size_t dim, Modulus mod);

  std::size_t dim() const noexcept { return dim_; }
  const Modulus& modulus() const noexcept { return mod_; }
  const BigInt& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const BigInt> entries() const noexcept { return entries_; }
  Residue at(std::size_t row, std::size_t col) const { return Residue((*this)(row, col), mod_); }

  /// Copy with one entry replaced (reduced).
  ResidueMatrix with_entry(std::size_t row, std::size_t col, const BigInt& value) const;

  bool is_identity() const;

  friend bool operator==(const ResidueMatrix& a, const ResidueMatrix& b) {
    return a.dim_ == b.dim_ && a.mod_ == b.mod_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_;
  Modulus mod_;
  std::vector<BigInt> entries_;
};

/// A*B mod 2^K. Output entries are computed in parallel (OpenMP).
ResidueMatrix mat_mul(const ResidueMatrix& a, const ResidueMatrix& b);

/// Single-threaded reference for mat_mul; kept for tests and the kernel benchmark.
ResidueMatrix mat_mul_serial(const ResidueMatrix& a, const ResidueMatrix& b);

/// Inverse via Gauss-Jordan elimination with odd pivots. Throws NotInvertible.
ResidueMatrix mat_invert(const ResidueMatrix& a);

/// det(A) is odd, i.e. A mod 2 is nonsingular over GF(2).
bool is_invertible(const ResidueMatrix& a);

/// det(A) mod 2^K, from a fraction-free (Bareiss) elimination over Z on the
/// canonical lifts. Independent of the odd-pivot elimination used by mat_invert.
Residue determinant(const ResidueMatrix& a);

Residue trace(const ResidueMatrix& a);

/// Sinv * M * S mod 2^K. Sinv is trusted to be the inverse of S.
ResidueMatrix mat_conjugate(const ResidueMatrix& s, const ResidueMatrix& s_inv, const ResidueMatrix& m);

/// All x in [0, 2^K) with x^2 = a mod 2^K, ascending. Requires a odd (UsageError otherwise).
/// For K >= 3 the set is empty unless a = 1 mod 8, and has four elements otherwise.
std::vector<Residue> sqrt_mod_pow2(const Residue& a);

}  // namespace sl2pke
