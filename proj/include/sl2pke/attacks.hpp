#pragma once

// Attacks on weak variants of the scheme:
//  - conjugator recovery when n = 1 and the generators are exactly L and R;
//  - the trace of a ciphertext, which conjugation does not hide;
//  - the two-message distinguisher against deterministic encryption;
//  - appending or removing a trailing generator (malleability).

#include <cstdint>
#include <string>
#include <vector>

#include "sl2pke/errors.hpp"
#include "sl2pke/scheme.hpp"

namespace sl2pke::attacks {

enum class Normalization : std::uint8_t { TopLeft, BottomLeft };  // a = 1 or c = 1

const char* to_string(Normalization n) noexcept;

struct RecoveredConjugator {
  ResidueMatrix s;
  Normalization normalization;
  bool verified;
};

struct NoSolution {
  std::string detail;
};

/// Given P0 = S^-1 L S and P1 = S^-1 R S (2x2, mod 2^K), finds S up to a unit
/// scalar. Only candidates reproducing both P0 and P1 are returned.
Outcome<std::vector<RecoveredConjugator>, NoSolution> recover_conjugator_n1(const ResidueMatrix& p0,
                                                                            const ResidueMatrix& p1);

/// trace(C) mod 2^K.
Residue trace_leak(const ResidueMatrix& c);

enum class Guess : std::uint8_t { Zero, One, Unknown };

/// Re-encrypts both candidates and compares with the challenge matrix.
Guess distinguish_deterministic(const PublicKey& pk, const Ciphertext& ct, const Bits& mu0, const Bits& mu1);

struct GameResult {
  std::size_t trials = 0;
  std::size_t wins = 0;
  std::size_t unknown = 0;  // the distinguisher could not decide and guessed at random

  double win_rate() const { return trials ? static_cast<double>(wins) / static_cast<double>(trials) : 0.0; }
};

/// Plays the two-message game `trials` times against pk: random distinct
/// messages, a random challenge bit, and plain or masked encryption.
GameResult play_distinguishing_game(const PublicKey& pk, std::size_t trials, bool masked, RandomSource& rng);

/// C * P_bit.
Ciphertext extend_ciphertext(const PublicKey& pk, const Ciphertext& ct, std::uint8_t bit);

/// C * P_guess^-1.
Ciphertext strip_last_bit(const PublicKey& pk, const Ciphertext& ct, std::uint8_t guess);

}  // namespace sl2pke::attacks
