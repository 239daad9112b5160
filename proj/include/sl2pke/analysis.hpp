#pragma once

// Statistics of the trace and sup-norm over words of a fixed length k.
//
// Words come either from an exhaustive depth-first walk of the Cayley tree
// (one right-multiplication per node) or from uniform sampling. Both sources
// split their work into a fixed set of tasks that is independent of the
// thread count:
//   exhaustive: 2^p subtrees, one per length-p prefix, p = min(k, 10);
//   sampled:    chunks of 4096 draws, chunk c drawing from rng.fork(c).
// Each thread keeps a private accumulator; they are merged once at the end.
// Results are therefore identical between the OpenMP and serial kernels.

#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sl2pke/errors.hpp"
#include "sl2pke/monoid.hpp"
#include "sl2pke/random.hpp"

namespace sl2pke::analysis {

/// Exhaustive walks beyond this length are refused; use sampling instead.
inline constexpr unsigned kExhaustiveMaxLength = 26;
/// Sampled words keep every entry (<= F(k+1)) and trace below 2^64 up to here.
inline constexpr unsigned kSampledMaxLength = 90;
inline constexpr unsigned kPrefixDepth = 10;
inline constexpr std::uint64_t kSampleChunk = 4096;

struct SampleSpec {
  enum class Kind : std::uint8_t { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t samples = 0;

  static SampleSpec exhaustive() { return {Kind::Exhaustive, 0}; }
  static SampleSpec sampled(std::uint64_t n) { return {Kind::Sampled, n}; }
  bool is_exhaustive() const { return kind == Kind::Exhaustive; }
};

/// Throws UsageError if (k, spec) is outside the supported range.
void check_source(unsigned k, const SampleSpec& spec);

/// Number of words visited: 2^k or the sample count.
std::uint64_t source_size(unsigned k, const SampleSpec& spec);

namespace detail {

template <class Leaf>
void dfs(const SmallMatrix& m, std::uint64_t path, unsigned depth, Leaf& leaf) {
  if (depth == 0) {
    leaf(m, path);
    return;
  }
  SmallMatrix left = m;
  right_multiply(left, Letter::L);
  dfs(left, path << 1, depth - 1, leaf);
  SmallMatrix right = m;
  right_multiply(right, Letter::R);
  dfs(right, (path << 1) | 1u, depth - 1, leaf);
}

inline unsigned prefix_depth(unsigned k) { return k < kPrefixDepth ? k : kPrefixDepth; }

inline std::uint64_t task_count(unsigned k, const SampleSpec& spec) {
  if (spec.is_exhaustive()) return std::uint64_t{1} << prefix_depth(k);
  return (spec.samples + kSampleChunk - 1) / kSampleChunk;
}

/// Runs one task, calling leaf(matrix, path) per word. For exhaustive tasks
/// path holds the letters MSB-first (bit k-1 is the first letter, 1 = R);
/// sampled words report path 0.
template <class Leaf>
void run_task(unsigned k, const SampleSpec& spec, const RandomSource& rng, std::uint64_t task, Leaf& leaf) {
  if (spec.is_exhaustive()) {
    const unsigned p = prefix_depth(k);
    SmallMatrix m;
    for (unsigned i = 0; i < p; ++i) right_multiply(m, ((task >> (p - 1 - i)) & 1u) ? Letter::R : Letter::L);
    dfs(m, task, k - p, leaf);
    return;
  }
  RandomSource r = rng.fork(task);
  const std::uint64_t begin = task * kSampleChunk;
  const std::uint64_t count = std::min(kSampleChunk, spec.samples - begin);
  for (std::uint64_t i = 0; i < count; ++i) {
    SmallMatrix m;
    for (unsigned j = 0; j < k; ++j) right_multiply(m, r.next_bit() ? Letter::R : Letter::L);
    leaf(m, std::uint64_t{0});
  }
}

}  // namespace detail

/// Folds visit(acc, matrix, path) over every word of the source using OpenMP.
/// Acc must be copyable and provide merge(const Acc&), commutative and associative.
template <class Acc, class Visit>
Acc accumulate(unsigned k, const SampleSpec& spec, const RandomSource& rng, const Acc& zero, Visit visit) {
  check_source(k, spec);
  const auto tasks = static_cast<std::int64_t>(detail::task_count(k, spec));
  std::vector<Acc> partial(static_cast<std::size_t>(omp_get_max_threads()), zero);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < tasks; ++t) {
    Acc& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
    auto leaf = [&acc, &visit](const SmallMatrix& m, std::uint64_t path) { visit(acc, m, path); };
    detail::run_task(k, spec, rng, static_cast<std::uint64_t>(t), leaf);
  }
  Acc total = zero;
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Single-threaded reference for accumulate(). Exhaustive sources are walked
/// as one plain recursive DFS from the root instead of per-prefix tasks.
template <class Acc, class Visit>
Acc accumulate_serial(unsigned k, const SampleSpec& spec, const RandomSource& rng, const Acc& zero, Visit visit) {
  check_source(k, spec);
  Acc acc = zero;
  auto leaf = [&acc, &visit](const SmallMatrix& m, std::uint64_t path) { visit(acc, m, path); };
  if (spec.is_exhaustive()) {
    detail::dfs(SmallMatrix{}, 0, k, leaf);
  } else {
    const std::uint64_t tasks = detail::task_count(k, spec);
    for (std::uint64_t t = 0; t < tasks; ++t) detail::run_task(k, spec, rng, t, leaf);
  }
  return acc;
}

enum class Statistic : std::uint8_t { Trace, SupNorm };

const char* to_string(Statistic s) noexcept;

inline std::uint64_t statistic_of(Statistic s, const SmallMatrix& m) {
  return s == Statistic::Trace ? mat_trace(m) : sup_norm(m);
}

/// Equal-width bins over the closed range [lo, hi]; the top bin includes hi.
/// A degenerate range (lo == hi) becomes one bin [lo - 0.5, lo + 0.5].
class Binning {
 public:
  Binning(std::uint64_t lo, std::uint64_t hi, std::size_t bins);

  std::size_t bins() const noexcept { return bins_; }
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::size_t index(std::uint64_t x) const;
  std::vector<double> edges() const;

 private:
  std::uint64_t lo_, hi_;
  std::size_t bins_;
};

struct Histogram {
  Statistic statistic = Statistic::Trace;
  unsigned k = 0;
  SampleSpec spec;
  std::uint64_t min = 0, max = 0;
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
};

struct JointHistogram {
  unsigned k = 0;
  SampleSpec spec;
  std::uint64_t trace_min = 0, trace_max = 0, supnorm_min = 0, supnorm_max = 0;
  std::vector<double> trace_edges, supnorm_edges;
  std::vector<std::uint64_t> counts;  // trace-major: counts[ti * supnorm_bins + si]
  /// Median of trace / sup-norm, resolved to 2^-19.
  double median_ratio = 0.0;

  std::size_t trace_bins() const { return trace_edges.size() - 1; }
  std::size_t supnorm_bins() const { return supnorm_edges.size() - 1; }
  std::uint64_t total() const;
};

/// Histogram of one statistic. With `range`, bins span that range instead of
/// the observed min..max (values outside it are a UsageError).
Histogram statistic_histogram(Statistic stat, unsigned k, std::size_t bins, const SampleSpec& spec,
                              const RandomSource& rng,
                              std::optional<std::pair<std::uint64_t, std::uint64_t>> range = std::nullopt);

Histogram trace_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng);
Histogram supnorm_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng);
JointHistogram joint_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng);

/// Total-variation distance between two histograms over the same edges.
double total_variation(const Histogram& a, const Histogram& b);

/// Words of length k whose product has trace 2 (exhaustive), in lexicographic L < R order.
std::vector<Word> parabolic_census(unsigned k);

struct BandSample {
  Word word;
  std::uint64_t attempts;
};

struct Exhausted {
  std::uint64_t attempts;
};

inline constexpr std::uint64_t kNoNormCap = std::numeric_limits<std::uint64_t>::max();

/// Rejection-samples uniform words of length k until t0 <= trace <= t1 and
/// sup-norm <= norm_cap.
Outcome<BandSample, Exhausted> sample_word_trace_band(unsigned k, std::uint64_t t0, std::uint64_t t1,
                                                      std::uint64_t norm_cap, std::uint64_t max_attempts,
                                                      RandomSource& rng);

/// Header "bin_lo,bin_hi,count" then one row per bin.
std::string histogram_to_csv(const Histogram& h);
/// Header "t_lo,t_hi,s_lo,s_hi,count" then one row per nonempty cell, trace-major.
std::string histogram_to_csv(const JointHistogram& h);

struct CsvRow {
  std::vector<double> edges;
  std::uint64_t count = 0;
};

/// Parses either CSV layout above; throws ParseError on malformed input.
std::vector<CsvRow> parse_histogram_csv(std::string_view text);

}  // namespace sl2pke::analysis
