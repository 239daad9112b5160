#include "sl2pke/analysis.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

namespace sl2pke::analysis {

namespace {

struct MinMax {
  std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t hi = 0;

  void add(std::uint64_t x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void merge(const MinMax& o) {
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }
};

struct Counts {
  std::vector<std::uint64_t> counts;

  void merge(const Counts& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  }
};

struct PairMinMax {
  MinMax trace, supnorm;

  void merge(const PairMinMax& o) {
    trace.merge(o.trace);
    supnorm.merge(o.supnorm);
  }
};

// trace/supnorm lies in (0, 2]; bucket q = floor(ratio * 2^19).
constexpr unsigned kRatioShift = 19;
constexpr std::size_t kRatioBuckets = (std::size_t{2} << kRatioShift) + 1;

struct JointCounts {
  std::vector<std::uint64_t> cells;
  std::vector<std::uint64_t> ratio;

  void merge(const JointCounts& o) {
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += o.cells[i];
    for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] += o.ratio[i];
  }
};

struct Paths {
  std::vector<std::uint64_t> paths;

  void merge(const Paths& o) { paths.insert(paths.end(), o.paths.begin(), o.paths.end()); }
};

void require_bins(std::size_t bins) {
  if (bins == 0) throw UsageError("bins must be >= 1");
}

void require_exhaustive_length(unsigned k) {
  if (k > kExhaustiveMaxLength)
    throw UsageError(fmt::format("exhaustive enumeration is limited to k <= {} (2^{} words); use sampled mode",
                                 kExhaustiveMaxLength, kExhaustiveMaxLength));
}

Word word_from_path(std::uint64_t path, unsigned k) {
  Word w(k);
  for (unsigned i = 0; i < k; ++i) w[i] = ((path >> (k - 1 - i)) & 1u) ? Letter::R : Letter::L;
  return w;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, "count", fmt::format("bad count '{}'", s));
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, "edge", fmt::format("bad number '{}'", s));
  return v;
}

}  // namespace

void check_source(unsigned k, const SampleSpec& spec) {
  if (spec.is_exhaustive()) {
    require_exhaustive_length(k);
  } else {
    if (spec.samples == 0) throw UsageError("sampled mode needs at least one sample");
    if (k > kSampledMaxLength)
      throw UsageError(fmt::format("sampled mode is limited to k <= {} (64-bit entries)", kSampledMaxLength));
  }
}

std::uint64_t source_size(unsigned k, const SampleSpec& spec) {
  return spec.is_exhaustive() ? std::uint64_t{1} << k : spec.samples;
}

const char* to_string(Statistic s) noexcept { return s == Statistic::Trace ? "trace" : "supnorm"; }

Binning::Binning(std::uint64_t lo, std::uint64_t hi, std::size_t bins) : lo_(lo), hi_(hi), bins_(bins) {
  require_bins(bins);
  if (hi < lo) throw UsageError("binning range is empty");
  if (lo == hi) bins_ = 1;
}

std::size_t Binning::index(std::uint64_t x) const {
  if (x < lo_ || x > hi_) throw UsageError(fmt::format("value {} outside binning range [{}, {}]", x, lo_, hi_));
  if (lo_ == hi_) return 0;
  const unsigned __int128 scaled = static_cast<unsigned __int128>(x - lo_) * bins_ / (hi_ - lo_);
  return std::min(static_cast<std::size_t>(scaled), bins_ - 1);
}

std::vector<double> Binning::edges() const {
  if (lo_ == hi_) return {static_cast<double>(lo_) - 0.5, static_cast<double>(lo_) + 0.5};
  std::vector<double> e(bins_ + 1);
  const long double width = static_cast<long double>(hi_ - lo_) / static_cast<long double>(bins_);
  for (std::size_t i = 0; i <= bins_; ++i) e[i] = static_cast<double>(static_cast<long double>(lo_) + width * i);
  e[bins_] = static_cast<double>(hi_);
  return e;
}

std::uint64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::uint64_t JointHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram statistic_histogram(Statistic stat, unsigned k, std::size_t bins, const SampleSpec& spec,
                              const RandomSource& rng, std::optional<std::pair<std::uint64_t, std::uint64_t>> range) {
  require_bins(bins);
  const MinMax observed = accumulate(k, spec, rng, MinMax{}, [stat](MinMax& acc, const SmallMatrix& m, std::uint64_t) {
    acc.add(statistic_of(stat, m));
  });
  std::uint64_t lo = observed.lo, hi = observed.hi;
  if (range) {
    if (observed.lo < range->first || observed.hi > range->second)
      throw UsageError(fmt::format("observed values [{}, {}] fall outside the requested range [{}, {}]", observed.lo,
                                   observed.hi, range->first, range->second));
    std::tie(lo, hi) = *range;
  }
  const Binning binning(lo, hi, bins);
  const Counts counts = accumulate(k, spec, rng, Counts{std::vector<std::uint64_t>(binning.bins(), 0)},
                                   [stat, &binning](Counts& acc, const SmallMatrix& m, std::uint64_t) {
                                     ++acc.counts[binning.index(statistic_of(stat, m))];
                                   });
  return Histogram{stat, k, spec, observed.lo, observed.hi, binning.edges(), counts.counts};
}

Histogram trace_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng) {
  return statistic_histogram(Statistic::Trace, k, bins, spec, rng);
}

Histogram supnorm_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng) {
  return statistic_histogram(Statistic::SupNorm, k, bins, spec, rng);
}

JointHistogram joint_histogram(unsigned k, std::size_t bins, const SampleSpec& spec, const RandomSource& rng) {
  require_bins(bins);
  const PairMinMax observed =
      accumulate(k, spec, rng, PairMinMax{}, [](PairMinMax& acc, const SmallMatrix& m, std::uint64_t) {
        acc.trace.add(mat_trace(m));
        acc.supnorm.add(sup_norm(m));
      });
  const Binning tb(observed.trace.lo, observed.trace.hi, bins);
  const Binning sb(observed.supnorm.lo, observed.supnorm.hi, bins);
  const JointCounts zero{std::vector<std::uint64_t>(tb.bins() * sb.bins(), 0),
                         std::vector<std::uint64_t>(kRatioBuckets, 0)};
  const JointCounts counts =
      accumulate(k, spec, rng, zero, [&tb, &sb](JointCounts& acc, const SmallMatrix& m, std::uint64_t) {
        const std::uint64_t t = mat_trace(m);
        const std::uint64_t s = sup_norm(m);
        ++acc.cells[tb.index(t) * sb.bins() + sb.index(s)];
        const auto q = static_cast<std::size_t>((static_cast<unsigned __int128>(t) << kRatioShift) / s);
        ++acc.ratio[std::min(q, kRatioBuckets - 1)];
      });

  JointHistogram h;
  h.k = k;
  h.spec = spec;
  h.trace_min = observed.trace.lo;
  h.trace_max = observed.trace.hi;
  h.supnorm_min = observed.supnorm.lo;
  h.supnorm_max = observed.supnorm.hi;
  h.trace_edges = tb.edges();
  h.supnorm_edges = sb.edges();
  h.counts = counts.cells;

  // Lower median: the smallest bucket whose cumulative count exceeds (N-1)/2.
  const std::uint64_t n = h.total();
  const std::uint64_t rank = (n - 1) / 2;
  std::uint64_t cum = 0;
  for (std::size_t q = 0; q < counts.ratio.size(); ++q) {
    cum += counts.ratio[q];
    if (cum > rank) {
      h.median_ratio = (static_cast<double>(q) + 0.5) / static_cast<double>(std::uint64_t{1} << kRatioShift);
      break;
    }
  }
  return h;
}

double total_variation(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw UsageError("total_variation: histograms use different bin edges");
  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  double tv = 0.0;
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    tv += std::abs(static_cast<double>(a.counts[i]) / na - static_cast<double>(b.counts[i]) / nb);
  return tv / 2.0;
}

std::vector<Word> parabolic_census(unsigned k) {
  require_exhaustive_length(k);
  Paths found = accumulate(k, SampleSpec::exhaustive(), RandomSource(RandomSource::Seed{}), Paths{},
                           [](Paths& acc, const SmallMatrix& m, std::uint64_t path) {
                             if (mat_trace(m) == 2) acc.paths.push_back(path);
                           });
  std::sort(found.paths.begin(), found.paths.end());
  std::vector<Word> out;
  out.reserve(found.paths.size());
  for (auto p : found.paths) out.push_back(word_from_path(p, k));
  return out;
}

Outcome<BandSample, Exhausted> sample_word_trace_band(unsigned k, std::uint64_t t0, std::uint64_t t1,
                                                      std::uint64_t norm_cap, std::uint64_t max_attempts,
                                                      RandomSource& rng) {
  if (k > kSampledMaxLength)
    throw UsageError(fmt::format("band sampling is limited to k <= {}", kSampledMaxLength));
  if (t0 > t1) throw UsageError("trace band must satisfy t0 <= t1");
  if (norm_cap == 0) throw UsageError("norm cap must be >= 1");
  Word w(k);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SmallMatrix m;
    for (auto& x : w) {
      x = rng.next_bit() ? Letter::R : Letter::L;
      right_multiply(m, x);
    }
    const std::uint64_t t = mat_trace(m);
    if (t >= t0 && t <= t1 && sup_norm(m) <= norm_cap) return BandSample{w, attempt};
  }
  return Exhausted{max_attempts};
}

std::string histogram_to_csv(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out += fmt::format("{},{},{}\n", h.edges[i], h.edges[i + 1], h.counts[i]);
  return out;
}

std::string histogram_to_csv(const JointHistogram& h) {
  std::string out = "t_lo,t_hi,s_lo,s_hi,count\n";
  const std::size_t sb = h.supnorm_bins();
  for (std::size_t ti = 0; ti < h.trace_bins(); ++ti)
    for (std::size_t si = 0; si < sb; ++si) {
      const std::uint64_t c = h.counts[ti * sb + si];
      if (c == 0) continue;
      out += fmt::format("{},{},{},{},{}\n", h.trace_edges[ti], h.trace_edges[ti + 1], h.supnorm_edges[si],
                         h.supnorm_edges[si + 1], c);
    }
  return out;
}

std::vector<CsvRow> parse_histogram_csv(std::string_view text) {
  const auto nl = text.find('\n');
  if (nl == std::string_view::npos) throw ParseError(1, "header", "missing header line");
  const std::string_view header = text.substr(0, nl);
  std::size_t columns = 0;
  if (header == "bin_lo,bin_hi,count") {
    columns = 3;
  } else if (header == "t_lo,t_hi,s_lo,s_hi,count") {
    columns = 5;
  } else {
    throw ParseError(1, "header", fmt::format("unrecognised header '{}'", header));
  }

  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t start = nl + 1;
  while (start < text.size()) {
    ++line;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view row = text.substr(start, end - start);
    start = end + 1;

    std::vector<std::string_view> cells;
    std::size_t s = 0;
    for (;;) {
      const std::size_t comma = row.find(',', s);
      cells.push_back(row.substr(s, comma == std::string_view::npos ? comma : comma - s));
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    if (cells.size() != columns)
      throw ParseError(line, "row", fmt::format("expected {} columns, found {}", columns, cells.size()));
    CsvRow r;
    for (std::size_t i = 0; i + 1 < columns; ++i) r.edges.push_back(parse_double(cells[i], line));
    r.count = parse_u64(cells.back(), line);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace sl2pke::analysis
