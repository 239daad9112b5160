#include "sl2pke/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sl2pke/analysis.hpp"
#include "sl2pke/attacks.hpp"
#include "sl2pke/scheme.hpp"
#include "sl2pke/serialize.hpp"

namespace sl2pke::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw UsageError(fmt::format("failed writing '{}'", path));
}

RandomSource make_rng(const std::string& seed_hex) {
  return seed_hex.empty() ? RandomSource::from_os_entropy() : RandomSource::from_seed_hex(seed_hex);
}

struct ParamFlags {
  std::string preset;
  unsigned l = 0, lambda = 0, n = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Named parameter set")->check(CLI::IsMember({"set1", "set2", "set3"}));
    cmd->add_option("--l", l, "Generator word length");
    cmd->add_option("--lambda", lambda, "Message length in bits");
    cmd->add_option("--n", n, "Block size (matrices are 2n x 2n)");
  }

  Params resolve() const {
    const bool explicit_any = l || lambda || n;
    if (!preset.empty()) {
      if (explicit_any) throw UsageError("--preset cannot be combined with --l/--lambda/--n");
      return Params::preset(preset);
    }
    if (!(l && lambda && n)) throw UsageError("give either --preset or all of --l, --lambda, --n");
    Params p{l, lambda, n};
    p.validate();
    return p;
  }
};

int cmd_keygen(const ParamFlags& pf, const std::string& generators, const std::string& out_sk,
               const std::string& out_pk, const std::string& seed, std::ostream& out) {
  const Params params = pf.resolve();
  const GeneratorMode mode = generators == "LR" ? GeneratorMode::FirstAttempt : GeneratorMode::Random;
  RandomSource rng = make_rng(seed);
  const auto start = Clock::now();
  auto [sk, pk] = keygen(params, rng, mode);
  const double elapsed = seconds_since(start);

  const std::string pk_text = serialize(pk);
  write_file(out_sk, serialize(sk));
  write_file(out_pk, pk_text);
  fmt::print(out, "params: {}\n", describe(params));
  fmt::print(out, "generators: {}\n", mode == GeneratorMode::FirstAttempt ? "L, R (first-attempt mode)" : "random");
  fmt::print(out, "pk matrix payload: {} bits\n", matrix_payload_bits(pk_text));
  fmt::print(out, "time: keygen {:.6f} s\n", elapsed);
  fmt::print(out, "RESULT: keygen ok sk={} pk={}\n", out_sk, out_pk);
  return kExitOk;
}

int cmd_encrypt(const std::string& pk_path, const std::string& msg_hex, const std::string& out_ct, bool masked,
                const std::string& seed, std::ostream& out) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  const Bits message = bits_from_hex(msg_hex, pk.params.lambda);
  const auto start = Clock::now();
  std::optional<RandomSource> rng;
  if (masked) rng.emplace(make_rng(seed));
  const Ciphertext ct = masked ? encrypt_masked(pk, message, *rng) : encrypt(pk, message);
  const double elapsed = seconds_since(start);
  write_file(out_ct, serialize(ct));
  fmt::print(out, "time: encrypt {:.6f} s\n", elapsed);
  fmt::print(out, "RESULT: encrypted {} bits{} -> {}\n", pk.params.lambda, masked ? " (masked)" : "", out_ct);
  return kExitOk;
}

int cmd_decrypt(const std::string& sk_path, const std::string& ct_path, const std::string& out_hex,
                std::ostream& out) {
  const SecretKey sk = parse_secret_key(read_file(sk_path));
  const Ciphertext ct = parse_ciphertext(read_file(ct_path));
  const auto start = Clock::now();
  const DecryptResult result = decrypt(sk, ct);
  const double elapsed = seconds_since(start);
  fmt::print(out, "time: decrypt {:.6f} s\n", elapsed);
  if (!result) {
    fmt::print(out, "REJECT {}: {}\n", to_string(result.error().reason), result.error().detail);
    return kExitRejected;
  }
  const std::string hex = bits_to_hex(result.value());
  if (!out_hex.empty()) write_file(out_hex, hex + "\n");
  fmt::print(out, "{}\n", hex);
  return kExitOk;
}

struct StatsFlags {
  std::string statistic;
  unsigned k = 0;
  std::size_t bins = 1000;
  std::string mode = "exhaustive";
  std::uint64_t samples = 100000;
  std::string out_csv;
  std::string seed;
};

int cmd_stats(const StatsFlags& f, std::ostream& out) {
  using namespace analysis;
  if (f.k == 0) throw UsageError("--k must be >= 1");
  const SampleSpec spec = f.mode == "exhaustive" ? SampleSpec::exhaustive() : SampleSpec::sampled(f.samples);
  check_source(f.k, spec);
  const RandomSource rng = spec.is_exhaustive() ? RandomSource(RandomSource::Seed{}) : make_rng(f.seed);

  const auto start = Clock::now();
  std::string csv;
  std::uint64_t total = 0;
  std::size_t bins_used = 0;
  if (f.statistic == "joint") {
    const JointHistogram h = joint_histogram(f.k, f.bins, spec, rng);
    const double elapsed = seconds_since(start);
    csv = histogram_to_csv(h);
    total = h.total();
    bins_used = h.trace_bins() * h.supnorm_bins();
    fmt::print(out, "trace range: [{}, {}]  sup-norm range: [{}, {}]\n", h.trace_min, h.trace_max, h.supnorm_min,
               h.supnorm_max);
    fmt::print(out, "median trace/sup-norm ratio: {:.6f}\n", h.median_ratio);
    fmt::print(out, "time: stats {:.6f} s\n", elapsed);
    fmt::print(out, "RESULT: joint k={} words={} cells={} median_ratio={:.6f}\n", f.k, total, bins_used,
               h.median_ratio);
  } else {
    const Statistic stat = f.statistic == "trace" ? Statistic::Trace : Statistic::SupNorm;
    const Histogram h = statistic_histogram(stat, f.k, f.bins, spec, rng);
    const double elapsed = seconds_since(start);
    csv = histogram_to_csv(h);
    total = h.total();
    bins_used = h.counts.size();
    const auto mode_bin = static_cast<std::size_t>(std::max_element(h.counts.begin(), h.counts.end()) -
                                                   h.counts.begin());
    fmt::print(out, "{} range: [{}, {}]\n", to_string(stat), h.min, h.max);
    fmt::print(out, "mode bin: {} [{}, {}]\n", mode_bin, h.edges[mode_bin], h.edges[mode_bin + 1]);
    fmt::print(out, "time: stats {:.6f} s\n", elapsed);
    fmt::print(out, "RESULT: {} k={} words={} bins={} min={} max={}\n", to_string(stat), f.k, total, bins_used,
               h.min, h.max);
  }
  if (!f.out_csv.empty()) write_file(f.out_csv, csv);
  return kExitOk;
}

int cmd_n1_recover(const std::string& pk_path, std::ostream& out) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  if (pk.params.n != 1) throw UsageError("n1-recover needs a public key with n = 1");
  const auto result = attacks::recover_conjugator_n1(pk.p0, pk.p1);
  if (!result) {
    fmt::print(out, "{}\n", result.error().detail);
    fmt::print(out, "RESULT: no-solution\n");
    return kExitAttackFailed;
  }
  const auto& cands = result.value();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& s = cands[i].s;
    fmt::print(out, "candidate {} ({}): S = [[{}, {}], [{}, {}]]\n", i, to_string(cands[i].normalization),
               s(0, 0).get_str(16), s(0, 1).get_str(16), s(1, 0).get_str(16), s(1, 1).get_str(16));
  }
  fmt::print(out, "RESULT: recovered verified=true candidates={}\n", cands.size());
  return kExitOk;
}

int cmd_trace_leak(const std::string& ct_path, std::ostream& out) {
  const Ciphertext ct = parse_ciphertext(read_file(ct_path));
  fmt::print(out, "RESULT: trace={}\n", attacks::trace_leak(ct.c).value().get_str(10));
  return kExitOk;
}

int cmd_distinguish(const std::string& pk_path, const std::string& ct_path, const std::string& mu0_hex,
                    const std::string& mu1_hex, std::ostream& out) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  const Ciphertext ct = parse_ciphertext(read_file(ct_path));
  const Bits mu0 = bits_from_hex(mu0_hex, pk.params.lambda);
  const Bits mu1 = bits_from_hex(mu1_hex, pk.params.lambda);
  switch (attacks::distinguish_deterministic(pk, ct, mu0, mu1)) {
    case attacks::Guess::Zero:
      fmt::print(out, "RESULT: guess=0\n");
      return kExitOk;
    case attacks::Guess::One:
      fmt::print(out, "RESULT: guess=1\n");
      return kExitOk;
    case attacks::Guess::Unknown:
      break;
  }
  fmt::print(out, "RESULT: guess=unknown\n");
  return kExitAttackFailed;
}

int cmd_malleate(const std::string& pk_path, const std::string& ct_path, unsigned bit, bool strip,
                 const std::string& out_ct, std::ostream& out) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  const Ciphertext ct = parse_ciphertext(read_file(ct_path));
  if (bit > 1) throw UsageError("--bit must be 0 or 1");
  const auto b = static_cast<std::uint8_t>(bit);
  const Ciphertext mod = strip ? attacks::strip_last_bit(pk, ct, b) : attacks::extend_ciphertext(pk, ct, b);
  write_file(out_ct, serialize(mod));
  fmt::print(out, "RESULT: {} bit={} -> {}\n", strip ? "stripped" : "extended", bit, out_ct);
  return kExitOk;
}

int cmd_bench(const ParamFlags& pf, std::size_t trials, const std::string& seed, std::ostream& out) {
  if (trials == 0) throw UsageError("--trials must be >= 1");
  const Params params = pf.resolve();
  RandomSource rng = make_rng(seed);
  fmt::print(out, "params: {}\n", describe(params));

  std::vector<double> totals;
  std::size_t correct = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto t0 = Clock::now();
    auto [sk, pk] = keygen(params, rng);
    const auto t1 = Clock::now();
    Bits message(params.lambda);
    for (auto& b : message) b = rng.next_bit();
    const Ciphertext ct = encrypt(pk, message);
    const auto t2 = Clock::now();
    const DecryptResult back = decrypt(sk, ct);
    const auto t3 = Clock::now();
    if (back && back.value() == message) ++correct;
    using Sec = std::chrono::duration<double>;
    const double total = Sec(t3 - t0).count();
    totals.push_back(total);
    fmt::print(out, "time: trial {} keygen {:.4f} s encrypt {:.4f} s decrypt {:.4f} s total {:.4f} s\n", t,
               Sec(t1 - t0).count(), Sec(t2 - t1).count(), Sec(t3 - t2).count(), total);
  }
  double sum = 0;
  for (double x : totals) sum += x;
  fmt::print(out, "time: mean {:.4f} s min {:.4f} s max {:.4f} s over {} trials\n", sum / static_cast<double>(trials),
             *std::min_element(totals.begin(), totals.end()), *std::max_element(totals.begin(), totals.end()),
             trials);

  // Reference timings of the original Python implementation (keygen + encrypt + decrypt).
  if (params == Params::preset("set1")) fmt::print(out, "reference: 19.68 s per trial (published average over 100 trials)\n");
  if (params == Params::preset("set2")) fmt::print(out, "reference: published as not finishing\n");
  if (params == Params::preset("set3")) fmt::print(out, "reference: 14.26 s per trial (published average over 100 trials)\n");

  fmt::print(out, "RESULT: bench trials={} correct={}\n", trials, correct);
  return correct == trials ? kExitOk : kExitRejected;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Public-key encryption over the free monoid SL2(N): keys, encryption, statistics, attacks"};
  app.name(args.empty() ? "sl2pke" : args[0]);
  app.require_subcommand(1);

  ParamFlags keygen_params;
  std::string generators = "random", out_sk, out_pk, keygen_seed;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_params.add_to(keygen_cmd);
  keygen_cmd->add_option("--generators", generators, "random, or LR for G0 = L, G1 = R (needs l = 1)")
      ->check(CLI::IsMember({"random", "LR"}));
  keygen_cmd->add_option("--out-sk", out_sk, "Secret key output file")->required();
  keygen_cmd->add_option("--out-pk", out_pk, "Public key output file")->required();
  keygen_cmd->add_option("--seed", keygen_seed, "256-bit hex seed (default: OS entropy)");

  std::string enc_pk, msg_hex, out_ct, enc_seed;
  bool masked = false;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a lambda-bit message");
  encrypt_cmd->add_option("--pk", enc_pk, "Public key file")->required();
  encrypt_cmd->add_option("--msg-hex", msg_hex, "Message as hex, most significant bit first")->required();
  encrypt_cmd->add_option("--out-ct", out_ct, "Ciphertext output file")->required();
  encrypt_cmd->add_flag("--masked", masked, "XOR the message with a random mask sent alongside");
  encrypt_cmd->add_option("--seed", enc_seed, "256-bit hex seed for the mask");

  std::string dec_sk, dec_ct, out_hex;
  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a ciphertext");
  decrypt_cmd->add_option("--sk", dec_sk, "Secret key file")->required();
  decrypt_cmd->add_option("--ct", dec_ct, "Ciphertext file")->required();
  decrypt_cmd->add_option("--out-hex", out_hex, "Also write the recovered hex here");

  StatsFlags stats;
  auto* stats_cmd = app.add_subcommand("stats", "Trace / sup-norm statistics over words of length k");
  stats_cmd->add_option("statistic", stats.statistic, "trace, supnorm or joint")
      ->required()
      ->check(CLI::IsMember({"trace", "supnorm", "joint"}));
  stats_cmd->add_option("--k", stats.k, "Word length")->required();
  stats_cmd->add_option("--bins", stats.bins, "Bins per axis")->capture_default_str();
  stats_cmd->add_option("--mode", stats.mode, "exhaustive or sample")
      ->capture_default_str()
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  stats_cmd->add_option("--samples", stats.samples, "Draws in sample mode")->capture_default_str();
  stats_cmd->add_option("--out-csv", stats.out_csv, "CSV output file");
  stats_cmd->add_option("--seed", stats.seed, "256-bit hex seed for sample mode");

  auto* attack_cmd = app.add_subcommand("attack", "Attacks on weak variants");
  attack_cmd->require_subcommand(1);
  std::string atk_pk, atk_ct, mu0, mu1, atk_out;
  unsigned atk_bit = 0;
  bool strip = false;
  auto* n1 = attack_cmd->add_subcommand("n1-recover", "Recover S from an n=1 key with generators L, R");
  n1->add_option("--pk", atk_pk, "Public key file")->required();
  auto* leak = attack_cmd->add_subcommand("trace-leak", "Print trace(C) mod 2^K");
  leak->add_option("--ct", atk_ct, "Ciphertext file")->required();
  auto* dist = attack_cmd->add_subcommand("distinguish", "Decide which of two messages C encrypts");
  dist->add_option("--pk", atk_pk, "Public key file")->required();
  dist->add_option("--ct", atk_ct, "Ciphertext file")->required();
  dist->add_option("--mu0", mu0, "First candidate (hex)")->required();
  dist->add_option("--mu1", mu1, "Second candidate (hex)")->required();
  auto* mall = attack_cmd->add_subcommand("malleate", "Append (or with --strip remove) a trailing generator");
  mall->add_option("--pk", atk_pk, "Public key file")->required();
  mall->add_option("--ct", atk_ct, "Ciphertext file")->required();
  mall->add_option("--bit", atk_bit, "Generator bit")->required()->check(CLI::Range(0u, 1u));
  mall->add_flag("--strip", strip, "Multiply by P_bit^-1 instead of P_bit");
  mall->add_option("--out-ct", atk_out, "Output ciphertext file")->required();

  ParamFlags bench_params;
  std::size_t trials = 1;
  std::string bench_seed;
  auto* bench_cmd = app.add_subcommand("bench", "Time keygen + encrypt + decrypt");
  bench_params.add_to(bench_cmd);
  bench_cmd->add_option("--trials", trials, "Number of trials")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "256-bit hex seed");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("sl2pke");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(keygen_params, generators, out_sk, out_pk, keygen_seed, out);
    if (*encrypt_cmd) return cmd_encrypt(enc_pk, msg_hex, out_ct, masked, enc_seed, out);
    if (*decrypt_cmd) return cmd_decrypt(dec_sk, dec_ct, out_hex, out);
    if (*stats_cmd) return cmd_stats(stats, out);
    if (*n1) return cmd_n1_recover(atk_pk, out);
    if (*leak) return cmd_trace_leak(atk_ct, out);
    if (*dist) return cmd_distinguish(atk_pk, atk_ct, mu0, mu1, out);
    if (*mall) return cmd_malleate(atk_pk, atk_ct, atk_bit, strip, atk_out, out);
    if (*bench_cmd) return cmd_bench(bench_params, trials, bench_seed, out);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    fmt::print(err, "parse error: {}\n", e.what());
    return kExitParse;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sl2pke::cli
