#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sl2pke/analysis.hpp"
#include "sl2pke/cli.hpp"
#include "sl2pke/serialize.hpp"

using namespace sl2pke;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sl2pke");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string dir() {
  static const std::string d = [] {
    fs::create_directories(SL2PKE_TEST_TMPDIR);
    return std::string(SL2PKE_TEST_TMPDIR);
  }();
  return d;
}

std::string path(const std::string& name) { return dir() + "/" + name; }

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string without_time_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (!line.starts_with("time:")) out += line + "\n";
  return out;
}

const std::string kSeed = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

void example_keys(const std::string& tag) {
  const auto r = run({"keygen", "--l", "8", "--lambda", "16", "--n", "2", "--out-sk", path(tag + ".sk"), "--out-pk",
                      path(tag + ".pk"), "--seed", kSeed});
  REQUIRE(r.code == cli::kExitOk);
}

}  // namespace

TEST_CASE("keygen, encrypt, decrypt compose through files") {
  example_keys("ex");
  CHECK(peek_kind(slurp(path("ex.pk"))) == FileKind::PublicKey);
  const auto enc = run({"encrypt", "--pk", path("ex.pk"), "--msg-hex", "a7b4", "--out-ct", path("ex.ct")});
  REQUIRE(enc.code == cli::kExitOk);
  const auto dec = run({"decrypt", "--sk", path("ex.sk"), "--ct", path("ex.ct"), "--out-hex", path("ex.hex")});
  CHECK(dec.code == cli::kExitOk);
  CHECK(without_time_lines(dec.out) == "a7b4\n");
  CHECK(slurp(path("ex.hex")) == "a7b4\n");
}

TEST_CASE("seeded keygen is byte-identical") {
  example_keys("d1");
  example_keys("d2");
  CHECK(slurp(path("d1.sk")) == slurp(path("d2.sk")));
  CHECK(slurp(path("d1.pk")) == slurp(path("d2.pk")));
  const std::vector<std::string> set3 = {"keygen", "--preset", "set3", "--out-sk", path("s3.sk"),
                                         "--out-pk", path("s3.pk"), "--seed", "1"};
  const auto a = run(set3);
  REQUIRE(a.code == 0);
  const std::string pk_a = slurp(path("s3.pk")), sk_a = slurp(path("s3.sk"));
  const auto b = run(set3);
  CHECK(without_time_lines(a.out) == without_time_lines(b.out));
  CHECK(slurp(path("s3.pk")) == pk_a);
  CHECK(slurp(path("s3.sk")) == sk_a);
  CHECK(matrix_payload_bits(pk_a) == (1u << 19));
  CHECK(a.out.find("pk matrix payload: 524288 bits") != std::string::npos);
}

TEST_CASE("masked encryption under a seed") {
  example_keys("m");
  const auto e1 = run({"encrypt", "--pk", path("m.pk"), "--msg-hex", "0ff0", "--out-ct", path("m1.ct"), "--masked",
                       "--seed", "7"});
  const auto e2 = run({"encrypt", "--pk", path("m.pk"), "--msg-hex", "0ff0", "--out-ct", path("m2.ct"), "--masked",
                       "--seed", "7"});
  REQUIRE(e1.code == 0);
  REQUIRE(e2.code == 0);
  CHECK(slurp(path("m1.ct")) == slurp(path("m2.ct")));
  CHECK(slurp(path("m1.ct")).find("\nmask=") != std::string::npos);
  const auto dec = run({"decrypt", "--sk", path("m.sk"), "--ct", path("m1.ct")});
  CHECK(dec.code == 0);
  CHECK(without_time_lines(dec.out) == "0ff0\n");
}

TEST_CASE("decrypt failures") {
  example_keys("f");
  REQUIRE(run({"encrypt", "--pk", path("f.pk"), "--msg-hex", "1234", "--out-ct", path("f.ct")}).code == 0);
  const std::string ct = slurp(path("f.ct"));

  SUBCASE("truncated file is a parse error") {
    spit(path("trunc.ct"), ct.substr(0, ct.size() / 2));
    const auto r = run({"decrypt", "--sk", path("f.sk"), "--ct", path("trunc.ct")});
    CHECK(r.code == cli::kExitParse);
    CHECK(r.err.find("parse error") != std::string::npos);
  }
  SUBCASE("tampered entry is rejected") {
    // Flip the last hex digit of the first C entry.
    std::string bad = ct;
    const std::size_t pos = bad.find(',', bad.find("\nC=")) - 1;
    bad[pos] = bad[pos] == '0' ? '1' : '0';
    spit(path("tamper.ct"), bad);
    const auto r = run({"decrypt", "--sk", path("f.sk"), "--ct", path("tamper.ct")});
    CHECK(r.code == cli::kExitRejected);
    CHECK(r.out.find("REJECT ") != std::string::npos);
  }
  SUBCASE("extended ciphertext is rejected") {
    REQUIRE(run({"attack", "malleate", "--pk", path("f.pk"), "--ct", path("f.ct"), "--bit", "1", "--out-ct",
                 path("ext.ct")})
                .code == 0);
    const auto r = run({"decrypt", "--sk", path("f.sk"), "--ct", path("ext.ct")});
    CHECK(r.code == cli::kExitRejected);
    CHECK(r.out.find("REJECT BadLength") != std::string::npos);
    REQUIRE(run({"attack", "malleate", "--pk", path("f.pk"), "--ct", path("ext.ct"), "--bit", "1", "--strip",
                 "--out-ct", path("back.ct")})
                .code == 0);
    CHECK(slurp(path("back.ct")) == ct);
  }
  SUBCASE("key and ciphertext parameters must match") {
    REQUIRE(run({"keygen", "--l", "8", "--lambda", "16", "--n", "1", "--out-sk", path("o.sk"), "--out-pk",
                 path("o.pk"), "--seed", "2"})
                .code == 0);
    CHECK(run({"decrypt", "--sk", path("o.sk"), "--ct", path("f.ct")}).code == cli::kExitUsage);
  }
  SUBCASE("missing file") {
    CHECK(run({"decrypt", "--sk", path("f.sk"), "--ct", path("nope.ct")}).code == cli::kExitUsage);
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"keygen", "--out-sk", path("x.sk"), "--out-pk", path("x.pk")}).code == cli::kExitUsage);
  CHECK(run({"keygen", "--preset", "set9", "--out-sk", path("x.sk"), "--out-pk", path("x.pk")}).code ==
        cli::kExitUsage);
  CHECK(run({"keygen", "--preset", "set1", "--l", "3", "--out-sk", path("x.sk"), "--out-pk", path("x.pk")}).code ==
        cli::kExitUsage);
  CHECK(run({"keygen", "--l", "2", "--lambda", "4", "--n", "1", "--generators", "LR", "--out-sk", path("x.sk"),
             "--out-pk", path("x.pk")})
            .code == cli::kExitUsage);
  CHECK(run({"keygen", "--l", "1", "--lambda", "4", "--n", "1", "--seed", "xyz", "--out-sk", path("x.sk"),
             "--out-pk", path("x.pk")})
            .code == cli::kExitUsage);
  CHECK(run({"bench", "--preset", "set1", "--trials", "0"}).code == cli::kExitUsage);
  CHECK(run({"stats", "median", "--k", "3"}).code == cli::kExitUsage);
  CHECK(run({"stats", "trace", "--k", "27"}).code == cli::kExitUsage);
  CHECK(run({"attack"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);

  example_keys("u");
  CHECK(run({"encrypt", "--pk", path("u.pk"), "--msg-hex", "123", "--out-ct", path("u.ct")}).code == cli::kExitUsage);
}

TEST_CASE("stats subcommand") {
  const auto t1 = run({"stats", "trace", "--k", "1", "--out-csv", path("k1.csv")});
  REQUIRE(t1.code == 0);
  CHECK(slurp(path("k1.csv")) == "bin_lo,bin_hi,count\n1.5,2.5,2\n");
  CHECK(t1.out.find("RESULT: trace k=1 words=2") != std::string::npos);

  const auto t16 = run({"stats", "supnorm", "--k", "16", "--bins", "50", "--out-csv", path("k16.csv")});
  REQUIRE(t16.code == 0);
  std::uint64_t sum = 0;
  for (const auto& row : analysis::parse_histogram_csv(slurp(path("k16.csv")))) sum += row.count;
  CHECK(sum == 65536);

  const std::vector<std::string> joint = {"stats", "joint", "--k", "20", "--mode", "sample", "--samples", "20000",
                                          "--seed", "9", "--out-csv", path("j.csv")};
  const auto j1 = run(joint);
  const std::string csv1 = slurp(path("j.csv"));
  const auto j2 = run(joint);
  REQUIRE(j1.code == 0);
  CHECK(without_time_lines(j1.out) == without_time_lines(j2.out));
  CHECK(csv1 == slurp(path("j.csv")));
  CHECK(j1.out.find("median_ratio=1.") != std::string::npos);
}

TEST_CASE("attack subcommands") {
  REQUIRE(run({"keygen", "--l", "1", "--lambda", "64", "--n", "1", "--generators", "LR", "--out-sk", path("fa.sk"),
               "--out-pk", path("fa.pk"), "--seed", "3"})
              .code == 0);
  const auto rec = run({"attack", "n1-recover", "--pk", path("fa.pk")});
  CHECK(rec.code == 0);
  CHECK(rec.out.find("RESULT: recovered verified=true") != std::string::npos);

  REQUIRE(run({"encrypt", "--pk", path("fa.pk"), "--msg-hex", "0000000000000000", "--out-ct", path("fa0.ct")}).code ==
          0);
  const auto leak = run({"attack", "trace-leak", "--ct", path("fa0.ct")});
  CHECK(leak.code == 0);
  CHECK(leak.out == "RESULT: trace=2\n");

  const auto d0 = run({"attack", "distinguish", "--pk", path("fa.pk"), "--ct", path("fa0.ct"), "--mu0",
                       "0000000000000000", "--mu1", "ffffffffffffffff"});
  CHECK(d0.code == 0);
  CHECK(d0.out == "RESULT: guess=0\n");
  const auto d1 = run({"attack", "distinguish", "--pk", path("fa.pk"), "--ct", path("fa0.ct"), "--mu0",
                       "1000000000000000", "--mu1", "0000000000000000"});
  CHECK(d1.out == "RESULT: guess=1\n");
  const auto du = run({"attack", "distinguish", "--pk", path("fa.pk"), "--ct", path("fa0.ct"), "--mu0",
                       "1000000000000000", "--mu1", "2000000000000000"});
  CHECK(du.code == cli::kExitAttackFailed);
  CHECK(du.out == "RESULT: guess=unknown\n");

  // A key with random generators and n = 2 is not an n = 1 instance.
  example_keys("a");
  CHECK(run({"attack", "n1-recover", "--pk", path("a.pk")}).code == cli::kExitUsage);
  // Random l = 1 generators may be (R, L); recovery then reports no solution or succeeds, never crashes.
  REQUIRE(run({"keygen", "--l", "1", "--lambda", "64", "--n", "1", "--out-sk", path("r.sk"), "--out-pk",
               path("r.pk"), "--seed", "4"})
              .code == 0);
  const int code = run({"attack", "n1-recover", "--pk", path("r.pk")}).code;
  CHECK((code == 0 || code == cli::kExitAttackFailed));
}

TEST_CASE("bench subcommand") {
  const auto r = run({"bench", "--l", "8", "--lambda", "16", "--n", "2", "--trials", "3", "--seed", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("RESULT: bench trials=3 correct=3") != std::string::npos);
  CHECK(r.out.find("time: mean") != std::string::npos);
}
