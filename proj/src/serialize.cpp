#include "sl2pke/serialize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <vector>

namespace sl2pke {

namespace {

constexpr std::string_view kMagic = "SL2PKE v1 ";

std::string_view kind_tag(FileKind k) {
  switch (k) {
    case FileKind::PublicKey:
      return "pk";
    case FileKind::SecretKey:
      return "sk";
    case FileKind::Ciphertext:
      return "ct";
  }
  return "?";
}

void append_params(std::string& out, const Params& p) {
  out += fmt::format("l={} lambda={} n={}\n", p.l, p.lambda, p.n);
}

void append_matrix(std::string& out, std::string_view name, const ResidueMatrix& m) {
  out += name;
  out += '=';
  bool first = true;
  for (const auto& e : m.entries()) {
    if (!first) out += ',';
    first = false;
    out += e.get_str(16);
  }
  out += '\n';
}

void append_bits(std::string& out, std::string_view name, const Bits& bits) {
  out += name;
  out += '=';
  for (auto b : bits) out += b ? '1' : '0';
  out += '\n';
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Splits into lines and checks the framing shared by all kinds.
std::vector<Line> split_lines(std::string_view text) {
  if (text.empty()) throw ParseError(1, "header", "empty file");
  if (text.back() != '\n') {
    const auto count = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
    throw ParseError(count, "eof", "missing trailing newline (truncated file?)");
  }
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    lines.push_back({lines.size() + 1, text.substr(start, end - start)});
    start = end + 1;
  }
  for (const auto& ln : lines) {
    if (ln.text.empty()) throw ParseError(ln.number, "line", "empty line");
    if (ln.text.find('\r') != std::string_view::npos) throw ParseError(ln.number, "line", "carriage return");
  }
  return lines;
}

unsigned parse_decimal(const Line& ln, std::string_view field, std::string_view s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) throw ParseError(ln.number, std::string(field), "bad decimal");
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(ln.number, std::string(field), "bad decimal '" + std::string(s) + "'");
  return v;
}

Params parse_params(const Line& ln) {
  // l=<dec> lambda=<dec> n=<dec>
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t sp = ln.text.find(' ', start);
    parts.push_back(ln.text.substr(start, sp == std::string_view::npos ? sp : sp - start));
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  static constexpr std::string_view kKeys[] = {"l", "lambda", "n"};
  if (parts.size() != 3) throw ParseError(ln.number, "params", "expected 'l=<dec> lambda=<dec> n=<dec>'");
  unsigned vals[3];
  for (int i = 0; i < 3; ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos || parts[i].substr(0, eq) != kKeys[i])
      throw ParseError(ln.number, "params", fmt::format("expected '{}=<dec>'", kKeys[i]));
    vals[i] = parse_decimal(ln, kKeys[i], parts[i].substr(eq + 1));
  }
  Params p{vals[0], vals[1], vals[2]};
  try {
    p.validate();
  } catch (const UsageError& e) {
    throw ParseError(ln.number, "params", e.what());
  }
  return p;
}

ResidueMatrix parse_matrix(const Line& ln, const std::string& name, std::string_view value, const Params& p) {
  const std::size_t d = p.dim();
  const Modulus mod = p.modulus();
  std::vector<BigInt> entries;
  entries.reserve(d * d);
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = value.find(',', start);
    const std::string_view tok = value.substr(start, comma == std::string_view::npos ? comma : comma - start);
    if (tok.empty()) throw ParseError(ln.number, name, fmt::format("empty entry at index {}", entries.size()));
    if (tok.size() > 1 && tok[0] == '0')
      throw ParseError(ln.number, name, fmt::format("leading zero in entry {}", entries.size()));
    for (char ch : tok)
      if (!((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f')))
        throw ParseError(ln.number, name, fmt::format("entry {} is not lowercase hex", entries.size()));
    BigInt v(std::string(tok), 16);
    if (!mod.contains(v))
      throw ParseError(ln.number, name, fmt::format("entry {} is not below 2^{}", entries.size(), mod.bits()));
    entries.push_back(std::move(v));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (entries.size() != d * d)
    throw ParseError(ln.number, name, fmt::format("expected {} entries, found {}", d * d, entries.size()));
  return ResidueMatrix(d, mod, std::move(entries));
}

Bits parse_bits(const Line& ln, const std::string& name, std::string_view value, std::size_t expected) {
  if (value.size() != expected)
    throw ParseError(ln.number, name, fmt::format("expected {} bits, found {}", expected, value.size()));
  Bits bits;
  bits.reserve(value.size());
  for (char ch : value) {
    if (ch != '0' && ch != '1') throw ParseError(ln.number, name, "bits must be '0' or '1'");
    bits.push_back(ch == '1' ? 1 : 0);
  }
  return bits;
}

struct Document {
  Params params;
  std::map<std::string, std::pair<Line, std::string_view>> fields;
  std::size_t last_line = 0;
};

Document parse_document(std::string_view text, FileKind kind, const std::set<std::string>& required,
                        const std::set<std::string>& optional) {
  const auto lines = split_lines(text);
  const std::string header = std::string(kMagic) + std::string(kind_tag(kind));
  if (lines[0].text != header)
    throw ParseError(1, "header", fmt::format("expected '{}', found '{}'", header, lines[0].text));
  if (lines.size() < 2) throw ParseError(2, "params", "missing parameter line");

  Document doc{parse_params(lines[1]), {}, lines.back().number};
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const auto eq = ln.text.find('=');
    if (eq == std::string_view::npos) throw ParseError(ln.number, "line", "expected '<name>=<value>'");
    std::string name(ln.text.substr(0, eq));
    if (!required.contains(name) && !optional.contains(name))
      throw ParseError(ln.number, name, fmt::format("unknown field for a {} file", kind_tag(kind)));
    if (doc.fields.contains(name)) throw ParseError(ln.number, name, "duplicate field");
    doc.fields.emplace(name, std::make_pair(ln, ln.text.substr(eq + 1)));
  }
  for (const auto& name : required)
    if (!doc.fields.contains(name)) throw ParseError(doc.last_line + 1, name, "missing required field");
  return doc;
}

ResidueMatrix matrix_field(const Document& doc, const std::string& name) {
  const auto& [ln, value] = doc.fields.at(name);
  return parse_matrix(ln, name, value, doc.params);
}

Bits bits_field(const Document& doc, const std::string& name, std::size_t expected) {
  const auto& [ln, value] = doc.fields.at(name);
  return parse_bits(ln, name, value, expected);
}

}  // namespace

std::string serialize(const PublicKey& pk) {
  std::string out = std::string(kMagic) + "pk\n";
  append_params(out, pk.params);
  append_matrix(out, "P0", pk.p0);
  append_matrix(out, "P1", pk.p1);
  return out;
}

std::string serialize(const SecretKey& sk) {
  std::string out = std::string(kMagic) + "sk\n";
  append_params(out, sk.params);
  append_bits(out, "G0", sk.g0_bits);
  append_bits(out, "G1", sk.g1_bits);
  append_matrix(out, "S", sk.s);
  append_matrix(out, "Sinv", sk.s_inv);
  return out;
}

std::string serialize(const Ciphertext& ct) {
  std::string out = std::string(kMagic) + "ct\n";
  append_params(out, ct.params);
  append_matrix(out, "C", ct.c);
  if (ct.mask) append_bits(out, "mask", *ct.mask);
  return out;
}

PublicKey parse_public_key(std::string_view text) {
  const auto doc = parse_document(text, FileKind::PublicKey, {"P0", "P1"}, {});
  return PublicKey{doc.params, matrix_field(doc, "P0"), matrix_field(doc, "P1")};
}

SecretKey parse_secret_key(std::string_view text) {
  const auto doc = parse_document(text, FileKind::SecretKey, {"G0", "G1", "S", "Sinv"}, {});
  SecretKey sk{doc.params, bits_field(doc, "G0", doc.params.l), bits_field(doc, "G1", doc.params.l),
               matrix_field(doc, "S"), matrix_field(doc, "Sinv")};
  if (sk.g0_bits == sk.g1_bits) throw ParseError(doc.fields.at("G1").first.number, "G1", "G0 and G1 must differ");
  if (!mat_mul(sk.s, sk.s_inv).is_identity())
    throw ParseError(doc.fields.at("Sinv").first.number, "Sinv", "S * Sinv is not the identity");
  return sk;
}

Ciphertext parse_ciphertext(std::string_view text) {
  const auto doc = parse_document(text, FileKind::Ciphertext, {"C"}, {"mask"});
  Ciphertext ct{doc.params, matrix_field(doc, "C"), std::nullopt};
  if (doc.fields.contains("mask")) ct.mask = bits_field(doc, "mask", doc.params.lambda);
  return ct;
}

FileKind peek_kind(std::string_view text) {
  const auto nl = text.find('\n');
  const std::string_view first = text.substr(0, nl);
  for (auto k : {FileKind::PublicKey, FileKind::SecretKey, FileKind::Ciphertext})
    if (first == std::string(kMagic) + std::string(kind_tag(k))) return k;
  throw ParseError(1, "header", "not an SL2PKE v1 file");
}

std::uint64_t matrix_payload_bits(std::string_view text) {
  switch (peek_kind(text)) {
    case FileKind::PublicKey: {
      const auto pk = parse_public_key(text);
      return (pk.p0.entries().size() + pk.p1.entries().size()) * std::uint64_t{pk.params.modulus_bits()};
    }
    case FileKind::SecretKey: {
      const auto sk = parse_secret_key(text);
      return (sk.s.entries().size() + sk.s_inv.entries().size()) * std::uint64_t{sk.params.modulus_bits()};
    }
    case FileKind::Ciphertext: {
      const auto ct = parse_ciphertext(text);
      return ct.c.entries().size() * std::uint64_t{ct.params.modulus_bits()};
    }
  }
  return 0;
}

std::uint64_t public_key_bits(const Params& p) {
  return 8ull * p.n * p.n * p.l * p.lambda;
}

std::uint64_t ciphertext_bits(const Params& p) {
  return 4ull * p.n * p.n * p.l * p.lambda;
}

std::uint64_t secret_key_bits(const Params& p) {
  return 4ull * p.n * p.n * p.l * p.lambda + 2ull * p.l;
}

}  // namespace sl2pke
