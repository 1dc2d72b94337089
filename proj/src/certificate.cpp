#include "chowid/certificate.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace chowid {

namespace {

const char* const kFormNames[kFactors] = {"k", "l", "m"};

std::string vector_text(std::span<const Residue> v, int width) {
  std::string out = "[";
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t > 0) out += ' ';
    std::string digits = std::to_string(v[t]);
    if (static_cast<int>(digits.size()) < width) out.append(width - digits.size(), ' ');
    out += digits;
  }
  out += ']';
  return out;
}

std::string scope_text(HessianScope s) { return s == HessianScope::kAllPoints ? "all" : "first"; }

void append_key_lines(std::ostringstream& os, const Certificate& c, int width) {
  os << "seed = " << c.seed << '\n';
  os << "prime = " << c.prime << '\n';
  os << "n = " << c.n << '\n';
  os << "r = " << c.r << '\n';
  if (c.hessian_scope == HessianScope::kAllPoints) os << "hessian_at = " << scope_text(c.hessian_scope) << '\n';
  for (std::size_t j = 0; j < c.points.size(); ++j) {
    for (std::size_t f = 0; f < kFactors; ++f) {
      os << kFormNames[f] << '_' << j << " = " << vector_text(c.points[j].forms[f].coords(), width) << '\n';
    }
  }
  os << "f_0 = " << vector_text(c.f0, width) << '\n';
  os << "tangent_rank = " << c.tangent.observed << " / " << c.tangent.expected << '\n';
  os << "hessian_rank = " << c.hessian.observed << " / " << c.hessian.expected << '\n';
  os << "verdict = not-" << c.r << "-TWD " << (c.verdict ? "TRUE" : "FALSE") << '\n';
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::size_t line;
  std::string value;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_no;
      const std::string_view line = trim(text.substr(pos, end - pos));
      pos = end + 1;
      if (line.empty() || line.front() == '#') continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw CertificateParseError(line_no, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) throw CertificateParseError(line_no, "empty key");
      if (entries_.count(key) != 0) throw CertificateParseError(line_no, "duplicate key '" + key + "'");
      entries_[key] = Entry{line_no, std::string(trim(line.substr(eq + 1)))};
      order_.push_back(key);
    }
  }

  const Entry& require(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw CertificateParseError(0, "missing key '" + key + "'");
    used_.push_back(key);
    return it->second;
  }

  const Entry* optional(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  void reject_unused() const {
    for (const auto& key : order_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw CertificateParseError(entries_.at(key).line, "unexpected key '" + key + "'");
      }
    }
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
  std::vector<std::string> used_;
};

std::uint64_t parse_uint(std::string_view s, std::size_t line, const std::string& what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw CertificateParseError(line, "invalid integer for " + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_vector(const Entry& e, const std::string& what) {
  std::string_view s = e.value;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw CertificateParseError(e.line, what + ": expected a bracketed vector");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    out.push_back(parse_uint(s.substr(pos, end - pos), e.line, what));
    pos = end;
  }
  return out;
}

RankCheck parse_rank(const Entry& e, const std::string& what) {
  const std::size_t slash = e.value.find('/');
  if (slash == std::string::npos) throw CertificateParseError(e.line, what + ": expected '<observed> / <expected>'");
  const std::string_view v = e.value;
  return {parse_uint(v.substr(0, slash), e.line, what), parse_uint(v.substr(slash + 1), e.line, what)};
}

ResidueVector to_residues(const std::vector<std::uint64_t>& v, std::uint64_t prime, const Entry& e,
                          const std::string& what) {
  ResidueVector out;
  out.reserve(v.size());
  for (std::uint64_t x : v) {
    if (x >= prime) {
      throw CertificateParseError(e.line, what + ": entry " + std::to_string(x) + " is not below prime " +
                                              std::to_string(prime));
    }
    out.push_back(static_cast<Residue>(x));
  }
  return out;
}

}  // namespace

std::size_t Certificate::codimension() const {
  const std::size_t dim = ambient_dimension(n), used = expected_tangent_rank(n, r);
  return dim > used ? dim - used : 0;
}

CertificateParseError::CertificateParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string format_certificate(const Certificate& cert) {
  std::ostringstream os;
  const int width = static_cast<int>(std::to_string(cert.prime > 0 ? cert.prime - 1 : 0).size());
  append_key_lines(os, cert, width);
  os << "# attempt = " << cert.attempt << " (base seed " << cert.base_seed << ")\n";
  os << "# zero_form_resamples = " << cert.zero_form_resamples << '\n';
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "# seconds: sampling %.3f, terracini %.3f, elimination %.3f, null vector %.3f, hessian %.3f, total "
                "%.3f\n",
                cert.timings.sampling, cert.timings.terracini, cert.timings.elimination, cert.timings.null_vector,
                cert.timings.hessian, cert.timings.total);
  os << buf;
  if (cert.verdict) {
    os << "# not-" << cert.r << "-TWD implies not-k-TWD, hence generic k-identifiability, for every k <= " << cert.r
       << '\n';
  }
  os << "checksum = " << record_checksum(cert) << '\n';
  return os.str();
}

std::string canonical_record(const Certificate& cert) {
  std::ostringstream os;
  append_key_lines(os, cert, 0);
  return os.str();
}

std::string record_checksum(const Certificate& cert) { return "sha256:" + sha256_hex(canonical_record(cert)); }

Certificate parse_certificate(std::string_view text) {
  Parser p(text);
  Certificate c;
  const Entry& seed = p.require("seed");
  c.seed = parse_uint(seed.value, seed.line, "seed");
  const Entry& prime = p.require("prime");
  c.prime = parse_uint(prime.value, prime.line, "prime");
  std::optional<PrimeModulus> modulus;
  try {
    modulus.emplace(c.prime);
  } catch (const std::invalid_argument& e) {
    throw CertificateParseError(prime.line, e.what());
  }
  const Entry& n = p.require("n");
  c.n = parse_uint(n.value, n.line, "n");
  if (c.n < 1 || c.n > 10000) throw CertificateParseError(n.line, "n out of range");
  const Entry& r = p.require("r");
  c.r = parse_uint(r.value, r.line, "r");
  if (c.r < 1 || c.r > ambient_dimension(c.n)) throw CertificateParseError(r.line, "r out of range");
  if (c.codimension() == 0) throw CertificateParseError(r.line, "(3n+1) r must be below binom(n+3, 3)");

  if (const Entry* scope = p.optional("hessian_at")) {
    if (scope->value == "all") {
      c.hessian_scope = HessianScope::kAllPoints;
    } else if (scope->value == "first") {
      c.hessian_scope = HessianScope::kFirstPoint;
    } else {
      throw CertificateParseError(scope->line, "hessian_at must be 'first' or 'all'");
    }
  }

  for (std::size_t j = 0; j < c.r; ++j) {
    std::vector<LinearForm> forms;
    for (std::size_t f = 0; f < kFactors; ++f) {
      const std::string key = std::string(kFormNames[f]) + "_" + std::to_string(j);
      const Entry& e = p.require(key);
      const auto values = parse_vector(e, key);
      if (values.size() != c.n + 1) {
        throw CertificateParseError(e.line, key + ": expected " + std::to_string(c.n + 1) + " entries, found " +
                                                std::to_string(values.size()));
      }
      LinearForm form(*modulus, to_residues(values, c.prime, e, key));
      if (form.is_zero()) throw CertificateParseError(e.line, key + ": zero linear form");
      forms.push_back(std::move(form));
    }
    c.points.emplace_back(forms[0], forms[1], forms[2]);
  }

  const Entry& f0 = p.require("f_0");
  const auto f0_values = parse_vector(f0, "f_0");
  if (f0_values.size() != c.codimension()) {
    throw CertificateParseError(f0.line, "f_0: expected " + std::to_string(c.codimension()) + " entries, found " +
                                             std::to_string(f0_values.size()));
  }
  c.f0 = to_residues(f0_values, c.prime, f0, "f_0");

  c.tangent = parse_rank(p.require("tangent_rank"), "tangent_rank");
  c.hessian = parse_rank(p.require("hessian_rank"), "hessian_rank");

  const Entry& verdict = p.require("verdict");
  const std::string expected_label = "not-" + std::to_string(c.r) + "-TWD ";
  if (verdict.value == expected_label + "TRUE") {
    c.verdict = true;
  } else if (verdict.value == expected_label + "FALSE") {
    c.verdict = false;
  } else {
    throw CertificateParseError(verdict.line, "verdict must read '" + expected_label + "TRUE|FALSE'");
  }

  if (const Entry* sum = p.optional("checksum")) c.checksum = sum->value;
  p.reject_unused();
  return c;
}

Certificate read_certificate_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open certificate " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

void write_certificate_file(const std::filesystem::path& path, const Certificate& cert) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write certificate " + path.string());
  out << format_certificate(cert);
}

}  // namespace chowid
