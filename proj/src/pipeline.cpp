#include "chowid/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace chowid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_certify_shape(std::size_t n, std::size_t r) {
  if (n < 2) throw ContractViolation("certify: requires n >= 2, got " + std::to_string(n));
  if (r < 1) throw ContractViolation("certify: requires r >= 1");
  if (expected_tangent_rank(n, r) >= ambient_dimension(n)) {
    throw ContractViolation("certify: (3n+1) r = " + std::to_string(expected_tangent_rank(n, r)) +
                            " leaves no normal directions in dimension " + std::to_string(ambient_dimension(n)));
  }
}

std::string secs(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", t);
  return buf;
}

std::string rank_line(const RankCheck& c) {
  return "rank " + std::to_string(c.observed) + " / " + std::to_string(c.expected) + (c.ok() ? "" : "  DEFICIENT");
}

}  // namespace

RankTableRow rank_table_row(std::size_t n) {
  RankTableRow row;
  row.n = n;
  row.dim_ambient = ambient_dimension(n);
  row.cone_dim = cone_dimension(n);
  const std::size_t q = row.dim_ambient / row.cone_dim;
  row.perfect = row.dim_ambient % row.cone_dim == 0;
  row.r_gen = row.perfect ? q : q + 1;
  row.r_identifiable_bound = static_cast<std::int64_t>(q) - 1;
  row.large_n_reduction = 2 * row.cone_dim < q;
  return row;
}

std::vector<RankTableRow> rank_table(std::size_t n_min, std::size_t n_max) {
  if (n_min < 1) throw ContractViolation("rank_table: requires n_min >= 1");
  std::vector<RankTableRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) rows.push_back(rank_table_row(n));
  return rows;
}

std::size_t default_rank(std::size_t n) { return rank_table_row(n).r_gen - 1; }

CertifyError::CertifyError(const std::string& message, std::vector<AttemptRecord> attempts)
    : std::runtime_error(message), attempts_(std::move(attempts)) {}

std::uint64_t attempt_seed(std::uint64_t base_seed, std::size_t attempt) {
  return attempt == 0 ? base_seed : derive_seed(base_seed, attempt);
}

Replay replay(const PrimeModulus& modulus, std::size_t n, std::size_t r, std::span<const ChowPoint> points,
              std::span<const Residue> f0, HessianScope scope, const EliminationOptions& elimination) {
  check_certify_shape(n, r);
  if (points.size() != r) throw ContractViolation("replay: expected " + std::to_string(r) + " points");
  for (const auto& p : points) {
    if (p.n() != n || !(p.modulus() == modulus)) throw ContractViolation("replay: point from another space");
  }
  Replay out;
  const auto start = Clock::now();
  const CubicSpace space(n);

  auto t0 = Clock::now();
  const FfMatrix t = terracini_matrix(points, space);
  out.timings.terracini = seconds_since(t0);

  t0 = Clock::now();
  const RrefResult reduced = rref(t, elimination);
  out.timings.elimination = seconds_since(t0);
  out.tangent = {reduced.rank, expected_tangent_rank(n, r)};
  if (!out.tangent.ok()) {
    out.timings.total = seconds_since(start);
    return out;
  }

  t0 = Clock::now();
  out.eta = null_vector(reduced, f0);
  const ResidueVector residual = mul_vec(t, out.eta);
  for (Residue v : residual) {
    if (v != 0) throw std::logic_error("replay: normal vector not annihilated by the tangent matrix");
  }
  out.timings.null_vector = seconds_since(t0);

  t0 = Clock::now();
  const Poly eta(space.cubics(), modulus, out.eta);
  const std::size_t tested = scope == HessianScope::kAllPoints ? points.size() : 1;
  std::size_t lowest = SIZE_MAX;
  for (std::size_t j = 0; j < tested; ++j) {
    const HessianMatrix h = hessian_at(points[j], eta, space);
    const std::size_t hr = rank(h.entries, elimination);
    out.hessian_ranks.push_back(hr);
    lowest = std::min(lowest, hr);
  }
  out.timings.hessian = seconds_since(t0);
  out.hessian = RankCheck{lowest, expected_hessian_rank(n)};
  out.verdict = out.tangent.ok() && out.hessian->ok();
  out.timings.total = seconds_since(start);
  return out;
}

Certificate certify(const CertifyOptions& options) {
  const std::size_t n = options.n;
  if (n < 2) throw ContractViolation("certify: requires n >= 2, got " + std::to_string(n));
  const std::size_t r = options.r.value_or(default_rank(n));
  check_certify_shape(n, r);
  const PrimeModulus modulus(options.prime);
  std::ostream* log = options.log;

  std::vector<AttemptRecord> attempts;
  for (std::size_t attempt = 0; attempt <= options.retries; ++attempt) {
    const auto start = Clock::now();
    Certificate cert;
    cert.seed = attempt_seed(options.seed, attempt);
    cert.base_seed = options.seed;
    cert.attempt = attempt;
    cert.prime = options.prime;
    cert.n = n;
    cert.r = r;
    cert.hessian_scope = options.hessian_scope;
    if (log) *log << "[attempt " << attempt << "] seed " << cert.seed << '\n';

    auto t0 = Clock::now();
    SeededRng rng(cert.seed);
    SamplingStats stats;
    for (std::size_t j = 0; j < r; ++j) cert.points.push_back(sample_point(n, modulus, rng, &stats));
    cert.f0.resize(cert.codimension());
    for (auto& v : cert.f0) v = static_cast<Residue>(rng.uniform_below(modulus.value()));
    cert.zero_form_resamples = stats.zero_form_resamples;
    const double sampling = seconds_since(t0);

    Replay result = replay(modulus, n, r, cert.points, cert.f0, options.hessian_scope, options.elimination);
    result.timings.sampling = sampling;
    result.timings.total = seconds_since(start);
    if (log) {
      const std::size_t rows = kFactors * (n + 1) * r;
      *log << "  T: " << rows << " x " << ambient_dimension(n) << " mod " << options.prime << ", built "
           << secs(result.timings.terracini) << ", eliminated " << secs(result.timings.elimination) << "\n"
           << "  tangent " << rank_line(result.tangent) << '\n';
    }

    AttemptRecord record{attempt, cert.seed, result.tangent, result.hessian, {}};
    if (!result.tangent.ok()) {
      record.failure = "tangent rank " + std::to_string(result.tangent.observed) + " below expected " +
                       std::to_string(result.tangent.expected);
      if (log) *log << "  points not generic (" << record.failure << ")\n";
      attempts.push_back(std::move(record));
      continue;
    }
    if (log) {
      *log << "  eta: " << secs(result.timings.null_vector) << "; hessian " << kFactors * (n + 1) << " x "
           << kFactors * (n + 1) << (options.hessian_scope == HessianScope::kAllPoints ? " at every point" : "")
           << ", " << secs(result.timings.hessian) << "\n"
           << "  hessian " << rank_line(*result.hessian) << '\n';
    }
    if (!result.verdict) {
      record.failure = "hessian rank " + std::to_string(result.hessian->observed) + " below expected " +
                       std::to_string(result.hessian->expected);
      if (log) *log << "  normal vector not generic (" << record.failure << ")\n";
      attempts.push_back(std::move(record));
      continue;
    }
    cert.tangent = result.tangent;
    cert.hessian = *result.hessian;
    cert.verdict = true;
    cert.timings = result.timings;
    if (log) {
      *log << "  not-" << r << "-TWD TRUE for n = " << n << " (" << secs(result.timings.total) << ")\n";
    }
    return cert;
  }

  std::ostringstream msg;
  msg << "generic configuration not found for n = " << n << ", r = " << r << " after " << attempts.size()
      << " attempt(s); this does not disprove identifiability";
  for (const auto& a : attempts) msg << "\n  attempt " << a.attempt << " (seed " << a.seed << "): " << a.failure;
  throw CertifyError(msg.str(), std::move(attempts));
}

VerifyReport verify(const Certificate& cert, const EliminationOptions& elimination) {
  const auto start = Clock::now();
  VerifyReport report;
  report.parsed = true;
  report.certificate = cert;

  if (cert.checksum) {
    const std::string expected = record_checksum(cert);
    report.checksum_status = *cert.checksum == expected ? "match" : "mismatch";
    if (*cert.checksum != expected) {
      report.diffs.push_back("checksum: recorded " + *cert.checksum + ", record hashes to " + expected);
    }
  }

  const PrimeModulus modulus(cert.prime);
  Replay result = replay(modulus, cert.n, cert.r, cert.points, cert.f0, cert.hessian_scope, elimination);

  auto compare = [&](const char* what, const RankCheck& recorded, const RankCheck& observed) {
    if (recorded.observed != observed.observed || recorded.expected != observed.expected) {
      report.diffs.push_back(std::string(what) + ": recorded " + std::to_string(recorded.observed) + " / " +
                             std::to_string(recorded.expected) + ", recomputed " + std::to_string(observed.observed) +
                             " / " + std::to_string(observed.expected));
    }
  };
  compare("tangent_rank", cert.tangent, result.tangent);
  if (result.hessian) {
    compare("hessian_rank", cert.hessian, *result.hessian);
  } else {
    report.diffs.push_back("hessian_rank: not recomputable, tangent rank " + std::to_string(result.tangent.observed) +
                           " differs from " + std::to_string(result.tangent.expected));
  }
  if (cert.verdict != result.verdict) {
    report.diffs.push_back(std::string("verdict: recorded ") + (cert.verdict ? "TRUE" : "FALSE") + ", recomputed " +
                           (result.verdict ? "TRUE" : "FALSE"));
  }
  if (report.diffs.empty() && !cert.verdict) {
    report.diffs.push_back("verdict: certificate consistently records FALSE; nothing is proved");
  }
  report.recomputed = std::move(result);
  report.ok = report.diffs.empty();
  report.seconds = seconds_since(start);
  return report;
}

VerifyReport verify_text(std::string_view text, const EliminationOptions& elimination) {
  try {
    return verify(parse_certificate(text), elimination);
  } catch (const CertificateParseError& e) {
    VerifyReport report;
    report.diffs.push_back(std::string("parse error: ") + e.what());
    return report;
  } catch (const ContractViolation& e) {
    VerifyReport report;
    report.parsed = true;
    report.diffs.push_back(std::string("invalid certificate: ") + e.what());
    return report;
  }
}

VerifyReport verify_file(const std::filesystem::path& path, const EliminationOptions& elimination) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    VerifyReport report;
    report.diffs.push_back("cannot open " + path.string());
    return report;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return verify_text(text.str(), elimination);
}

}  // namespace chowid
