// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chowid/certificate.hpp"
#include "chowid/pipeline.hpp"
#include "chowid/sff_analysis.hpp"
#include "oracles.hpp"
#include "tamper.hpp"

using namespace chowid;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

FfMatrix random_matrix(std::size_t r, std::size_t c, const PrimeModulus& m, SeededRng& rng) {
  FfMatrix a(r, c, m);
  for (auto& x : a.data()) x = static_cast<Residue>(rng.uniform_below(m.value()));
  return a;
}

LinearForm random_form(std::size_t n, const PrimeModulus& m, SeededRng& rng) {
  ResidueVector c(n + 1);
  for (auto& x : c) x = static_cast<Residue>(rng.uniform_below(m.value()));
  return LinearForm(m, c);
}

// ---------------------------------------------------------------------------

Outcome reference_replay() {
  const VerifyReport rep = verify_file(std::string(CHOWID_TEST_DATA) + "/reference_n5_r3.cert");
  Outcome o;
  if (!rep.recomputed || !rep.recomputed->hessian) {
    o.pass = false;
    o.detail = rep.diffs.empty() ? "no replay" : rep.diffs.front();
    return o;
  }
  const auto& r = *rep.recomputed;
  o.pass = rep.ok && r.tangent == RankCheck{48, 48} && *r.hessian == RankCheck{15, 15} && r.verdict &&
           rep.seconds < 1.0;
  o.detail = "tangent " + std::to_string(r.tangent.observed) + "/" + std::to_string(r.tangent.expected) +
             ", hessian " + std::to_string(r.hessian->observed) + "/" + std::to_string(r.hessian->expected) +
             ", verdict " + (r.verdict ? "TRUE" : "FALSE") + ", " + fmt(rep.seconds, 4) + " s";
  return o;
}

Outcome sweep_to_30() {
  SweepOptions opts;
  opts.n_min = 2;
  opts.n_max = 30;
  opts.seed = 2024;
  const auto start = Clock::now();
  const auto rows = sweep(opts);
  const double total = since(start);
  Outcome o;
  std::size_t good = 0;
  for (const auto& r : rows) {
    const bool ok = r.verdict && r.error.empty() && r.r == default_rank(r.n) &&
                    r.tangent_rank == (3 * r.n + 1) * r.r && r.hessian_rank == 3 * r.n;
    good += ok;
    if (!ok && o.detail.empty()) o.detail = "n=" + std::to_string(r.n) + " failed: " + r.error + "; ";
  }
  o.pass = rows.size() == 29 && good == rows.size() && total < 600;
  o.detail += std::to_string(good) + "/" + std::to_string(rows.size()) + " rows TRUE with expected ranks, " +
              fmt(total, 1) + " s total (n=30: " + (rows.empty() ? "-" : fmt(rows.back().seconds, 1)) + " s)";
  return o;
}

Outcome rank_table_check() {
  Outcome o;
  std::vector<std::size_t> perfect;
  std::size_t first_large = 0, mismatches = 0;
  for (const auto& row : rank_table(1, 103)) {
    const std::uint64_t n = row.n;
    const std::uint64_t dim = (n + 3) * (n + 2) * (n + 1) / 6, cone = 3 * n + 1;
    mismatches += row.dim_ambient != dim || row.cone_dim != cone || row.r_gen != (dim + cone - 1) / cone ||
                  row.perfect != (dim % cone == 0) || row.large_n_reduction != (2 * cone < dim / cone);
    if (row.perfect) perfect.push_back(n);
    if (row.large_n_reduction && first_large == 0) first_large = n;
  }
  o.pass = mismatches == 0 && perfect == std::vector<std::size_t>{1, 3, 13} && first_large == 103;
  std::string ps;
  for (auto p : perfect) ps += (ps.empty() ? "" : ",") + std::to_string(p);
  o.detail = "perfect at {" + ps + "}, threshold first holds at n=" + std::to_string(first_large) + ", " +
             std::to_string(mismatches) + " formula mismatches";
  return o;
}

Outcome sff_check() {
  Outcome o;
  const PrimeModulus m(kDefaultPrime);
  std::size_t tuples = 0, bad_tuples = 0, eta_bad = 0, table_bad = 0;
  const std::vector<std::pair<std::size_t, std::size_t>> enumerated{{3, 3}, {3, 4}, {3, 5}, {3, 6},
                                                                    {4, 4}, {4, 5}, {4, 6}};
  for (auto [d, n] : enumerated) {
    const SffValidation v = validate_sff(d, n, m);
    for (const auto& c : v.cases) {
      tuples += c.checked;
      bad_tuples += c.checked - c.passed;
    }
    eta_bad += !v.eta_normal;
    table_bad += v.contraction.checked - v.contraction.passed;
  }
  std::size_t gh_cases = 0, gh_bad = 0;
  for (std::size_t d = 3; d <= 6; ++d) {
    for (std::size_t n = d - 1; n <= d + 4; ++n) {
      ++gh_cases;
      gh_bad += !gh_check(gh_build(d, n, m)).ok();
    }
  }
  o.pass = bad_tuples == 0 && eta_bad == 0 && table_bad == 0 && gh_bad == 0;
  o.detail = std::to_string(tuples - bad_tuples) + "/" + std::to_string(tuples) + " branch tuples, eta normal " +
             std::to_string(enumerated.size() - eta_bad) + "/" + std::to_string(enumerated.size()) +
             ", contraction mismatches " + std::to_string(table_bad) + ", gh_check " +
             std::to_string(gh_cases - gh_bad) + "/" + std::to_string(gh_cases);
  return o;
}

// --- property suites ---

std::size_t field_axiom_failures() {
  std::size_t bad = 0;
  SeededRng rng(501);
  for (std::uint64_t p : {7ull, 8191ull, 20201ull, 202001ull}) {
    const PrimeModulus m(p);
    const FieldElement zero(0, m), one(1, m);
    for (int t = 0; t < 10000; ++t) {
      const FieldElement a = sample_uniform(m, rng), b = sample_uniform(m, rng), c = sample_uniform(m, rng);
      bad += !((a + b) + c == a + (b + c));
      bad += !((a * b) * c == a * (b * c));
      bad += !(a + b == b + a);
      bad += !(a * b == b * a);
      bad += !(a * (b + c) == a * b + a * c);
      bad += !(a + zero == a && a * one == a);
      bad += !(a + (-a) == zero && a - b == a + (-b));
      if (!a.is_zero()) bad += !(a * a.inv() == one && (b / a) * a == b);
      // Independent check of the product with 128-bit arithmetic.
      bad += (a * b).value() != static_cast<std::uint64_t>((unsigned __int128)a.value() * b.value() % p);
    }
  }
  return bad;
}

std::size_t rref_property_failures() {
  std::size_t bad = 0;
  SeededRng rng(502);
  const PrimeModulus m(kDefaultPrime);
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = 1 + rng.uniform_below(100), c = 1 + rng.uniform_below(150);
    FfMatrix a = random_matrix(r, c, m, rng);
    if (t % 2 == 1) {
      const std::size_t k = 1 + rng.uniform_below(std::min(r, c));
      a = oracle::product(random_matrix(r, k, m, rng), random_matrix(k, c, m, rng));
    }
    const RrefResult res = rref(a);
    const FfMatrix e = res.echelon();
    const RrefResult again = rref(e);
    bad += !(again.echelon() == e) || again.rank != res.rank;
    bad += res.rank != oracle::rank(a);
    if (res.nullity() > 0) {
      ResidueVector f0(res.nullity());
      for (auto& x : f0) x = static_cast<Residue>(rng.uniform_below(m.value()));
      for (Residue v : mul_vec(a, null_vector(res, f0))) bad += v != 0;
    }
  }
  return bad;
}

std::size_t fast_vs_naive_failures() {
  std::size_t bad = 0;
  SeededRng rng(503);
  const PrimeModulus m(kDefaultPrime);
  std::vector<std::array<std::size_t, 3>> shapes{{256, 256, 256}, {255, 129, 256}, {1, 256, 1}, {200, 3, 250}};
  for (int t = 0; t < 16; ++t) {
    shapes.push_back({1 + rng.uniform_below(256), 1 + rng.uniform_below(256), 1 + rng.uniform_below(256)});
  }
  for (auto [r, k, c] : shapes) {
    const FfMatrix a = random_matrix(r, k, m, rng), b = random_matrix(k, c, m, rng);
    const FfMatrix naive = mul_mat(a, b, Multiplication::kNaive);
    bad += !(mul_mat(a, b, Multiplication::kBlocked) == naive);
    bad += !(mul_mat(a, b, Multiplication::kStrassen) == naive);
    const std::size_t kk = 1 + rng.uniform_below(std::min(r, c));
    const FfMatrix low = mul_mat(random_matrix(r, kk, m, rng), random_matrix(kk, c, m, rng));
    for (const FfMatrix* x : {&a, &low}) {
      bad += rank(*x, {Elimination::kBlocked}) != rank(*x, {Elimination::kNaive});
      const auto fast = rref(*x), slow = rref(*x, {Elimination::kNaive});
      bad += !(fast.reduced == slow.reduced) || fast.pivot_cols != slow.pivot_cols;
    }
  }
  return bad;
}

std::size_t expand_product_failures() {
  std::size_t bad = 0;
  SeededRng rng(504);
  const PrimeModulus m(kDefaultPrime);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.uniform_below(6);
    const std::vector<LinearForm> f{random_form(n, m, rng), random_form(n, m, rng), random_form(n, m, rng)};
    const Poly p = expand_product(f);
    // All six orders.
    std::array<std::size_t, 3> perm{0, 1, 2};
    do {
      const std::vector<LinearForm> g{f[perm[0]], f[perm[1]], f[perm[2]]};
      bad += !(expand_product(g) == p);
    } while (std::next_permutation(perm.begin(), perm.end()));
    // Linearity in a random slot.
    const std::size_t slot = rng.uniform_below(3);
    const LinearForm h = random_form(n, m, rng);
    const std::uint64_t s = rng.uniform_below(m.value());
    auto mixed = f, only = f;
    mixed[slot] = f[slot].scaled(s) + h;
    only[slot] = h;
    bad += !(expand_product(mixed) == p.scaled(s) + expand_product(only));
    // Value at a random point equals the product of the form values.
    std::vector<std::uint64_t> x(n + 1);
    for (auto& v : x) v = rng.uniform_below(m.value());
    std::uint64_t want = 1;
    for (const auto& form : f) want = want * oracle::evaluate(form, x) % m.value();
    if (t < 100) bad += oracle::evaluate(p, x) != want;
  }
  return bad;
}

std::size_t hessian_failures() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CertifyOptions co;
    co.n = 2 + seed % 9;
    co.seed = 9000 + seed;
    const Certificate c = certify(co);
    const PrimeModulus m(c.prime);
    const Replay rep = replay(m, c.n, c.r, c.points, c.f0, HessianScope::kFirstPoint);
    const Poly eta(MonomialBasis(c.n, 3), m, rep.eta);
    const ChowPoint& p = c.points.front();
    const HessianMatrix h = hessian_at(p, eta);
    bad += !h.entries.is_symmetric();
    bad += !h.diagonal_blocks_zero();
    for (const auto& dir : scaling_fiber_directions(p)) {
      for (Residue v : mul_vec(h.entries, dir)) bad += v != 0;
    }
  }
  return bad;
}

Outcome property_suites() {
  Outcome o;
  const std::vector<std::pair<std::string, std::function<std::size_t()>>> suites{
      {"field", field_axiom_failures},          {"rref", rref_property_failures},
      {"fast-vs-naive", fast_vs_naive_failures}, {"expand", expand_product_failures},
      {"hessian", hessian_failures}};
  for (const auto& [name, fn] : suites) {
    const std::size_t bad = fn();
    o.pass = o.pass && bad == 0;
    o.detail += (o.detail.empty() ? "" : ", ") + name + " " + (bad == 0 ? "ok" : std::to_string(bad) + " violations");
  }
  return o;
}

Outcome tamper_detection() {
  CertifyOptions co;
  co.n = 6;
  co.seed = 31337;
  const std::string text = format_certificate(certify(co));
  Outcome o;
  if (!verify_text(text).ok) return {false, "untampered certificate does not verify"};
  SeededRng rng(505);
  std::size_t rejected = 0, parse = 0, rank = 0, seal_only = 0;
  for (int t = 0; t < 50; ++t) {
    const auto bad = tamper::corrupt(text, rng, true);
    const VerifyReport rep = verify_text(bad.text);
    if (rep.ok) {
      if (o.detail.empty()) o.detail = "accepted " + bad.description + "; ";
      continue;
    }
    ++rejected;
    if (!rep.parsed || rep.diffs.front().rfind("invalid", 0) == 0) {
      ++parse;
    } else if (rep.checksum_status == "mismatch" && rep.diffs.size() == 1) {
      ++seal_only;
    } else {
      ++rank;
    }
  }
  o.pass = rejected == 50;
  o.detail += std::to_string(rejected) + "/50 rejected (" + std::to_string(parse) + " parse, " +
              std::to_string(rank) + " rank/verdict, " + std::to_string(seal_only) +
              " checksum only; rank/parse diffs alone cannot see coordinate edits)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reference certificate replay", reference_replay},
      {"sweep n=2..30 at r_gen-1", sweep_to_30},
      {"rank table n=1..103", rank_table_check},
      {"second fundamental form closed forms", sff_check},
      {"exact property suites", property_suites},
      {"tamper detection", tamper_detection}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << o.detail
              << "  [" << fmt(since(start), 1) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
