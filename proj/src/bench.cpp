#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "chowid/pipeline.hpp"

namespace chowid {

namespace {

FfMatrix random_matrix(std::size_t rows, std::size_t cols, const PrimeModulus& mod, SeededRng& rng) {
  FfMatrix a(rows, cols, mod);
  for (auto& v : a.data()) v = static_cast<Residue>(rng.uniform_below(mod.value()));
  return a;
}

template <typename F>
double best_time(std::size_t repetitions, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::max<std::size_t>(repetitions, 1); ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

}  // namespace

std::vector<BenchRow> bench(const BenchOptions& options) {
  const PrimeModulus mod(options.prime);
  SeededRng rng(options.seed);
  std::vector<BenchRow> rows;
  for (std::size_t size : options.sizes) {
    BenchRow row;
    row.size = size;
    const FfMatrix a = random_matrix(size, size, mod, rng);
    const FfMatrix b = random_matrix(size, size, mod, rng);
    std::size_t naive_rank = 0, blocked_rank = 0;
    row.naive_rref_seconds =
        best_time(options.repetitions, [&] { naive_rank = rank(a, {Elimination::kNaive, 64}); });
    row.blocked_rref_seconds =
        best_time(options.repetitions, [&] { blocked_rank = rank(a, {Elimination::kBlocked, 64}); });
    row.ranks_agree = naive_rank == blocked_rank;
    FfMatrix naive(0, 0, mod), blocked(0, 0, mod), strassen(0, 0, mod);
    row.naive_mul_seconds = best_time(options.repetitions, [&] { naive = mul_mat(a, b, Multiplication::kNaive); });
    row.blocked_mul_seconds =
        best_time(options.repetitions, [&] { blocked = mul_mat(a, b, Multiplication::kBlocked); });
    row.strassen_mul_seconds =
        best_time(options.repetitions, [&] { strassen = mul_mat(a, b, Multiplication::kStrassen); });
    row.products_agree = naive == blocked && naive == strassen;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> scaling_exponents(std::span<const BenchRow> rows, double BenchRow::*timing) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t1 = rows[i - 1].*timing, t2 = rows[i].*timing;
    const double s1 = static_cast<double>(rows[i - 1].size), s2 = static_cast<double>(rows[i].size);
    out.push_back(std::log(t2 / t1) / std::log(s2 / s1));
  }
  return out;
}

void write_bench_report(std::ostream& os, std::span<const BenchRow> rows) {
  char buf[256];
  os << "  size   rref naive  rref blocked    mul naive  mul blocked mul strassen  ranks  products\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%6zu %12.4f %13.4f %12.4f %12.4f %12.4f  %5s  %8s\n", r.size, r.naive_rref_seconds,
                  r.blocked_rref_seconds, r.naive_mul_seconds, r.blocked_mul_seconds, r.strassen_mul_seconds,
                  r.ranks_agree ? "same" : "DIFF", r.products_agree ? "same" : "DIFF");
    os << buf;
  }
  if (rows.size() < 2) return;
  struct Series {
    const char* name;
    double BenchRow::*timing;
  };
  const Series series[] = {{"rref naive", &BenchRow::naive_rref_seconds},
                           {"rref blocked", &BenchRow::blocked_rref_seconds},
                           {"mul naive", &BenchRow::naive_mul_seconds},
                           {"mul blocked", &BenchRow::blocked_mul_seconds},
                           {"mul strassen", &BenchRow::strassen_mul_seconds}};
  os << "observed scaling exponents between consecutive sizes:\n";
  for (const auto& s : series) {
    os << "  " << s.name << ':';
    for (double e : scaling_exponents(rows, s.timing)) {
      std::snprintf(buf, sizeof buf, " %.2f", e);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace chowid
