#include <chrono>
#include <cstdio>
#include <ostream>

#include "chowid/pipeline.hpp"

namespace chowid {

std::vector<SweepRow> sweep(const SweepOptions& options) {
  if (options.n_min < 1 || options.n_max < options.n_min) throw ContractViolation("sweep: empty range");
  if (options.n_max > options.max_n && !options.allow_large) {
    throw ContractViolation("sweep: n_max " + std::to_string(options.n_max) + " exceeds the desk-scale cap " +
                            std::to_string(options.max_n) + " (override explicitly to run it)");
  }
  if (options.certificate_dir) std::filesystem::create_directories(*options.certificate_dir);

  std::vector<SweepRow> rows;
  double cumulative = 0;
  for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
    const std::size_t r = default_rank(n);
    if (r == 0 || n < 2) continue;
    SweepRow row;
    row.n = n;
    row.r = r;
    row.dim_ambient = ambient_dimension(n);

    CertifyOptions co;
    co.n = n;
    co.r = r;
    co.prime = options.prime;
    co.seed = derive_seed(options.seed, n);
    co.retries = options.retries;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Certificate cert = certify(co);
      row.tangent_rank = cert.tangent.observed;
      row.hessian_rank = cert.hessian.observed;
      row.verdict = cert.verdict;
      if (options.certificate_dir) {
        write_certificate_file(
            *options.certificate_dir / ("chow3_n" + std::to_string(n) + "_r" + std::to_string(r) + ".cert"), cert);
      }
    } catch (const CertifyError& e) {
      const auto& last = e.attempts().back();
      row.tangent_rank = last.tangent.observed;
      row.hessian_rank = last.hessian ? last.hessian->observed : 0;
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cumulative += row.seconds;
    row.cumulative_seconds = cumulative;
    if (options.log) {
      *options.log << "n = " << n << ", r = " << r << ": " << (row.verdict ? "TRUE" : "FALSE") << " in "
                   << row.seconds << "s (cumulative " << cumulative << "s)\n";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "n,r,dim_ambient,tangent_rank,hessian_rank,verdict,seconds,cumulative_seconds\n";
  char buf[64];
  for (const auto& row : rows) {
    os << row.n << ',' << row.r << ',' << row.dim_ambient << ',' << row.tangent_rank << ',' << row.hessian_rank
       << ',' << (row.verdict ? "TRUE" : "FALSE") << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", row.seconds, row.cumulative_seconds);
    os << buf << '\n';
  }
}

}  // namespace chowid
