// chowid: certify / verify / rank-table / sweep / bench / validate-sff

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "chowid/certificate.hpp"
#include "chowid/errors.hpp"
#include "chowid/pipeline.hpp"
#include "chowid/sff_analysis.hpp"

namespace {

using namespace chowid;

int run_certify(const CertifyOptions& opts, const std::string& out) {
  try {
    const Certificate cert = certify(opts);
    if (out.empty()) {
      std::cout << format_certificate(cert);
    } else {
      write_certificate_file(out, cert);
      std::cerr << "wrote " << out << '\n';
    }
    return cert.verdict ? 0 : 1;
  } catch (const CertifyError& e) {
    std::cerr << "certify: " << e.what() << '\n';
    for (const auto& a : e.attempts()) {
      std::cerr << "  attempt " << a.attempt << " seed " << a.seed << ": " << a.failure << '\n';
    }
    std::cerr << "no verdict; this is not evidence against identifiability\n";
    return 2;
  }
}

int run_verify(const std::string& path) {
  const VerifyReport rep = verify_file(path);
  if (rep.certificate) {
    const auto& c = *rep.certificate;
    std::cout << "n = " << c.n << ", r = " << c.r << ", prime = " << c.prime << '\n';
  }
  if (rep.recomputed) {
    const auto& r = *rep.recomputed;
    std::cout << "tangent_rank = " << r.tangent.observed << " / " << r.tangent.expected << '\n';
    if (r.hessian) std::cout << "hessian_rank = " << r.hessian->observed << " / " << r.hessian->expected << '\n';
  }
  std::cout << "checksum: " << rep.checksum_status << '\n';
  for (const auto& d : rep.diffs) std::cout << "  - " << d << '\n';
  std::cout << (rep.ok ? "VERIFIED" : "REJECTED") << " (" << std::fixed << std::setprecision(3) << rep.seconds
            << " s)\n";
  return rep.ok ? 0 : 1;
}

int run_rank_table(std::size_t lo, std::size_t hi) {
  std::cout << "n,dim_ambient,cone_dim,r_gen,r_identifiable_bound,perfect,large_n_reduction\n";
  for (const auto& row : rank_table(lo, hi)) {
    std::cout << row.n << ',' << row.dim_ambient << ',' << row.cone_dim << ',' << row.r_gen << ','
              << row.r_identifiable_bound << ',' << (row.perfect ? 1 : 0) << ',' << (row.large_n_reduction ? 1 : 0)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generic identifiability checks for cubic Chow decompositions over prime fields"};
  app.require_subcommand(1);

  CertifyOptions cert_opts;
  std::size_t cert_r = 0;
  bool all_points = false;
  bool quiet = false;
  std::string cert_out;
  auto* certify_cmd = app.add_subcommand("certify", "sample a certificate for (n, r)");
  certify_cmd->add_option("--n", cert_opts.n, "number of variables minus one")->required()->check(CLI::Range(1, 1000));
  auto* r_opt = certify_cmd->add_option("--r", cert_r, "rank (default r_gen - 1)");
  certify_cmd->add_option("--prime", cert_opts.prime, "field characteristic")->capture_default_str();
  certify_cmd->add_option("--seed", cert_opts.seed, "RNG seed")->required();
  certify_cmd->add_option("--retries", cert_opts.retries, "attempts after a non-generic draw")->capture_default_str();
  certify_cmd->add_flag("--all-points", all_points, "check the Hessian at every point");
  certify_cmd->add_flag("--quiet", quiet, "no progress output");
  certify_cmd->add_option("--out", cert_out, "output file (default stdout)");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "replay a certificate");
  verify_cmd->add_option("file", verify_path)->required();

  std::size_t table_min = 1, table_max = 103;
  auto* table_cmd = app.add_subcommand("rank-table", "generic ranks and bounds");
  table_cmd->add_option("--min", table_min)->capture_default_str();
  table_cmd->add_option("--max", table_max)->capture_default_str();

  SweepOptions sweep_opts;
  std::string sweep_csv, sweep_dir;
  auto* sweep_cmd = app.add_subcommand("sweep", "certify each n at r_gen - 1");
  sweep_cmd->add_option("--min", sweep_opts.n_min)->capture_default_str();
  sweep_cmd->add_option("--max", sweep_opts.n_max)->capture_default_str();
  sweep_cmd->add_option("--prime", sweep_opts.prime)->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_opts.seed)->capture_default_str();
  sweep_cmd->add_option("--retries", sweep_opts.retries)->capture_default_str();
  sweep_cmd->add_option("--csv", sweep_csv, "CSV output (default stdout)");
  sweep_cmd->add_option("--cert-dir", sweep_dir, "write each certificate here");
  sweep_cmd->add_flag("--allow-large", sweep_opts.allow_large, "permit n above " + std::to_string(sweep_opts.max_n));

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "time naive vs blocked elimination and products");
  bench_cmd->add_option("--sizes", bench_opts.sizes)->delimiter(',');
  bench_cmd->add_option("--prime", bench_opts.prime)->capture_default_str();
  bench_cmd->add_option("--seed", bench_opts.seed)->capture_default_str();
  bench_cmd->add_option("--repetitions", bench_opts.repetitions)->capture_default_str();

  std::size_t sff_d = 3, sff_n = 3;
  std::uint64_t sff_prime = kDefaultPrime;
  auto* sff_cmd = app.add_subcommand("validate-sff", "check the closed forms at x_0 ... x_{d-1}");
  sff_cmd->add_option("--d", sff_d)->required();
  sff_cmd->add_option("--n", sff_n)->required();
  sff_cmd->add_option("--prime", sff_prime)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*certify_cmd) {
      if (*r_opt) cert_opts.r = cert_r;
      cert_opts.hessian_scope = all_points ? HessianScope::kAllPoints : HessianScope::kFirstPoint;
      if (!quiet) cert_opts.log = &std::cerr;
      return run_certify(cert_opts, cert_out);
    }
    if (*verify_cmd) return run_verify(verify_path);
    if (*table_cmd) return run_rank_table(table_min, table_max);
    if (*sweep_cmd) {
      if (!sweep_dir.empty()) sweep_opts.certificate_dir = sweep_dir;
      sweep_opts.log = &std::cerr;
      const auto rows = sweep(sweep_opts);
      if (sweep_csv.empty()) {
        write_sweep_csv(std::cout, rows);
      } else {
        std::ofstream os(sweep_csv);
        if (!os) throw std::runtime_error("cannot write " + sweep_csv);
        write_sweep_csv(os, rows);
      }
      bool all_true = true;
      for (const auto& r : rows) all_true = all_true && r.verdict;
      return all_true ? 0 : 1;
    }
    if (*bench_cmd) {
      const auto rows = bench(bench_opts);
      write_bench_report(std::cout, rows);
      return 0;
    }
    if (*sff_cmd) {
      const auto v = validate_sff(sff_d, sff_n, PrimeModulus(sff_prime));
      write_sff_report(std::cout, v);
      return v.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
