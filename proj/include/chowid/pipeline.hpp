#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowid/certificate.hpp"
#include "chowid/chow_geometry.hpp"
#include "chowid/ff_matrix.hpp"

namespace chowid {

inline constexpr std::uint64_t kDefaultPrime = 20201;

// ---------------------------------------------------------------------------
// Rank table

struct RankTableRow {
  std::size_t n = 0;
  std::size_t dim_ambient = 0;
  std::size_t cone_dim = 0;
  std::size_t r_gen = 0;
  // floor(dim_ambient / cone_dim) - 1; may be 0 for tiny n.
  std::int64_t r_identifiable_bound = 0;
  bool perfect = false;
  // 2 (3n+1) < floor(dim_ambient / cone_dim): the large-n argument applies
  // and no computer check is required.
  bool large_n_reduction = false;
};

RankTableRow rank_table_row(std::size_t n);
std::vector<RankTableRow> rank_table(std::size_t n_min, std::size_t n_max);
// r_gen - 1, the rank at which the computer check runs.
std::size_t default_rank(std::size_t n);

// ---------------------------------------------------------------------------
// Certify / verify

struct CertifyOptions {
  std::size_t n = 0;
  // Defaults to r_gen - 1.
  std::optional<std::size_t> r;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
  // Extra attempts with derived seeds after a non-generic draw.
  std::size_t retries = 3;
  HessianScope hessian_scope = HessianScope::kFirstPoint;
  EliminationOptions elimination;
  // Progress lines, or nullptr for silence.
  std::ostream* log = nullptr;
};

struct AttemptRecord {
  std::size_t attempt = 0;
  std::uint64_t seed = 0;
  RankCheck tangent;
  std::optional<RankCheck> hessian;
  std::string failure;
};

// All attempts drew non-generic data. This does not disprove identifiability.
class CertifyError : public std::runtime_error {
 public:
  CertifyError(const std::string& message, std::vector<AttemptRecord> attempts);
  const std::vector<AttemptRecord>& attempts() const noexcept { return attempts_; }

 private:
  std::vector<AttemptRecord> attempts_;
};

// Seed used by the given attempt; attempt 0 uses the base seed itself.
std::uint64_t attempt_seed(std::uint64_t base_seed, std::size_t attempt);

Certificate certify(const CertifyOptions& options);

// Deterministic part of the check from recorded points and free variables.
struct Replay {
  RankCheck tangent;
  // Unset when the tangent rank is off (the normal space has the wrong size).
  std::optional<RankCheck> hessian;
  // Hessian rank at each tested point.
  std::vector<std::size_t> hessian_ranks;
  ResidueVector eta;
  bool verdict = false;
  Timings timings;
};

Replay replay(const PrimeModulus& modulus, std::size_t n, std::size_t r, std::span<const ChowPoint> points,
              std::span<const Residue> f0, HessianScope scope, const EliminationOptions& elimination = {});

struct VerifyReport {
  bool ok = false;
  bool parsed = false;
  std::optional<Certificate> certificate;
  std::optional<Replay> recomputed;
  // "absent", "match" or "mismatch".
  std::string checksum_status = "absent";
  std::vector<std::string> diffs;
  double seconds = 0;
};

VerifyReport verify(const Certificate& cert, const EliminationOptions& elimination = {});
VerifyReport verify_text(std::string_view text, const EliminationOptions& elimination = {});
VerifyReport verify_file(const std::filesystem::path& path, const EliminationOptions& elimination = {});

// ---------------------------------------------------------------------------
// Sweep

struct SweepOptions {
  std::size_t n_min = 2;
  std::size_t n_max = 20;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
  std::size_t retries = 3;
  std::size_t max_n = 40;
  bool allow_large = false;
  // When set, each certificate is written as <dir>/chow3_n<N>_r<R>.cert.
  std::optional<std::filesystem::path> certificate_dir;
  std::ostream* log = nullptr;
};

struct SweepRow {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t dim_ambient = 0;
  std::size_t tangent_rank = 0;
  std::size_t hessian_rank = 0;
  bool verdict = false;
  double seconds = 0;
  double cumulative_seconds = 0;
  std::string error;
};

// Runs certify at r = r_gen - 1 for each n, in order; per-case failures are
// recorded in the row and the sweep continues.
std::vector<SweepRow> sweep(const SweepOptions& options);
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

// ---------------------------------------------------------------------------
// Bench

struct BenchRow {
  std::size_t size = 0;
  double naive_rref_seconds = 0;
  double blocked_rref_seconds = 0;
  double naive_mul_seconds = 0;
  double blocked_mul_seconds = 0;
  double strassen_mul_seconds = 0;
  bool ranks_agree = false;
  bool products_agree = false;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{128, 256, 512};
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 1;
  std::size_t repetitions = 1;
};

std::vector<BenchRow> bench(const BenchOptions& options);
// log(t2 / t1) / log(s2 / s1) between consecutive rows, for a chosen timing.
std::vector<double> scaling_exponents(std::span<const BenchRow> rows, double BenchRow::*timing);
void write_bench_report(std::ostream& os, std::span<const BenchRow> rows);

}  // namespace chowid
