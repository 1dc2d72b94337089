#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chowid/chow_geometry.hpp"

namespace chowid {

enum class HessianScope { kFirstPoint, kAllPoints };

struct RankCheck {
  std::size_t observed = 0;
  std::size_t expected = 0;

  bool ok() const noexcept { return observed == expected; }
  friend bool operator==(const RankCheck&, const RankCheck&) = default;
};

struct Timings {
  double sampling = 0;
  double terracini = 0;
  double elimination = 0;
  double null_vector = 0;
  double hessian = 0;
  double total = 0;
};

// Record of one not-r-TWD check. Everything needed to replay the computation
// is stored explicitly; the seed is informational.
struct Certificate {
  std::uint64_t seed = 0;
  std::uint64_t prime = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  HessianScope hessian_scope = HessianScope::kFirstPoint;
  std::vector<ChowPoint> points;
  ResidueVector f0;
  RankCheck tangent;
  RankCheck hessian;
  bool verdict = false;

  // Written as comment lines; not part of the checked record.
  std::size_t attempt = 0;
  std::uint64_t base_seed = 0;
  std::size_t zero_form_resamples = 0;
  Timings timings;

  // Set by the parser when the file carries a checksum line.
  std::optional<std::string> checksum;

  // binom(n+3, 3) - (3n+1) r, the number of free normal coordinates.
  std::size_t codimension() const;
};

class CertificateParseError : public std::runtime_error {
 public:
  CertificateParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Human-readable text with aligned columns, comment lines and a trailing
// checksum line.
std::string format_certificate(const Certificate& cert);
// Key lines only, single-space separated; the checksum covers exactly this.
std::string canonical_record(const Certificate& cert);
// "sha256:<hex>" of canonical_record.
std::string record_checksum(const Certificate& cert);

Certificate parse_certificate(std::string_view text);
Certificate read_certificate_file(const std::filesystem::path& path);
void write_certificate_file(const std::filesystem::path& path, const Certificate& cert);

}  // namespace chowid
