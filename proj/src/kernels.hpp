#pragma once

// Internal modular kernels shared by elimination and multiplication.

#include <cstddef>
#include <cstdint>

namespace chowid::detail {

struct MutView {
  std::uint32_t* data;
  std::size_t rows;
  std::size_t cols;
  std::size_t stride;
  std::uint32_t* row(std::size_t r) const { return data + r * stride; }
};

struct ConstView {
  const std::uint32_t* data;
  std::size_t rows;
  std::size_t cols;
  std::size_t stride;
  const std::uint32_t* row(std::size_t r) const { return data + r * stride; }
};

// Reduction helpers. The fast path keeps every intermediate below 2^53 so it
// can run in double precision; it applies when m < 2^26.
class ModOps {
 public:
  explicit ModOps(std::uint64_t m);

  std::uint64_t modulus() const { return m_; }
  bool fast() const { return fast_; }
  // Longest dot product whose exact value stays below 2^53 (0 if none).
  std::size_t max_exact_terms() const { return max_terms_; }

  // dst[j] = dst[j] + f * src[j]
  void axpy(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t f, std::size_t len) const;
  // dst[j] = f * dst[j]
  void scale(std::uint32_t* dst, std::uint32_t f, std::size_t len) const;

 private:
  std::uint64_t m_;
  double md_;
  double inv_m_;
  bool fast_;
  std::size_t max_terms_;
};

// c = c + a*b (or c - a*b) over Z/m, cache-blocked with a packed micro-kernel.
void gemm_update(MutView c, ConstView a, ConstView b, bool subtract, const ModOps& ops);

// Textbook triple loop, one reduction per term. Reference path.
void gemm_naive(MutView c, ConstView a, ConstView b, bool subtract, std::uint64_t m);

}  // namespace chowid::detail
