#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "kernels.hpp"

namespace chowid::detail {

namespace {

constexpr std::size_t kMr = 6;
constexpr std::size_t kNr = 16;
constexpr std::size_t kMc = 96;
constexpr std::size_t kKc = 256;
constexpr std::size_t kNc = 2048;

constexpr double kTwo53 = 9007199254740992.0;

using v8d = double __attribute__((vector_size(64)));

inline double reduce_exact(double x, double m, double inv_m) {
  double r = x - std::floor(x * inv_m) * m;
  if (r < 0) r += m;
  if (r >= m) r -= m;
  return r;
}

inline v8d load8(const double* p) {
  v8d v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store8(double* p, v8d v) { std::memcpy(p, &v, sizeof v); }

// acc[r][c] = sum_k a[k][r] * b[k][c] over one packed 6x16 tile.
void micro_kernel(std::size_t kc, const double* a, const double* b, double* acc) {
  v8d c00{}, c01{}, c10{}, c11{}, c20{}, c21{}, c30{}, c31{}, c40{}, c41{}, c50{}, c51{};
  for (std::size_t k = 0; k < kc; ++k) {
    const v8d b0 = load8(b);
    const v8d b1 = load8(b + 8);
    const double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3], a4 = a[4], a5 = a[5];
    c00 += a0 * b0;
    c01 += a0 * b1;
    c10 += a1 * b0;
    c11 += a1 * b1;
    c20 += a2 * b0;
    c21 += a2 * b1;
    c30 += a3 * b0;
    c31 += a3 * b1;
    c40 += a4 * b0;
    c41 += a4 * b1;
    c50 += a5 * b0;
    c51 += a5 * b1;
    a += kMr;
    b += kNr;
  }
  store8(acc + 0 * kNr, c00);
  store8(acc + 0 * kNr + 8, c01);
  store8(acc + 1 * kNr, c10);
  store8(acc + 1 * kNr + 8, c11);
  store8(acc + 2 * kNr, c20);
  store8(acc + 2 * kNr + 8, c21);
  store8(acc + 3 * kNr, c30);
  store8(acc + 3 * kNr + 8, c31);
  store8(acc + 4 * kNr, c40);
  store8(acc + 4 * kNr + 8, c41);
  store8(acc + 5 * kNr, c50);
  store8(acc + 5 * kNr + 8, c51);
}

void pack_a(ConstView a, std::size_t i0, std::size_t mc, std::size_t k0, std::size_t kc, double* out) {
  for (std::size_t ir = 0; ir < mc; ir += kMr) {
    const std::size_t mr = std::min(kMr, mc - ir);
    for (std::size_t k = 0; k < kc; ++k) {
      std::size_t r = 0;
      for (; r < mr; ++r) out[k * kMr + r] = a.row(i0 + ir + r)[k0 + k];
      for (; r < kMr; ++r) out[k * kMr + r] = 0.0;
    }
    out += kc * kMr;
  }
}

void pack_b(ConstView b, std::size_t k0, std::size_t kc, std::size_t j0, std::size_t nc, double* out) {
  for (std::size_t jr = 0; jr < nc; jr += kNr) {
    const std::size_t nr = std::min(kNr, nc - jr);
    for (std::size_t k = 0; k < kc; ++k) {
      const std::uint32_t* src = b.row(k0 + k) + j0 + jr;
      double* dst = out + k * kNr;
      std::size_t c = 0;
      for (; c < nr; ++c) dst[c] = src[c];
      for (; c < kNr; ++c) dst[c] = 0.0;
    }
    out += kc * kNr;
  }
}

void gemm_exact_double(MutView c, ConstView a, ConstView b, bool subtract, const ModOps& ops) {
  const std::size_t m = c.rows, n = c.cols, depth = a.cols;
  const double md = static_cast<double>(ops.modulus());
  const double inv_m = 1.0 / md;
  const std::size_t kc_max = std::min(kKc, ops.max_exact_terms());

  thread_local std::vector<double> a_pack, b_pack;
  a_pack.resize(kMc * kc_max);
  b_pack.resize(kNc * kc_max + kNr * kc_max);
  alignas(64) double acc[kMr * kNr];

  for (std::size_t j0 = 0; j0 < n; j0 += kNc) {
    const std::size_t nc = std::min(kNc, n - j0);
    for (std::size_t k0 = 0; k0 < depth; k0 += kc_max) {
      const std::size_t kc = std::min(kc_max, depth - k0);
      pack_b(b, k0, kc, j0, nc, b_pack.data());
      for (std::size_t i0 = 0; i0 < m; i0 += kMc) {
        const std::size_t mc = std::min(kMc, m - i0);
        pack_a(a, i0, mc, k0, kc, a_pack.data());
        for (std::size_t jr = 0; jr < nc; jr += kNr) {
          const std::size_t nr = std::min(kNr, nc - jr);
          const double* bp = b_pack.data() + (jr / kNr) * kc * kNr;
          for (std::size_t ir = 0; ir < mc; ir += kMr) {
            const std::size_t mr = std::min(kMr, mc - ir);
            micro_kernel(kc, a_pack.data() + (ir / kMr) * kc * kMr, bp, acc);
            for (std::size_t r = 0; r < mr; ++r) {
              std::uint32_t* out = c.row(i0 + ir + r) + j0 + jr;
              const double* tile = acc + r * kNr;
              for (std::size_t q = 0; q < nr; ++q) {
                const double prod = reduce_exact(tile[q], md, inv_m);
                double v = static_cast<double>(out[q]);
                v = subtract ? v - prod : v + prod;
                if (v < 0) v += md;
                if (v >= md) v -= md;
                out[q] = static_cast<std::uint32_t>(v);
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

ModOps::ModOps(std::uint64_t m)
    : m_(m), md_(static_cast<double>(m)), inv_m_(1.0 / static_cast<double>(m)), fast_(m < (1ULL << 26)) {
  const double sq = static_cast<double>(m - 1) * static_cast<double>(m - 1);
  const double terms = std::floor((kTwo53 - md_) / sq);
  max_terms_ = terms >= 1.0 ? static_cast<std::size_t>(std::min(terms, 1e15)) : 0;
}

void ModOps::axpy(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t f, std::size_t len) const {
  if (f == 0) return;
  if (fast_) {
    const double fd = f;
    for (std::size_t j = 0; j < len; ++j) {
      const double x = static_cast<double>(dst[j]) + fd * static_cast<double>(src[j]);
      dst[j] = static_cast<std::uint32_t>(reduce_exact(x, md_, inv_m_));
    }
  } else {
    for (std::size_t j = 0; j < len; ++j) {
      dst[j] = static_cast<std::uint32_t>((dst[j] + std::uint64_t{f} * src[j]) % m_);
    }
  }
}

void ModOps::scale(std::uint32_t* dst, std::uint32_t f, std::size_t len) const {
  if (fast_) {
    const double fd = f;
    for (std::size_t j = 0; j < len; ++j) {
      dst[j] = static_cast<std::uint32_t>(reduce_exact(fd * static_cast<double>(dst[j]), md_, inv_m_));
    }
  } else {
    for (std::size_t j = 0; j < len; ++j) dst[j] = static_cast<std::uint32_t>(std::uint64_t{f} * dst[j] % m_);
  }
}

void gemm_update(MutView c, ConstView a, ConstView b, bool subtract, const ModOps& ops) {
  if (c.rows == 0 || c.cols == 0 || a.cols == 0) return;
  if (ops.max_exact_terms() == 0) {
    gemm_naive(c, a, b, subtract, ops.modulus());
    return;
  }
  gemm_exact_double(c, a, b, subtract, ops);
}

void gemm_naive(MutView c, ConstView a, ConstView b, bool subtract, std::uint64_t m) {
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < a.cols; ++k) {
        acc = (acc + std::uint64_t{a.row(i)[k]} * b.row(k)[j] % m) % m;
      }
      std::uint64_t v = c.row(i)[j];
      v = subtract ? (v + m - acc) % m : (v + acc) % m;
      c.row(i)[j] = static_cast<std::uint32_t>(v);
    }
  }
}

}  // namespace chowid::detail
