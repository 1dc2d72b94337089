#include "chowid/ff_matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "kernels.hpp"

namespace chowid {

namespace {

using detail::ConstView;
using detail::ModOps;
using detail::MutView;

void require_same_modulus(const FfMatrix& a, const FfMatrix& b, const char* what) {
  if (!(a.modulus() == b.modulus())) throw ContractViolation(std::string(what) + ": matrices over different moduli");
}

ConstView view(const FfMatrix& a) { return {a.data().data(), a.rows(), a.cols(), a.cols()}; }
MutView view(FfMatrix& a) { return {a.data().data(), a.rows(), a.cols(), a.cols()}; }

// Echelon form with unit pivots, not reduced above the pivots. Rows
// [0, rank) of `work` hold the echelon rows; everything left of each pivot is
// zero. Rows at and below `rank` are left in an unspecified state.
struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

Echelon echelonize_naive(std::vector<Residue>& w, std::size_t rows, std::size_t cols, const PrimeModulus& mod) {
  Echelon e;
  const std::uint64_t m = mod.value();
  for (std::size_t c = 0; c < cols && e.rank < rows; ++c) {
    std::size_t p = e.rank;
    while (p < rows && w[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != e.rank) std::swap_ranges(w.begin() + p * cols, w.begin() + (p + 1) * cols, w.begin() + e.rank * cols);
    Residue* piv = w.data() + e.rank * cols;
    const std::uint64_t s = mod.inv(piv[c]);
    for (std::size_t j = c; j < cols; ++j) piv[j] = static_cast<Residue>(piv[j] * s % m);
    for (std::size_t i = e.rank + 1; i < rows; ++i) {
      Residue* row = w.data() + i * cols;
      const std::uint64_t f = row[c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) row[j] = static_cast<Residue>((row[j] + (m - f) * piv[j]) % m);
    }
    e.pivot_cols.push_back(c);
    ++e.rank;
  }
  return e;
}

// Right-looking elimination over column panels. Inside a panel the row
// operations touch only the panel columns; multipliers are kept in place of
// the eliminated entries and applied to the trailing columns afterwards as a
// triangular sweep over the new pivot rows plus one matrix product for the
// rows below.
Echelon echelonize_blocked(std::vector<Residue>& w, std::size_t rows, std::size_t cols, const PrimeModulus& mod,
                           std::size_t block) {
  Echelon e;
  const ModOps ops(mod.value());
  const std::uint64_t m = mod.value();
  block = std::max<std::size_t>(block, 1);
  std::vector<std::uint32_t> inv_pivot;
  std::vector<std::size_t> panel_pivots;
  std::vector<Residue> multipliers;

  auto row = [&](std::size_t i) { return w.data() + i * cols; };

  for (std::size_t c0 = 0; c0 < cols && e.rank < rows; c0 += block) {
    const std::size_t c1 = std::min(cols, c0 + block);
    const std::size_t k = e.rank;
    std::size_t kp = k;
    panel_pivots.clear();
    inv_pivot.clear();

    for (std::size_t c = c0; c < c1 && kp < rows; ++c) {
      std::size_t p = kp;
      while (p < rows && row(p)[c] == 0) ++p;
      if (p == rows) continue;
      if (p != kp) std::swap_ranges(row(p), row(p) + cols, row(kp));
      Residue* piv = row(kp);
      const auto s = static_cast<std::uint32_t>(mod.inv(piv[c]));
      ops.scale(piv + c, s, c1 - c);
      for (std::size_t i = kp + 1; i < rows; ++i) {
        Residue* r = row(i);
        const std::uint32_t f = r[c];
        if (f == 0) continue;
        ops.axpy(r + c + 1, piv + c + 1, static_cast<std::uint32_t>(m - f), c1 - c - 1);
        // r[c] keeps f as the multiplier for the trailing update.
      }
      panel_pivots.push_back(c);
      inv_pivot.push_back(s);
      ++kp;
    }

    const std::size_t np = panel_pivots.size();
    if (np == 0) continue;

    if (c1 < cols) {
      const std::size_t width = cols - c1;
      // Pivot rows: replay scaling and elimination among themselves.
      for (std::size_t t = 0; t < np; ++t) {
        Residue* pt = row(k + t) + c1;
        ops.scale(pt, inv_pivot[t], width);
        for (std::size_t s = t + 1; s < np; ++s) {
          const std::uint32_t f = row(k + s)[panel_pivots[t]];
          if (f != 0) ops.axpy(row(k + s) + c1, pt, static_cast<std::uint32_t>(m - f), width);
        }
      }
      // Rows below: trailing -= L21 * U12.
      const std::size_t below = rows - kp;
      if (below > 0) {
        multipliers.assign(below * np, 0);
        for (std::size_t i = 0; i < below; ++i) {
          const Residue* r = row(kp + i);
          for (std::size_t t = 0; t < np; ++t) multipliers[i * np + t] = r[panel_pivots[t]];
        }
        detail::gemm_update(MutView{row(kp) + c1, below, width, cols}, ConstView{multipliers.data(), below, np, np},
                            ConstView{row(k) + c1, np, width, cols}, /*subtract=*/true, ops);
      }
    }
    // Clear stored multipliers below the new pivots.
    for (std::size_t i = k; i < rows; ++i) {
      for (std::size_t t = 0; t < np; ++t) {
        if (i > k + t) row(i)[panel_pivots[t]] = 0;
      }
    }
    e.pivot_cols.insert(e.pivot_cols.end(), panel_pivots.begin(), panel_pivots.end());
    e.rank = kp;
  }
  for (std::size_t a = 0; a < e.rank; ++a) std::fill(row(a), row(a) + e.pivot_cols[a], Residue{0});
  return e;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& pivots, std::size_t cols) {
  std::vector<std::size_t> free;
  free.reserve(cols - pivots.size());
  std::size_t t = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (t < pivots.size() && pivots[t] == c) {
      ++t;
    } else {
      free.push_back(c);
    }
  }
  return free;
}

// Given echelon rows, solve X = U_pp^{-1} U_pf by blocked back substitution.
FfMatrix back_substitute(const std::vector<Residue>& w, std::size_t cols, const Echelon& e,
                         const std::vector<std::size_t>& free_cols, const PrimeModulus& mod, std::size_t block) {
  const std::size_t rank = e.rank, nf = free_cols.size();
  FfMatrix x(rank, nf, mod);
  if (rank == 0 || nf == 0) return x;
  const ModOps ops(mod.value());
  const std::uint64_t m = mod.value();
  for (std::size_t a = 0; a < rank; ++a) {
    const Residue* src = w.data() + a * cols;
    auto dst = x.row(a);
    for (std::size_t b = 0; b < nf; ++b) dst[b] = src[free_cols[b]];
  }
  block = std::max<std::size_t>(block, 1);
  std::vector<Residue> upper;
  std::size_t a1 = rank;
  while (a1 > 0) {
    const std::size_t a0 = a1 > block ? a1 - block : 0;
    const std::size_t h = a1 - a0, tail = rank - a1;
    if (tail > 0) {
      upper.assign(h * tail, 0);
      for (std::size_t a = a0; a < a1; ++a) {
        const Residue* src = w.data() + a * cols;
        for (std::size_t t = 0; t < tail; ++t) upper[(a - a0) * tail + t] = src[e.pivot_cols[a1 + t]];
      }
      detail::gemm_update(MutView{x.row(a0).data(), h, nf, nf}, ConstView{upper.data(), h, tail, tail},
                          ConstView{x.row(a1).data(), tail, nf, nf}, /*subtract=*/true, ops);
    }
    for (std::size_t a = a1; a-- > a0;) {
      const Residue* src = w.data() + a * cols;
      for (std::size_t b = a + 1; b < a1; ++b) {
        const std::uint32_t f = src[e.pivot_cols[b]];
        if (f != 0) ops.axpy(x.row(a).data(), x.row(b).data(), static_cast<std::uint32_t>(m - f), nf);
      }
    }
    a1 = a0;
  }
  return x;
}

Echelon echelonize(std::vector<Residue>& w, std::size_t rows, std::size_t cols, const PrimeModulus& mod,
                   const EliminationOptions& options) {
  if (options.method == Elimination::kNaive) return echelonize_naive(w, rows, cols, mod);
  return echelonize_blocked(w, rows, cols, mod, options.block_size);
}

// Gauss-Jordan with immediate back elimination; the reference path.
RrefResult rref_naive(const FfMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  const PrimeModulus& mod = a.modulus();
  const std::uint64_t m = mod.value();
  std::vector<Residue> w(a.data().begin(), a.data().end());
  std::vector<std::size_t> pivots;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols && k < rows; ++c) {
    std::size_t p = k;
    while (p < rows && w[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != k) std::swap_ranges(w.begin() + p * cols, w.begin() + (p + 1) * cols, w.begin() + k * cols);
    Residue* piv = w.data() + k * cols;
    const std::uint64_t s = mod.inv(piv[c]);
    for (std::size_t j = 0; j < cols; ++j) piv[j] = static_cast<Residue>(piv[j] * s % m);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == k) continue;
      Residue* r = w.data() + i * cols;
      const std::uint64_t f = r[c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) r[j] = static_cast<Residue>((r[j] + (m - f) * piv[j]) % m);
    }
    pivots.push_back(c);
    ++k;
  }
  RrefResult result{mod, rows, cols, k, pivots, complement(pivots, cols), {}, FfMatrix(k, cols - k, mod)};
  for (std::size_t a_row = 0; a_row < k; ++a_row) {
    for (std::size_t b = 0; b < result.free_cols.size(); ++b) {
      result.reduced.set(a_row, b, w[a_row * cols + result.free_cols[b]]);
    }
  }
  result.permutation = result.pivot_cols;
  result.permutation.insert(result.permutation.end(), result.free_cols.begin(), result.free_cols.end());
  return result;
}

}  // namespace

FfMatrix::FfMatrix(std::size_t rows, std::size_t cols, PrimeModulus modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, 0) {}

FfMatrix FfMatrix::identity(std::size_t n, PrimeModulus modulus) {
  FfMatrix a(n, n, modulus);
  for (std::size_t i = 0; i < n; ++i) a.data_[i * n + i] = 1;
  return a;
}

FfMatrix FfMatrix::ones(std::size_t n, PrimeModulus modulus) {
  FfMatrix a(n, n, modulus);
  std::fill(a.data_.begin(), a.data_.end(), Residue{1});
  return a;
}

FfMatrix FfMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows, PrimeModulus modulus) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  FfMatrix a(rows.size(), cols, modulus);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ContractViolation("from_rows: ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) a.set(r, c, rows[r][c]);
  }
  return a;
}

FieldElement FfMatrix::at(std::size_t r, std::size_t c) const { return {(*this)(r, c), modulus_}; }

void FfMatrix::set(std::size_t r, std::size_t c, std::uint64_t value) {
  data_[r * cols_ + c] = static_cast<Residue>(modulus_.reduce(value));
}

bool FfMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue v) { return v == 0; });
}

bool FfMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

FfMatrix RrefResult::echelon() const {
  FfMatrix e(rows, cols, modulus);
  for (std::size_t a = 0; a < rank; ++a) {
    e.set(a, pivot_cols[a], 1);
    for (std::size_t b = 0; b < free_cols.size(); ++b) e.set(a, free_cols[b], reduced(a, b));
  }
  return e;
}

RrefResult rref(const FfMatrix& a, EliminationOptions options) {
  if (options.method == Elimination::kNaive) return rref_naive(a);
  std::vector<Residue> w(a.data().begin(), a.data().end());
  Echelon e = echelonize(w, a.rows(), a.cols(), a.modulus(), options);
  RrefResult result{a.modulus(), a.rows(), a.cols(), e.rank, e.pivot_cols, complement(e.pivot_cols, a.cols()),
                    {},          FfMatrix(0, 0, a.modulus())};
  result.reduced = back_substitute(w, a.cols(), e, result.free_cols, a.modulus(), options.block_size);
  result.permutation = result.pivot_cols;
  result.permutation.insert(result.permutation.end(), result.free_cols.begin(), result.free_cols.end());
  return result;
}

std::size_t rank(const FfMatrix& a, EliminationOptions options) {
  std::vector<Residue> w(a.data().begin(), a.data().end());
  return echelonize(w, a.rows(), a.cols(), a.modulus(), options).rank;
}

ResidueVector null_vector(const RrefResult& r, std::span<const Residue> f0) {
  const std::size_t c = r.nullity();
  if (c == 0) throw ContractViolation("null_vector: full column rank, no normal directions");
  if (f0.size() != c) {
    throw ContractViolation("null_vector: f0 has " + std::to_string(f0.size()) + " entries, expected " +
                            std::to_string(c));
  }
  const PrimeModulus& mod = r.modulus;
  ResidueVector eta(r.cols, 0);
  for (std::size_t b = 0; b < c; ++b) eta[r.free_cols[b]] = static_cast<Residue>(mod.reduce(f0[b]));
  for (std::size_t a = 0; a < r.rank; ++a) {
    std::uint64_t acc = 0;
    const auto xrow = r.reduced.row(a);
    for (std::size_t b = 0; b < c; ++b) acc = (acc + std::uint64_t{xrow[b]} * eta[r.free_cols[b]]) % mod.value();
    eta[r.pivot_cols[a]] = static_cast<Residue>(mod.neg(acc));
  }
  return eta;
}

namespace {

FfMatrix submatrix(const FfMatrix& a, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
  FfMatrix s(rows, cols, a.modulus());
  for (std::size_t i = 0; i < rows && r0 + i < a.rows(); ++i) {
    for (std::size_t j = 0; j < cols && c0 + j < a.cols(); ++j) s.data()[i * cols + j] = a(r0 + i, c0 + j);
  }
  return s;
}

// One level of Strassen's recursion over blocked products; odd dimensions
// are zero padded.
FfMatrix mul_strassen(const FfMatrix& a, const FfMatrix& b) {
  const std::size_t hm = (a.rows() + 1) / 2, hk = (a.cols() + 1) / 2, hn = (b.cols() + 1) / 2;
  const FfMatrix a11 = submatrix(a, 0, 0, hm, hk), a12 = submatrix(a, 0, hk, hm, hk);
  const FfMatrix a21 = submatrix(a, hm, 0, hm, hk), a22 = submatrix(a, hm, hk, hm, hk);
  const FfMatrix b11 = submatrix(b, 0, 0, hk, hn), b12 = submatrix(b, 0, hn, hk, hn);
  const FfMatrix b21 = submatrix(b, hk, 0, hk, hn), b22 = submatrix(b, hk, hn, hk, hn);
  auto mul = [](const FfMatrix& x, const FfMatrix& y) { return mul_mat(x, y, Multiplication::kBlocked); };
  const FfMatrix m1 = mul(add_mat(a11, a22), add_mat(b11, b22));
  const FfMatrix m2 = mul(add_mat(a21, a22), b11);
  const FfMatrix m3 = mul(a11, sub_mat(b12, b22));
  const FfMatrix m4 = mul(a22, sub_mat(b21, b11));
  const FfMatrix m5 = mul(add_mat(a11, a12), b22);
  const FfMatrix m6 = mul(sub_mat(a21, a11), add_mat(b11, b12));
  const FfMatrix m7 = mul(sub_mat(a12, a22), add_mat(b21, b22));
  const FfMatrix c11 = add_mat(sub_mat(add_mat(m1, m4), m5), m7);
  const FfMatrix c12 = add_mat(m3, m5);
  const FfMatrix c21 = add_mat(m2, m4);
  const FfMatrix c22 = add_mat(add_mat(sub_mat(m1, m2), m3), m6);
  FfMatrix c(a.rows(), b.cols(), a.modulus());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      const FfMatrix& blk = i < hm ? (j < hn ? c11 : c12) : (j < hn ? c21 : c22);
      c.data()[i * c.cols() + j] = blk(i < hm ? i : i - hm, j < hn ? j : j - hn);
    }
  }
  return c;
}

}  // namespace

FfMatrix mul_mat(const FfMatrix& a, const FfMatrix& b, Multiplication method) {
  require_same_modulus(a, b, "mul_mat");
  if (a.cols() != b.rows()) {
    throw ContractViolation("mul_mat: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()) + " disagree");
  }
  if (method == Multiplication::kStrassen && a.rows() >= 2 && a.cols() >= 2 && b.cols() >= 2) {
    return mul_strassen(a, b);
  }
  FfMatrix c(a.rows(), b.cols(), a.modulus());
  if (method == Multiplication::kNaive) {
    detail::gemm_naive(view(c), view(a), view(b), false, a.modulus().value());
  } else {
    detail::gemm_update(view(c), view(a), view(b), false, ModOps(a.modulus().value()));
  }
  return c;
}

ResidueVector mul_vec(const FfMatrix& a, std::span<const Residue> x) {
  if (x.size() != a.cols()) throw ContractViolation("mul_vec: dimension mismatch");
  const std::uint64_t m = a.modulus().value();
  ResidueVector y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) acc = (acc + std::uint64_t{r[j]} * x[j]) % m;
    y[i] = static_cast<Residue>(acc);
  }
  return y;
}

FfMatrix kronecker(const FfMatrix& a, const FfMatrix& b) {
  require_same_modulus(a, b, "kronecker");
  const PrimeModulus& mod = a.modulus();
  FfMatrix k(a.rows() * b.rows(), a.cols() * b.cols(), mod);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const std::uint64_t aij = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p) {
        for (std::size_t q = 0; q < b.cols(); ++q) k.set(i * b.rows() + p, j * b.cols() + q, mod.mul(aij, b(p, q)));
      }
    }
  }
  return k;
}

FfMatrix add_mat(const FfMatrix& a, const FfMatrix& b) {
  require_same_modulus(a, b, "add_mat");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractViolation("add_mat: shape mismatch");
  FfMatrix c = a;
  for (std::size_t t = 0; t < c.data().size(); ++t) {
    c.data()[t] = static_cast<Residue>(a.modulus().add(a.data()[t], b.data()[t]));
  }
  return c;
}

FfMatrix sub_mat(const FfMatrix& a, const FfMatrix& b) {
  require_same_modulus(a, b, "sub_mat");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractViolation("sub_mat: shape mismatch");
  FfMatrix c = a;
  for (std::size_t t = 0; t < c.data().size(); ++t) {
    c.data()[t] = static_cast<Residue>(a.modulus().sub(a.data()[t], b.data()[t]));
  }
  return c;
}

FfMatrix scale(const FfMatrix& a, std::uint64_t factor) {
  FfMatrix c = a;
  const std::uint64_t f = a.modulus().reduce(factor);
  for (auto& v : c.data()) v = static_cast<Residue>(a.modulus().mul(v, f));
  return c;
}

FfMatrix transpose(const FfMatrix& a) {
  FfMatrix t(a.cols(), a.rows(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t.data()[j * a.rows() + i] = a(i, j);
  }
  return t;
}

FfMatrix block_diagonal(const FfMatrix& a, const FfMatrix& b) {
  require_same_modulus(a, b, "block_diagonal");
  FfMatrix d(a.rows() + b.rows(), a.cols() + b.cols(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) d.set(i, j, a(i, j));
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) d.set(a.rows() + i, a.cols() + j, b(i, j));
  }
  return d;
}

void write_matrix(std::ostream& os, const FfMatrix& a) {
  os << a.rows() << ' ' << a.cols() << ' ' << a.modulus().value() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) os << ' ';
      os << a(i, j);
    }
    os << '\n';
  }
}

FfMatrix read_matrix(std::istream& is) {
  std::size_t rows = 0, cols = 0;
  std::uint64_t m = 0;
  if (!(is >> rows >> cols >> m)) throw std::runtime_error("read_matrix: malformed header");
  FfMatrix a(rows, cols, PrimeModulus(m));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::uint64_t v = 0;
      if (!(is >> v)) throw std::runtime_error("read_matrix: truncated data");
      if (v >= m) throw std::runtime_error("read_matrix: entry out of range");
      a.set(i, j, v);
    }
  }
  return a;
}

}  // namespace chowid
