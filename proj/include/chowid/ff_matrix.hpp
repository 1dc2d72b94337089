#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "chowid/prime_field.hpp"

namespace chowid {

using Residue = std::uint32_t;
using ResidueVector = std::vector<Residue>;

// Dense row-major matrix over Z/mZ. Entries are stored as canonical residues
// that all share the matrix modulus.
class FfMatrix {
 public:
  FfMatrix(std::size_t rows, std::size_t cols, PrimeModulus modulus);

  static FfMatrix identity(std::size_t n, PrimeModulus modulus);
  // The n x n all-ones matrix.
  static FfMatrix ones(std::size_t n, PrimeModulus modulus);
  // Entries are reduced modulo m.
  static FfMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows, PrimeModulus modulus);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }

  Residue operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  FieldElement at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, std::uint64_t value);

  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> data() const { return data_; }
  std::span<Residue> data() { return data_; }

  bool is_zero() const;
  bool is_symmetric() const;

  friend bool operator==(const FfMatrix&, const FfMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  PrimeModulus modulus_;
  ResidueVector data_;
};

enum class Elimination { kNaive, kBlocked };

struct EliminationOptions {
  Elimination method = Elimination::kBlocked;
  std::size_t block_size = 64;
};

enum class Multiplication { kNaive, kBlocked, kStrassen };

// Reduced row echelon data of a matrix A. Reordering the columns of the
// reduced form by `permutation` gives [I_rank | reduced]; the pivot block is
// the identity, so only `reduced` (the X block) is stored.
struct RrefResult {
  PrimeModulus modulus;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
  // pivot_cols followed by free_cols.
  std::vector<std::size_t> permutation;
  // rank x (cols - rank).
  FfMatrix reduced;

  std::size_t nullity() const noexcept { return cols - rank; }
  // The full rows x cols reduced row echelon form, zero rows last.
  FfMatrix echelon() const;
};

RrefResult rref(const FfMatrix& a, EliminationOptions options = {});
std::size_t rank(const FfMatrix& a, EliminationOptions options = {});

// eta = P^{-1} (-X f0, f0): f0 fills the free coordinates and the pivot
// coordinates are solved for, so that A * eta = 0.
ResidueVector null_vector(const RrefResult& r, std::span<const Residue> f0);

FfMatrix mul_mat(const FfMatrix& a, const FfMatrix& b, Multiplication method = Multiplication::kBlocked);
ResidueVector mul_vec(const FfMatrix& a, std::span<const Residue> x);
FfMatrix kronecker(const FfMatrix& a, const FfMatrix& b);
FfMatrix add_mat(const FfMatrix& a, const FfMatrix& b);
FfMatrix sub_mat(const FfMatrix& a, const FfMatrix& b);
FfMatrix scale(const FfMatrix& a, std::uint64_t factor);
FfMatrix transpose(const FfMatrix& a);
FfMatrix block_diagonal(const FfMatrix& a, const FfMatrix& b);

// Debug dump: "rows cols modulus" on the first line, then one row per line.
void write_matrix(std::ostream& os, const FfMatrix& a);
FfMatrix read_matrix(std::istream& is);

}  // namespace chowid
