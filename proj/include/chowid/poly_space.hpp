#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chowid/ff_matrix.hpp"
#include "chowid/prime_field.hpp"

namespace chowid {

using Exponents = std::vector<unsigned>;

// Exact binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Degree-d monomials in x_0..x_n, indexed 0..binom(n+d, d)-1 in
// graded-reverse-lexicographic order (index 0 is x_0^d, the last is x_n^d).
// Ranking is combinatorial, so no table is materialized.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t n, std::size_t d);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_vars() const noexcept { return n_ + 1; }
  std::size_t degree() const noexcept { return d_; }
  std::size_t dim() const noexcept { return dim_; }

  std::size_t index_of(std::span<const unsigned> exponents) const;
  Exponents exponents_of(std::size_t index) const;

  friend bool operator==(const MonomialBasis& a, const MonomialBasis& b) { return a.n_ == b.n_ && a.d_ == b.d_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::size_t dim_;
};

// Dense homogeneous polynomial over Z/m.
class Poly {
 public:
  Poly(MonomialBasis basis, PrimeModulus modulus);
  Poly(MonomialBasis basis, PrimeModulus modulus, ResidueVector coeffs);

  static Poly monomial(MonomialBasis basis, PrimeModulus modulus, std::span<const unsigned> exponents);

  const MonomialBasis& basis() const noexcept { return basis_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  std::span<const Residue> coeffs() const noexcept { return coeffs_; }
  std::span<Residue> coeffs() noexcept { return coeffs_; }

  Residue coefficient(std::span<const unsigned> exponents) const { return coeffs_[basis_.index_of(exponents)]; }
  bool is_zero() const;
  // Number of nonzero coefficients.
  std::size_t support_size() const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly scaled(std::uint64_t factor) const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  MonomialBasis basis_;
  PrimeModulus modulus_;
  ResidueVector coeffs_;
};

class LinearForm {
 public:
  LinearForm(PrimeModulus modulus, ResidueVector coords);
  // The coordinate form x_i in n+1 variables.
  static LinearForm variable(std::size_t n, std::size_t i, PrimeModulus modulus);

  std::size_t n() const noexcept { return coords_.size() - 1; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  std::span<const Residue> coords() const noexcept { return coords_; }
  Residue operator[](std::size_t i) const { return coords_[i]; }
  bool is_zero() const;

  LinearForm operator+(const LinearForm& other) const;
  LinearForm scaled(std::uint64_t factor) const;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;

 private:
  PrimeModulus modulus_;
  ResidueVector coords_;
};

// Index map for multiplication by a single variable, from degree e to e+1.
class VariableShift {
 public:
  explicit VariableShift(const MonomialBasis& lower);

  const MonomialBasis& lower() const noexcept { return lower_; }
  const MonomialBasis& upper() const noexcept { return upper_; }
  std::size_t operator()(std::size_t lower_index, std::size_t var) const {
    return table_[lower_index * lower_.num_vars() + var];
  }

 private:
  MonomialBasis lower_;
  MonomialBasis upper_;
  std::vector<std::size_t> table_;
};

// p * L for a linear form L; degree goes up by one.
Poly multiply_by_linear(const Poly& p, const LinearForm& form, const VariableShift& shift);
Poly multiply_by_linear(const Poly& p, const LinearForm& form);
Poly multiply_by_variable(const Poly& p, std::size_t var, const VariableShift& shift);
Poly multiply_by_variable(const Poly& p, std::size_t var);

// Product of the given forms (at least one).
Poly expand_product(std::span<const LinearForm> forms);

// Unweighted coefficient dot product.
FieldElement contract(const Poly& p, const Poly& q);
Residue contract(std::span<const Residue> p, std::span<const Residue> q, const PrimeModulus& modulus);

}  // namespace chowid
