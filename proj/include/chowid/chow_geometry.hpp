#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chowid/ff_matrix.hpp"
#include "chowid/poly_space.hpp"
#include "chowid/prime_field.hpp"

namespace chowid {

inline constexpr std::size_t kFactors = 3;

// Dimension bookkeeping for the cubic Chow variety in n+1 variables.
std::size_t ambient_dimension(std::size_t n);  // binom(n+3, 3)
std::size_t cone_dimension(std::size_t n);     // 3n+1
std::size_t expected_tangent_rank(std::size_t n, std::size_t r);
std::size_t expected_hessian_rank(std::size_t n);

// A point L_0 L_1 L_2 of the cone over the Chow variety; certificates name the
// forms k, l, m.
struct ChowPoint {
  std::array<LinearForm, kFactors> forms;

  ChowPoint(LinearForm k, LinearForm l, LinearForm m);
  std::size_t n() const noexcept { return forms[0].n(); }
  const PrimeModulus& modulus() const noexcept { return forms[0].modulus(); }
  Poly expand() const;

  friend bool operator==(const ChowPoint&, const ChowPoint&) = default;
};

struct SamplingStats {
  std::size_t zero_form_resamples = 0;
};

// Draws the three forms in order k, l, m, each coordinate uniform on Z/m.
// A zero form is redrawn.
ChowPoint sample_point(std::size_t n, const PrimeModulus& modulus, SeededRng& rng, SamplingStats* stats = nullptr);

// Precomputed index tables for the degree-2 and degree-3 bases in n+1
// variables, shared by the tangent and Hessian constructions.
class CubicSpace {
 public:
  explicit CubicSpace(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  const MonomialBasis& quadrics() const noexcept { return to_quadric_.upper(); }
  const MonomialBasis& cubics() const noexcept { return to_cubic_.upper(); }
  const VariableShift& to_quadric() const noexcept { return to_quadric_; }
  const VariableShift& to_cubic() const noexcept { return to_cubic_; }
  // Index of x_i x_j x_t in the cubic basis.
  std::size_t cubic_index(std::size_t i, std::size_t j, std::size_t t) const {
    return to_cubic_(to_quadric_(i, j), t);
  }

 private:
  std::size_t n_;
  VariableShift to_quadric_;
  VariableShift to_cubic_;
};

// The 3(n+1) tangent vectors x_i * prod_{a != k} L_a, ordered by factor k
// then variable i.
class TangentBasis {
 public:
  TangentBasis(std::size_t n, std::vector<Poly> vectors);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const Poly& at(std::size_t factor, std::size_t var) const { return vectors_[factor * (n_ + 1) + var]; }
  const std::vector<Poly>& vectors() const noexcept { return vectors_; }
  FfMatrix as_matrix() const;

 private:
  std::size_t n_;
  std::vector<Poly> vectors_;
};

TangentBasis tangent_basis(const ChowPoint& p, const CubicSpace& space);
TangentBasis tangent_basis(const ChowPoint& p);

// All tangent vectors of all points stacked as rows, point-major.
FfMatrix terracini_matrix(std::span<const ChowPoint> points, const CubicSpace& space);
FfMatrix terracini_matrix(std::span<const ChowPoint> points);

// Second fundamental form at p contracted with a normal vector eta.
// Rows and columns are indexed by (factor, variable) in tangent order.
struct HessianMatrix {
  FfMatrix entries;

  std::size_t n() const noexcept { return entries.rows() / kFactors - 1; }
  // The (n+1) x (n+1) block for factor pair (k, l).
  FfMatrix block(std::size_t k, std::size_t l) const;
  bool diagonal_blocks_zero() const;
};

// Throws ContractViolation if eta is not orthogonal to p's tangent space.
HessianMatrix hessian_at(const ChowPoint& p, const Poly& eta, const CubicSpace& space);
HessianMatrix hessian_at(const ChowPoint& p, const Poly& eta);

// Parameter-space vectors (L_0, -L_1, 0) and (L_0, 0, -L_2) along which the
// product L_0 L_1 L_2 is constant to first order.
std::array<ResidueVector, 2> scaling_fiber_directions(const ChowPoint& p);

}  // namespace chowid
