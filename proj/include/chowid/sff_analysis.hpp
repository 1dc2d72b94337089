#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chowid/chow_geometry.hpp"
#include "chowid/ff_matrix.hpp"
#include "chowid/poly_space.hpp"

namespace chowid {

// Closed-form geometry of the degree-d Chow variety at the monomial point
// p = x_0 x_1 ... x_{d-1}, for 3 <= d <= n+1.

enum class SffCase { kDistinctFour, kEqualBelowD, kMixed, kBothAboveD, kZero };
inline constexpr std::size_t kSffCaseCount = 5;
const char* to_string(SffCase c);

struct FrameIndex {
  std::size_t factor;  // k
  std::size_t var;     // i
  friend bool operator==(const FrameIndex&, const FrameIndex&) = default;
};

struct SffComponentCase {
  std::size_t k, i, l, j;
  SffCase label;
  Poly predicted;
};

class MonomialPoint {
 public:
  MonomialPoint(std::size_t d, std::size_t n, PrimeModulus modulus);

  std::size_t d() const noexcept { return d_; }
  std::size_t n() const noexcept { return n_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  const MonomialBasis& basis() const noexcept { return basis_; }
  const Poly& point() const noexcept { return point_; }

  // E_{k,i}|_p = x_i prod_{a != k} x_a.
  const Poly& tangent_vector(std::size_t k, std::size_t i) const { return tangent_[k * (n_ + 1) + i]; }
  // Distinct monomials spanning the tangent space, by basis index.
  const std::vector<std::size_t>& tangent_monomials() const noexcept { return tangent_monomials_; }
  bool is_tangent_monomial(std::size_t index) const;

  // Sizes of [p], A and A' counted from the tangent monomials.
  std::size_t dim_point() const noexcept { return dim_point_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_a_prime() const noexcept { return dim_a_prime_; }
  // Rank of the d(n+1) tangent vectors.
  std::size_t tangent_rank() const;

  // q_{i,j,k,l} = x_i x_j prod_{a != k,l} x_a, built by polynomial products.
  Poly q(std::size_t k, std::size_t i, std::size_t l, std::size_t j) const;
  // Orthogonal projection onto the normal space; the tangent space is spanned
  // by monomials, so this zeroes their coefficients.
  Poly project_to_normal(const Poly& p) const;

 private:
  std::size_t d_;
  std::size_t n_;
  PrimeModulus modulus_;
  MonomialBasis basis_;
  // shifts_[e] maps degree e to e+1.
  std::vector<VariableShift> shifts_;
  Poly point_;

  Poly monomial_product(std::span<const std::size_t> vars) const;
  std::vector<Poly> tangent_;
  std::vector<std::size_t> tangent_monomials_;
  std::size_t dim_point_ = 0;
  std::size_t dim_a_ = 0;
  std::size_t dim_a_prime_ = 0;
};

// II_p(E_{k,i}, E_{l,j}) computed by projecting q onto the normal space.
// Zero when k == l.
Poly sff_component(const MonomialPoint& p, std::size_t k, std::size_t i, std::size_t l, std::size_t j);

// The case analysis for the same component, built directly from exponents.
SffComponentCase classify_sff_component(const MonomialPoint& p, std::size_t k, std::size_t i, std::size_t l,
                                        std::size_t j);

// Sum of the monomials x_i^3 prod_{a not in {i,k,l}} x_a over i, {k,l}
// pairwise distinct below d, plus x_j^2 prod_{a not in {k,l}} x_a over j >= d
// and pairs {k < l} below d. Every monomial appears with coefficient 1.
Poly eta_special(const MonomialPoint& p);

// Predicted <II_p(E_{k,i}, E_{l,j}), eta_special>: 1 on the diagonal i = j
// when the component is nonzero, 0 elsewhere.
Residue contraction_table_value(std::size_t d, std::size_t k, std::size_t i, std::size_t l, std::size_t j);

// Frame of E_{k,i} with i != k. The first d(d-1) entries (i < d) are ordered
// slot-major: slot a runs over the a-th factor index k != i, then i. The
// remaining d(n+1-d) entries (i >= d) are ordered by i, then k.
std::vector<FrameIndex> frame_order(std::size_t d, std::size_t n);

// |II_p^*|(eta) over the frame.
FfMatrix assemble_frame_contraction(const MonomialPoint& p, const Poly& eta);

struct GhPair {
  std::size_t d;
  std::size_t n;
  FfMatrix g;  // 1_{d-1} (x) I_d - I, order d(d-1)
  FfMatrix h;  // I_{n+1-d} (x) 1_d - I, order d(n+1-d)
};

GhPair gh_build(std::size_t d, std::size_t n, const PrimeModulus& modulus);

struct GhReport {
  bool structure_ok = false;
  bool assembly_ok = false;
  bool g_annihilated = false;  // (G - (d-2) I)(G + I) = 0
  bool h_annihilated = false;  // (H - (d-1) I)(H + I) = 0
  std::size_t g_rank = 0;
  std::size_t h_rank = 0;
  bool g_full_rank = false;
  bool h_full_rank = false;
  std::vector<std::string> diffs;

  bool ok() const {
    return structure_ok && assembly_ok && g_annihilated && h_annihilated && g_full_rank && h_full_rank;
  }
};

GhReport gh_check(const GhPair& pair);

struct MinimalityReport {
  std::size_t trials = 0;
  // Second derivative along one slot vanishes for every trial and slot.
  bool same_slot_zero = true;
  // Mixed second difference equals the product with both slots replaced.
  bool mixed_matches = true;
  std::size_t mixed_nonzero = 0;

  bool ok() const { return same_slot_zero && mixed_matches; }
};

// Random perturbation directions are drawn from rng. Requires m >= 5.
MinimalityReport minimality_check(std::span<const LinearForm> factors, std::size_t trials, SeededRng& rng);
MinimalityReport minimality_check(const ChowPoint& p, std::size_t trials, SeededRng& rng);

struct CaseTally {
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct SffValidation {
  std::size_t d = 0;
  std::size_t n = 0;
  std::array<CaseTally, kSffCaseCount> cases{};
  bool eta_normal = false;
  CaseTally contraction;
  bool dimensions_ok = false;
  std::size_t dim_point = 0, dim_a = 0, dim_a_prime = 0, tangent_rank = 0;
  GhReport gh;

  bool ok() const;
};

SffValidation validate_sff(std::size_t d, std::size_t n, const PrimeModulus& modulus);
void write_sff_report(std::ostream& os, const SffValidation& v);

}  // namespace chowid
