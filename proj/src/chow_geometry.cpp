#include "chowid/chow_geometry.hpp"

#include <string>

namespace chowid {

std::size_t ambient_dimension(std::size_t n) { return binomial(n + 3, 3); }
std::size_t cone_dimension(std::size_t n) { return 3 * n + 1; }
std::size_t expected_tangent_rank(std::size_t n, std::size_t r) { return cone_dimension(n) * r; }

std::size_t expected_hessian_rank(std::size_t n) {
  if (n < 2) throw ContractViolation("expected_hessian_rank: requires n >= 2");
  return 3 * n;
}

ChowPoint::ChowPoint(LinearForm k, LinearForm l, LinearForm m) : forms{std::move(k), std::move(l), std::move(m)} {
  for (const auto& f : forms) {
    if (f.n() != forms[0].n() || !(f.modulus() == forms[0].modulus())) {
      throw ContractViolation("ChowPoint: forms from different spaces");
    }
  }
}

Poly ChowPoint::expand() const { return expand_product(forms); }

ChowPoint sample_point(std::size_t n, const PrimeModulus& modulus, SeededRng& rng, SamplingStats* stats) {
  if (n < 1) throw ContractViolation("sample_point: requires n >= 1");
  auto draw = [&] {
    for (;;) {
      ResidueVector c(n + 1);
      for (auto& v : c) v = static_cast<Residue>(rng.uniform_below(modulus.value()));
      LinearForm f(modulus, std::move(c));
      if (!f.is_zero()) return f;
      if (stats != nullptr) ++stats->zero_form_resamples;
    }
  };
  LinearForm k = draw();
  LinearForm l = draw();
  LinearForm m = draw();
  return {std::move(k), std::move(l), std::move(m)};
}

CubicSpace::CubicSpace(std::size_t n)
    : n_(n), to_quadric_(MonomialBasis(n, 1)), to_cubic_(MonomialBasis(n, 2)) {}

TangentBasis::TangentBasis(std::size_t n, std::vector<Poly> vectors) : n_(n), vectors_(std::move(vectors)) {
  if (vectors_.size() != kFactors * (n + 1)) throw ContractViolation("TangentBasis: wrong number of vectors");
}

FfMatrix TangentBasis::as_matrix() const {
  const auto& first = vectors_.front();
  FfMatrix t(vectors_.size(), first.basis().dim(), first.modulus());
  for (std::size_t r = 0; r < vectors_.size(); ++r) {
    const auto src = vectors_[r].coeffs();
    std::copy(src.begin(), src.end(), t.row(r).begin());
  }
  return t;
}

namespace {

// prod_{a != k} L_a as a quadric.
Poly cofactor(const ChowPoint& p, std::size_t k, const CubicSpace& space) {
  const LinearForm& a = p.forms[(k + 1) % kFactors];
  const LinearForm& b = p.forms[(k + 2) % kFactors];
  Poly linear(MonomialBasis(p.n(), 1), p.modulus(), ResidueVector(a.coords().begin(), a.coords().end()));
  return multiply_by_linear(linear, b, space.to_quadric());
}

void require_space(const ChowPoint& p, const CubicSpace& space) {
  if (p.n() != space.n()) throw ContractViolation("point and cubic space have different n");
}

}  // namespace

TangentBasis tangent_basis(const ChowPoint& p, const CubicSpace& space) {
  require_space(p, space);
  std::vector<Poly> vectors;
  vectors.reserve(kFactors * (p.n() + 1));
  for (std::size_t k = 0; k < kFactors; ++k) {
    const Poly q = cofactor(p, k, space);
    for (std::size_t i = 0; i <= p.n(); ++i) vectors.push_back(multiply_by_variable(q, i, space.to_cubic()));
  }
  return {p.n(), std::move(vectors)};
}

TangentBasis tangent_basis(const ChowPoint& p) { return tangent_basis(p, CubicSpace(p.n())); }

FfMatrix terracini_matrix(std::span<const ChowPoint> points, const CubicSpace& space) {
  if (points.empty()) throw ContractViolation("terracini_matrix: needs at least one point");
  const std::size_t n = space.n(), per_point = kFactors * (n + 1);
  FfMatrix t(per_point * points.size(), space.cubics().dim(), points.front().modulus());
  for (std::size_t j = 0; j < points.size(); ++j) {
    require_space(points[j], space);
    if (!(points[j].modulus() == t.modulus())) throw ContractViolation("terracini_matrix: mixed moduli");
    for (std::size_t k = 0; k < kFactors; ++k) {
      const Poly q = cofactor(points[j], k, space);
      const auto qc = q.coeffs();
      for (std::size_t i = 0; i <= n; ++i) {
        auto row = t.row(j * per_point + k * (n + 1) + i);
        for (std::size_t idx = 0; idx < qc.size(); ++idx) row[space.to_cubic()(idx, i)] = qc[idx];
      }
    }
  }
  return t;
}

FfMatrix terracini_matrix(std::span<const ChowPoint> points) {
  if (points.empty()) throw ContractViolation("terracini_matrix: needs at least one point");
  return terracini_matrix(points, CubicSpace(points.front().n()));
}

FfMatrix HessianMatrix::block(std::size_t k, std::size_t l) const {
  const std::size_t w = n() + 1;
  FfMatrix b(w, w, entries.modulus());
  for (std::size_t i = 0; i < w; ++i) {
    for (std::size_t j = 0; j < w; ++j) b.set(i, j, entries(k * w + i, l * w + j));
  }
  return b;
}

bool HessianMatrix::diagonal_blocks_zero() const {
  for (std::size_t k = 0; k < kFactors; ++k) {
    if (!block(k, k).is_zero()) return false;
  }
  return true;
}

HessianMatrix hessian_at(const ChowPoint& p, const Poly& eta, const CubicSpace& space) {
  require_space(p, space);
  if (!(eta.basis() == space.cubics()) || !(eta.modulus() == p.modulus())) {
    throw ContractViolation("hessian_at: eta is not a cubic over the point's field");
  }
  const TangentBasis tangent = tangent_basis(p, space);
  for (std::size_t t = 0; t < tangent.size(); ++t) {
    if (!contract(tangent.vectors()[t], eta).is_zero()) {
      throw ContractViolation("hessian_at: eta is not normal to the tangent space (row " + std::to_string(t) + ")");
    }
  }
  const std::size_t w = p.n() + 1;
  const std::uint64_t m = p.modulus().value();
  const auto e = eta.coeffs();
  FfMatrix h(kFactors * w, kFactors * w, p.modulus());
  // d^2/(dL_k,i dL_l,j) of L_0 L_1 L_2 is x_i x_j L_c with c the remaining
  // factor; the same-factor second derivative vanishes.
  for (std::size_t k = 0; k < kFactors; ++k) {
    for (std::size_t l = k + 1; l < kFactors; ++l) {
      const LinearForm& lc = p.forms[kFactors - k - l];
      for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
          const std::size_t ij = space.to_quadric()(i, j);
          std::uint64_t acc = 0;
          for (std::size_t t = 0; t < w; ++t) acc = (acc + std::uint64_t{lc[t]} * e[space.to_cubic()(ij, t)]) % m;
          h.set(k * w + i, l * w + j, acc);
          h.set(l * w + j, k * w + i, acc);
        }
      }
    }
  }
  return {std::move(h)};
}

HessianMatrix hessian_at(const ChowPoint& p, const Poly& eta) { return hessian_at(p, eta, CubicSpace(p.n())); }

std::array<ResidueVector, 2> scaling_fiber_directions(const ChowPoint& p) {
  const std::size_t w = p.n() + 1;
  const PrimeModulus& mod = p.modulus();
  std::array<ResidueVector, 2> dirs{ResidueVector(kFactors * w, 0), ResidueVector(kFactors * w, 0)};
  for (std::size_t i = 0; i < w; ++i) {
    dirs[0][i] = p.forms[0][i];
    dirs[0][w + i] = static_cast<Residue>(mod.neg(p.forms[1][i]));
    dirs[1][i] = p.forms[0][i];
    dirs[1][2 * w + i] = static_cast<Residue>(mod.neg(p.forms[2][i]));
  }
  return dirs;
}

}  // namespace chowid
