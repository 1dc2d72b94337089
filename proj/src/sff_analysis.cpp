#include "chowid/sff_analysis.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "chowid/errors.hpp"

namespace chowid {

const char* to_string(SffCase c) {
  switch (c) {
    case SffCase::kDistinctFour: return "distinct-four";
    case SffCase::kEqualBelowD: return "equal-below-d";
    case SffCase::kMixed: return "mixed";
    case SffCase::kBothAboveD: return "both-above-d";
    case SffCase::kZero: return "zero";
  }
  return "?";
}

MonomialPoint::MonomialPoint(std::size_t d, std::size_t n, PrimeModulus modulus)
    : d_(d), n_(n), modulus_(modulus), basis_(n, d), point_(basis_, modulus) {
  if (d < 3 || d > n + 1) throw ContractViolation("MonomialPoint: need 3 <= d <= n+1");
  for (std::size_t e = 0; e < d; ++e) shifts_.emplace_back(MonomialBasis(n, e));
  std::vector<std::size_t> vars(d);
  for (std::size_t a = 0; a < d; ++a) vars[a] = a;
  point_ = monomial_product(vars);

  tangent_.reserve(d * (n + 1));
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i <= n; ++i) {
      vars.assign({i});
      for (std::size_t a = 0; a < d; ++a) {
        if (a != k) vars.push_back(a);
      }
      tangent_.push_back(monomial_product(vars));
    }
  }

  for (const Poly& t : tangent_) {
    const auto c = t.coeffs();
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
      if (c[idx] != 0) tangent_monomials_.push_back(idx);
    }
  }
  std::sort(tangent_monomials_.begin(), tangent_monomials_.end());
  tangent_monomials_.erase(std::unique(tangent_monomials_.begin(), tangent_monomials_.end()),
                           tangent_monomials_.end());

  Exponents pe(n + 1, 0);
  std::fill(pe.begin(), pe.begin() + d, 1u);
  const std::size_t p_index = basis_.index_of(pe);
  for (std::size_t idx : tangent_monomials_) {
    if (idx == p_index) {
      ++dim_point_;
      continue;
    }
    const Exponents e = basis_.exponents_of(idx);
    bool above = false;
    for (std::size_t v = d; v <= n; ++v) above = above || e[v] != 0;
    ++(above ? dim_a_prime_ : dim_a_);
  }
}

Poly MonomialPoint::monomial_product(std::span<const std::size_t> vars) const {
  Poly acc(MonomialBasis(n_, 0), modulus_, ResidueVector{1});
  for (std::size_t e = 0; e < vars.size(); ++e) acc = multiply_by_variable(acc, vars[e], shifts_[e]);
  return acc;
}

bool MonomialPoint::is_tangent_monomial(std::size_t index) const {
  return std::binary_search(tangent_monomials_.begin(), tangent_monomials_.end(), index);
}

std::size_t MonomialPoint::tangent_rank() const {
  FfMatrix t(tangent_.size(), basis_.dim(), modulus_);
  for (std::size_t r = 0; r < tangent_.size(); ++r) {
    std::copy(tangent_[r].coeffs().begin(), tangent_[r].coeffs().end(), t.row(r).begin());
  }
  return rank(t);
}

Poly MonomialPoint::q(std::size_t k, std::size_t i, std::size_t l, std::size_t j) const {
  if (k == l || k >= d_ || l >= d_ || i > n_ || j > n_) throw ContractViolation("MonomialPoint::q: bad index");
  std::vector<std::size_t> vars{i, j};
  for (std::size_t a = 0; a < d_; ++a) {
    if (a != k && a != l) vars.push_back(a);
  }
  return monomial_product(vars);
}

Poly MonomialPoint::project_to_normal(const Poly& p) const {
  if (!(p.basis() == basis_)) throw ContractViolation("project_to_normal: basis mismatch");
  Poly out = p;
  auto c = out.coeffs();
  for (std::size_t idx : tangent_monomials_) c[idx] = 0;
  return out;
}

Poly sff_component(const MonomialPoint& p, std::size_t k, std::size_t i, std::size_t l, std::size_t j) {
  if (k == l) return Poly(p.basis(), p.modulus());
  return p.project_to_normal(p.q(k, i, l, j));
}

SffComponentCase classify_sff_component(const MonomialPoint& p, std::size_t k, std::size_t i, std::size_t l,
                                        std::size_t j) {
  const std::size_t d = p.d();
  if (k >= d || l >= d || i > p.n() || j > p.n()) throw ContractViolation("classify_sff_component: bad index");
  SffComponentCase out{k, i, l, j, SffCase::kZero, Poly(p.basis(), p.modulus())};
  if (k == l) return out;

  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  const auto outside = [&](std::size_t v) { return v != k && v != l; };
  Exponents e(p.n() + 1, 0);
  const auto fill_rest = [&](std::initializer_list<std::size_t> skip) {
    for (std::size_t a = 0; a < d; ++a) {
      if (std::find(skip.begin(), skip.end(), a) == skip.end()) e[a] = 1;
    }
  };

  if (hi < d && lo != hi && outside(lo) && outside(hi)) {
    out.label = SffCase::kDistinctFour;
    fill_rest({k, l, lo, hi});
    e[lo] = 2;
    e[hi] = 2;
  } else if (hi < d && lo == hi && outside(lo)) {
    out.label = SffCase::kEqualBelowD;
    fill_rest({k, l, lo});
    e[lo] = 3;
  } else if (lo < d && hi >= d && outside(lo)) {
    out.label = SffCase::kMixed;
    fill_rest({k, l, lo});
    e[lo] = 2;
    e[hi] = 1;
  } else if (lo >= d) {
    out.label = SffCase::kBothAboveD;
    fill_rest({k, l});
    e[lo] += 1;
    e[hi] += 1;
  } else {
    return out;
  }
  out.predicted = Poly::monomial(p.basis(), p.modulus(), e);
  return out;
}

Poly eta_special(const MonomialPoint& p) {
  const std::size_t d = p.d();
  Poly eta(p.basis(), p.modulus());
  auto c = eta.coeffs();
  Exponents e(p.n() + 1);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      const auto base = [&] {
        std::fill(e.begin(), e.end(), 0u);
        for (std::size_t a = 0; a < d; ++a) e[a] = (a == k || a == l) ? 0 : 1;
      };
      for (std::size_t i = 0; i < d; ++i) {
        if (i == k || i == l) continue;
        base();
        e[i] = 3;
        c[p.basis().index_of(e)] = 1;
      }
      for (std::size_t j = d; j <= p.n(); ++j) {
        base();
        e[j] = 2;
        c[p.basis().index_of(e)] = 1;
      }
    }
  }
  return eta;
}

Residue contraction_table_value(std::size_t d, std::size_t k, std::size_t i, std::size_t l, std::size_t j) {
  if (k == l || i != j) return 0;
  if (i >= d) return 1;
  return (i != k && i != l) ? 1 : 0;
}

std::vector<FrameIndex> frame_order(std::size_t d, std::size_t n) {
  std::vector<FrameIndex> f;
  f.reserve(d * n);
  for (std::size_t a = 0; a + 1 < d; ++a) {
    for (std::size_t i = 0; i < d; ++i) f.push_back({a < i ? a : a + 1, i});
  }
  for (std::size_t i = d; i <= n; ++i) {
    for (std::size_t k = 0; k < d; ++k) f.push_back({k, i});
  }
  return f;
}

FfMatrix assemble_frame_contraction(const MonomialPoint& p, const Poly& eta) {
  const auto frame = frame_order(p.d(), p.n());
  FfMatrix m(frame.size(), frame.size(), p.modulus());
  for (std::size_t r = 0; r < frame.size(); ++r) {
    for (std::size_t c = 0; c < frame.size(); ++c) {
      const Poly ii = sff_component(p, frame[r].factor, frame[r].var, frame[c].factor, frame[c].var);
      m.set(r, c, contract(ii, eta).value());
    }
  }
  return m;
}

GhPair gh_build(std::size_t d, std::size_t n, const PrimeModulus& modulus) {
  if (d < 3 || d > n + 1) throw ContractViolation("gh_build: need 3 <= d <= n+1");
  FfMatrix g = sub_mat(kronecker(FfMatrix::ones(d - 1, modulus), FfMatrix::identity(d, modulus)),
                       FfMatrix::identity(d * (d - 1), modulus));
  const std::size_t s = n + 1 - d;
  FfMatrix h = s == 0 ? FfMatrix(0, 0, modulus)
                      : sub_mat(kronecker(FfMatrix::identity(s, modulus), FfMatrix::ones(d, modulus)),
                                FfMatrix::identity(s * d, modulus));
  return {d, n, std::move(g), std::move(h)};
}

namespace {

bool zero_diag_01_symmetric(const FfMatrix& a) {
  if (!a.is_symmetric()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0) return false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) > 1) return false;
    }
  }
  return true;
}

// (A - lambda I)(A + I)
FfMatrix quadratic(const FfMatrix& a, std::uint64_t lambda) {
  const auto& m = a.modulus();
  const FfMatrix id = FfMatrix::identity(a.rows(), m);
  return mul_mat(sub_mat(a, scale(id, lambda)), add_mat(a, id));
}

}  // namespace

GhReport gh_check(const GhPair& pair) {
  GhReport rep;
  const std::size_t d = pair.d, n = pair.n;
  const PrimeModulus& m = pair.g.modulus();
  const std::size_t og = d * (d - 1), oh = d * (n + 1 - d);

  rep.structure_ok = pair.g.rows() == og && pair.g.cols() == og && pair.h.rows() == oh && pair.h.cols() == oh &&
                     zero_diag_01_symmetric(pair.g) && zero_diag_01_symmetric(pair.h);
  if (!rep.structure_ok) rep.diffs.push_back("G or H has the wrong order or is not a symmetric 0/1 zero-diagonal matrix");

  rep.g_annihilated = quadratic(pair.g, d - 2).is_zero();
  if (!rep.g_annihilated) rep.diffs.push_back("(G - (d-2)I)(G + I) != 0");
  rep.h_annihilated = oh == 0 || quadratic(pair.h, d - 1).is_zero();
  if (!rep.h_annihilated) rep.diffs.push_back("(H - (d-1)I)(H + I) != 0");

  rep.g_rank = rank(pair.g);
  rep.h_rank = oh == 0 ? 0 : rank(pair.h);
  rep.g_full_rank = rep.g_rank == og;
  rep.h_full_rank = rep.h_rank == oh;
  if (!rep.g_full_rank) rep.diffs.push_back("rank G = " + std::to_string(rep.g_rank) + " < " + std::to_string(og));
  if (!rep.h_full_rank) rep.diffs.push_back("rank H = " + std::to_string(rep.h_rank) + " < " + std::to_string(oh));

  const MonomialPoint p(d, n, m);
  const FfMatrix assembled = assemble_frame_contraction(p, eta_special(p));
  const FfMatrix expected = block_diagonal(pair.g, pair.h);
  rep.assembly_ok = assembled == expected;
  if (!rep.assembly_ok) {
    std::size_t bad = 0;
    for (std::size_t r = 0; r < assembled.rows(); ++r) {
      for (std::size_t c = 0; c < assembled.cols(); ++c) bad += assembled(r, c) != expected(r, c);
    }
    rep.diffs.push_back("assembled contraction differs from diag(G, H) in " + std::to_string(bad) + " entries");
  }
  return rep;
}

namespace {

LinearForm random_form(std::size_t n, const PrimeModulus& m, SeededRng& rng) {
  ResidueVector c(n + 1);
  for (auto& x : c) x = static_cast<Residue>(sample_uniform(m, rng).value());
  return LinearForm(m, std::move(c));
}

Poly product_with(std::span<const LinearForm> base, std::size_t slot, const LinearForm& replacement) {
  std::vector<LinearForm> f(base.begin(), base.end());
  f[slot] = replacement;
  return expand_product(f);
}

}  // namespace

MinimalityReport minimality_check(std::span<const LinearForm> factors, std::size_t trials, SeededRng& rng) {
  if (factors.size() < 2) throw ContractViolation("minimality_check: need at least two factors");
  const PrimeModulus m = factors[0].modulus();
  if (m.value() < 5) throw ContractViolation("minimality_check: modulus must be >= 5");
  const std::size_t n = factors[0].n();
  const std::size_t d = factors.size();

  MinimalityReport rep;
  rep.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    // Along one slot: g(s) = prod with L_a + s u; cubic-in-s interpolation
    // through s = 0..3 must have vanishing second and third differences.
    for (std::size_t a = 0; a < d; ++a) {
      const LinearForm u = random_form(n, m, rng);
      std::vector<Poly> g;
      for (std::uint64_t s = 0; s < 4; ++s) g.push_back(product_with(factors, a, factors[a] + u.scaled(s)));
      const Poly d2 = g[2] - g[1] - g[1] + g[0];
      const Poly d3 = g[3] - g[2].scaled(3) + g[1].scaled(3) - g[0];
      if (!d2.is_zero() || !d3.is_zero()) rep.same_slot_zero = false;
    }
    // Two distinct slots: the mixed difference is the product with both
    // slots replaced by the directions.
    const std::size_t a = t % d, b = (t + 1) % d;
    const LinearForm u = random_form(n, m, rng);
    const LinearForm v = random_form(n, m, rng);
    std::vector<LinearForm> f(factors.begin(), factors.end());
    const auto eval = [&](bool su, bool sv) {
      auto g = f;
      if (su) g[a] = g[a] + u;
      if (sv) g[b] = g[b] + v;
      return expand_product(g);
    };
    const Poly mixed = eval(true, true) - eval(true, false) - eval(false, true) + eval(false, false);
    auto both = f;
    both[a] = u;
    both[b] = v;
    if (!(mixed == expand_product(both))) rep.mixed_matches = false;
    if (!mixed.is_zero()) ++rep.mixed_nonzero;
  }
  return rep;
}

MinimalityReport minimality_check(const ChowPoint& p, std::size_t trials, SeededRng& rng) {
  return minimality_check(std::span<const LinearForm>(p.forms), trials, rng);
}

bool SffValidation::ok() const {
  for (const auto& c : cases) {
    if (c.passed != c.checked) return false;
  }
  return eta_normal && contraction.passed == contraction.checked && dimensions_ok && gh.ok();
}

SffValidation validate_sff(std::size_t d, std::size_t n, const PrimeModulus& modulus) {
  SffValidation v;
  v.d = d;
  v.n = n;
  const MonomialPoint p(d, n, modulus);
  const Poly eta = eta_special(p);

  v.eta_normal = true;
  const auto ec = eta.coeffs();
  for (std::size_t idx : p.tangent_monomials()) v.eta_normal = v.eta_normal && ec[idx] == 0;

  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
          const Poly got = sff_component(p, k, i, l, j);
          const SffComponentCase want = classify_sff_component(p, k, i, l, j);
          auto& tally = v.cases[static_cast<std::size_t>(want.label)];
          ++tally.checked;
          tally.passed += got == want.predicted;
          ++v.contraction.checked;
          v.contraction.passed += contract(got, eta).value() == contraction_table_value(d, k, i, l, j);
        }
      }
    }
  }

  v.dim_point = p.dim_point();
  v.dim_a = p.dim_a();
  v.dim_a_prime = p.dim_a_prime();
  v.tangent_rank = p.tangent_rank();
  v.dimensions_ok = v.dim_point == 1 && v.dim_a == d * (d - 1) && v.dim_a_prime == d * (n + 1 - d) &&
                    v.tangent_rank == d * n + 1 && v.dim_point + v.dim_a + v.dim_a_prime == v.tangent_rank;

  v.gh = gh_check(gh_build(d, n, modulus));
  return v;
}

void write_sff_report(std::ostream& os, const SffValidation& v) {
  os << "d = " << v.d << ", n = " << v.n << '\n';
  for (std::size_t c = 0; c < kSffCaseCount; ++c) {
    os << "  " << to_string(static_cast<SffCase>(c)) << ": " << v.cases[c].passed << " / " << v.cases[c].checked
       << '\n';
  }
  os << "  eta normal: " << (v.eta_normal ? "yes" : "no") << '\n';
  os << "  contraction table: " << v.contraction.passed << " / " << v.contraction.checked << '\n';
  os << "  tangent: [p] " << v.dim_point << " + A " << v.dim_a << " + A' " << v.dim_a_prime << " = rank "
     << v.tangent_rank << (v.dimensions_ok ? " ok" : " MISMATCH") << '\n';
  os << "  G: order " << v.d * (v.d - 1) << " rank " << v.gh.g_rank << ", H: order " << v.d * (v.n + 1 - v.d)
     << " rank " << v.gh.h_rank << '\n';
  for (const auto& diff : v.gh.diffs) os << "  ! " << diff << '\n';
  os << "  " << (v.ok() ? "PASS" : "FAIL") << '\n';
}

}  // namespace chowid
