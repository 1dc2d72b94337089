#include "chowid/poly_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace chowid {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

MonomialBasis::MonomialBasis(std::size_t n, std::size_t d) : n_(n), d_(d), dim_(binomial(n + d, d)) {}

// Exponent vectors are compared on (a_n, a_{n-1}, ..., a_0) lexicographically,
// ascending. For a fixed prefix, the number of completions of degree s over t
// variables is binom(s + t - 1, t - 1).
std::size_t MonomialBasis::index_of(std::span<const unsigned> exponents) const {
  if (exponents.size() != n_ + 1) {
    throw ContractViolation("index_of: expected " + std::to_string(n_ + 1) + " exponents, got " +
                            std::to_string(exponents.size()));
  }
  const std::size_t total = std::accumulate(exponents.begin(), exponents.end(), std::size_t{0});
  if (total != d_) {
    throw ContractViolation("index_of: exponents sum to " + std::to_string(total) + ", expected degree " +
                            std::to_string(d_));
  }
  std::size_t index = 0;
  std::size_t remaining = d_;
  for (std::size_t t = n_; t >= 1; --t) {
    for (unsigned v = 0; v < exponents[t]; ++v) index += binomial(remaining - v + t - 1, t - 1);
    remaining -= exponents[t];
  }
  return index;
}

Exponents MonomialBasis::exponents_of(std::size_t index) const {
  if (index >= dim_) throw ContractViolation("exponents_of: index " + std::to_string(index) + " out of range");
  Exponents e(n_ + 1, 0);
  std::size_t remaining = d_;
  for (std::size_t t = n_; t >= 1; --t) {
    unsigned v = 0;
    for (;;) {
      const std::size_t block = binomial(remaining - v + t - 1, t - 1);
      if (index < block) break;
      index -= block;
      ++v;
    }
    e[t] = v;
    remaining -= v;
  }
  e[0] = static_cast<unsigned>(remaining);
  return e;
}

Poly::Poly(MonomialBasis basis, PrimeModulus modulus) : basis_(basis), modulus_(modulus), coeffs_(basis.dim(), 0) {}

Poly::Poly(MonomialBasis basis, PrimeModulus modulus, ResidueVector coeffs)
    : basis_(basis), modulus_(modulus), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.dim()) throw ContractViolation("Poly: coefficient count does not match basis");
  for (auto& c : coeffs_) c = static_cast<Residue>(modulus_.reduce(c));
}

Poly Poly::monomial(MonomialBasis basis, PrimeModulus modulus, std::span<const unsigned> exponents) {
  Poly p(basis, modulus);
  p.coeffs_[basis.index_of(exponents)] = 1;
  return p;
}

bool Poly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue c) { return c == 0; });
}

std::size_t Poly::support_size() const {
  return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](Residue c) { return c != 0; }));
}

Poly& Poly::operator+=(const Poly& other) {
  if (!(basis_ == other.basis_) || !(modulus_ == other.modulus_)) throw ContractViolation("Poly +: basis mismatch");
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    coeffs_[t] = static_cast<Residue>(modulus_.add(coeffs_[t], other.coeffs_[t]));
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  if (!(basis_ == other.basis_) || !(modulus_ == other.modulus_)) throw ContractViolation("Poly -: basis mismatch");
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    coeffs_[t] = static_cast<Residue>(modulus_.sub(coeffs_[t], other.coeffs_[t]));
  }
  return *this;
}

Poly Poly::scaled(std::uint64_t factor) const {
  Poly p = *this;
  const std::uint64_t f = modulus_.reduce(factor);
  for (auto& c : p.coeffs_) c = static_cast<Residue>(modulus_.mul(c, f));
  return p;
}

LinearForm::LinearForm(PrimeModulus modulus, ResidueVector coords) : modulus_(modulus), coords_(std::move(coords)) {
  if (coords_.empty()) throw ContractViolation("LinearForm: needs at least one coordinate");
  for (auto& c : coords_) c = static_cast<Residue>(modulus_.reduce(c));
}

LinearForm LinearForm::variable(std::size_t n, std::size_t i, PrimeModulus modulus) {
  if (i > n) throw ContractViolation("LinearForm::variable: index out of range");
  ResidueVector c(n + 1, 0);
  c[i] = 1;
  return {modulus, std::move(c)};
}

bool LinearForm::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](Residue c) { return c == 0; });
}

LinearForm LinearForm::operator+(const LinearForm& other) const {
  if (!(modulus_ == other.modulus_) || coords_.size() != other.coords_.size()) {
    throw ContractViolation("LinearForm +: shape mismatch");
  }
  ResidueVector c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<Residue>(modulus_.add(coords_[i], other.coords_[i]));
  return {modulus_, std::move(c)};
}

LinearForm LinearForm::scaled(std::uint64_t factor) const {
  ResidueVector c(coords_.size());
  const std::uint64_t f = modulus_.reduce(factor);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<Residue>(modulus_.mul(coords_[i], f));
  return {modulus_, std::move(c)};
}

VariableShift::VariableShift(const MonomialBasis& lower)
    : lower_(lower), upper_(lower.n(), lower.degree() + 1), table_(lower.dim() * lower.num_vars()) {
  for (std::size_t idx = 0; idx < lower_.dim(); ++idx) {
    Exponents e = lower_.exponents_of(idx);
    for (std::size_t v = 0; v < lower_.num_vars(); ++v) {
      ++e[v];
      table_[idx * lower_.num_vars() + v] = upper_.index_of(e);
      --e[v];
    }
  }
}

Poly multiply_by_linear(const Poly& p, const LinearForm& form, const VariableShift& shift) {
  if (!(p.basis() == shift.lower())) throw ContractViolation("multiply_by_linear: shift table for another basis");
  if (form.n() != p.basis().n() || !(form.modulus() == p.modulus())) {
    throw ContractViolation("multiply_by_linear: form does not match polynomial space");
  }
  const PrimeModulus& mod = p.modulus();
  const std::uint64_t m = mod.value();
  std::vector<std::uint64_t> acc(shift.upper().dim(), 0);
  const auto coeffs = p.coeffs();
  const std::size_t vars = p.basis().num_vars();
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    const std::uint64_t c = coeffs[idx];
    if (c == 0) continue;
    for (std::size_t v = 0; v < vars; ++v) {
      if (form[v] == 0) continue;
      auto& slot = acc[shift(idx, v)];
      slot = (slot + c * form[v]) % m;
    }
  }
  return {shift.upper(), mod, ResidueVector(acc.begin(), acc.end())};
}

Poly multiply_by_linear(const Poly& p, const LinearForm& form) {
  return multiply_by_linear(p, form, VariableShift(p.basis()));
}

Poly multiply_by_variable(const Poly& p, std::size_t var, const VariableShift& shift) {
  if (!(p.basis() == shift.lower())) throw ContractViolation("multiply_by_variable: shift table for another basis");
  if (var > p.basis().n()) throw ContractViolation("multiply_by_variable: variable index out of range");
  Poly out(shift.upper(), p.modulus());
  const auto coeffs = p.coeffs();
  auto dst = out.coeffs();
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) dst[shift(idx, var)] = coeffs[idx];
  return out;
}

Poly multiply_by_variable(const Poly& p, std::size_t var) {
  return multiply_by_variable(p, var, VariableShift(p.basis()));
}

Poly expand_product(std::span<const LinearForm> forms) {
  if (forms.empty()) throw ContractViolation("expand_product: need at least one form");
  const std::size_t n = forms.front().n();
  const PrimeModulus mod = forms.front().modulus();
  for (const auto& f : forms) {
    if (f.n() != n || !(f.modulus() == mod)) throw ContractViolation("expand_product: forms from different spaces");
  }
  Poly p(MonomialBasis(n, 0), mod, ResidueVector{1});
  for (const auto& f : forms) p = multiply_by_linear(p, f);
  return p;
}

FieldElement contract(const Poly& p, const Poly& q) {
  if (!(p.basis() == q.basis()) || !(p.modulus() == q.modulus())) throw ContractViolation("contract: basis mismatch");
  return {contract(p.coeffs(), q.coeffs(), p.modulus()), p.modulus()};
}

Residue contract(std::span<const Residue> p, std::span<const Residue> q, const PrimeModulus& modulus) {
  if (p.size() != q.size()) throw ContractViolation("contract: length mismatch");
  const std::uint64_t m = modulus.value();
  std::uint64_t acc = 0;
  for (std::size_t t = 0; t < p.size(); ++t) acc = (acc + std::uint64_t{p[t]} * q[t]) % m;
  return static_cast<Residue>(acc);
}

}  // namespace chowid
