#pragma once
// Small independent reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "chowid/ff_matrix.hpp"
#include "chowid/poly_space.hpp"

namespace oracle {

inline bool is_prime_trial(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>((unsigned __int128)r * b % m);
    b = static_cast<std::uint64_t>((unsigned __int128)b * b % m);
    e >>= 1;
  }
  return r;
}

// Plain Gaussian elimination on a copy with 128-bit products.
inline std::size_t rank(const chowid::FfMatrix& a) {
  const std::uint64_t m = a.modulus().value();
  std::vector<std::vector<std::uint64_t>> x(a.rows(), std::vector<std::uint64_t>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) x[i][j] = a(i, j);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && x[p][c] == 0) ++p;
    if (p == a.rows()) continue;
    std::swap(x[p], x[r]);
    const std::uint64_t iv = powmod(x[r][c], m - 2, m);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || x[i][c] == 0) continue;
      const std::uint64_t f = static_cast<std::uint64_t>((unsigned __int128)x[i][c] * iv % m);
      for (std::size_t j = c; j < a.cols(); ++j) {
        const std::uint64_t t = static_cast<std::uint64_t>((unsigned __int128)f * x[r][j] % m);
        x[i][j] = (x[i][j] + m - t) % m;
      }
    }
    ++r;
  }
  return r;
}

inline chowid::FfMatrix product(const chowid::FfMatrix& a, const chowid::FfMatrix& b) {
  const std::uint64_t m = a.modulus().value();
  chowid::FfMatrix c(a.rows(), b.cols(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      unsigned __int128 s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += (unsigned __int128)a(i, k) * b(k, j);
      c.set(i, j, static_cast<std::uint64_t>(s % m));
    }
  }
  return c;
}

// All exponent vectors of total degree d in n+1 variables, sorted so that
// index 0 is x_0^d: compare reversed exponent vectors lexicographically.
inline std::vector<std::vector<unsigned>> monomials(std::size_t n, std::size_t d) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> e(n + 1, 0);
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos == n) {
      e[n] = left;
      out.push_back(e);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, static_cast<unsigned>(d));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

// Evaluate a polynomial at a point using brute-force enumeration.
inline std::uint64_t evaluate(const chowid::Poly& p, const std::vector<std::uint64_t>& x) {
  const std::uint64_t m = p.modulus().value();
  const auto mons = monomials(p.basis().n(), p.basis().degree());
  std::uint64_t s = 0;
  for (std::size_t idx = 0; idx < mons.size(); ++idx) {
    std::uint64_t t = p.coeffs()[idx];
    for (std::size_t v = 0; v < x.size(); ++v) t = t * powmod(x[v], mons[idx][v], m) % m;
    s = (s + t) % m;
  }
  return s;
}

inline std::uint64_t evaluate(const chowid::LinearForm& f, const std::vector<std::uint64_t>& x) {
  const std::uint64_t m = f.modulus().value();
  std::uint64_t s = 0;
  for (std::size_t v = 0; v < x.size(); ++v) s = (s + std::uint64_t{f[v]} * x[v]) % m;
  return s;
}

}  // namespace oracle
