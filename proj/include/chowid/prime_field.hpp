#pragma once

#include <cstdint>
#include <ostream>
#include <random>

#include "chowid/errors.hpp"

namespace chowid {

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t value);

// A prime modulus m with 3 <= m < 2^32. Residues are canonical integers in
// [0, m); products of two residues fit in 64 bits.
class PrimeModulus {
 public:
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 32;

  explicit PrimeModulus(std::uint64_t m);

  std::uint64_t value() const noexcept { return m_; }

  std::uint64_t reduce(std::uint64_t x) const noexcept { return x % m_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + m_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : m_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept { return (a * b) % m_; }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exponent) const noexcept;
  // Throws FieldError on zero.
  std::uint64_t inv(std::uint64_t a) const;

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint64_t m_;
};

class FieldElement {
 public:
  FieldElement(std::uint64_t value, PrimeModulus modulus)
      : value_(modulus.reduce(value)), modulus_(modulus) {}
  static FieldElement from_signed(std::int64_t value, PrimeModulus modulus);

  std::uint64_t value() const noexcept { return value_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement inv() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const { return {modulus_.neg(value_), modulus_}; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  std::uint64_t value_;
  PrimeModulus modulus_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

// Free-function spellings used throughout the library.
inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement inv(const FieldElement& a) { return a.inv(); }

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Seedable generator (mt19937-64). The output stream is pinned by the C++
// standard, so the same seed replays identically on any conforming library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection sampling; bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  SeededRng child(std::uint64_t stream) const { return SeededRng(derive_seed(seed_, stream)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

FieldElement sample_uniform(const PrimeModulus& modulus, SeededRng& rng);

}  // namespace chowid
