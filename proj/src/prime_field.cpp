#include "chowid/prime_field.hpp"

#include <array>
#include <string>

namespace chowid {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    e >>= 1;
  }
  return result;
}

void require_same(const PrimeModulus& a, const PrimeModulus& b) {
  if (!(a == b)) {
    throw ContractViolation("field elements over different moduli (" + std::to_string(a.value()) +
                            " vs " + std::to_string(b.value()) + ")");
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t m) : m_(m) {
  if (m < 3) throw std::invalid_argument("modulus must be at least 3, got " + std::to_string(m));
  if (m >= kMaxModulus) throw std::invalid_argument("modulus must be below 2^32, got " + std::to_string(m));
  if (!is_prime(m)) throw std::invalid_argument("modulus " + std::to_string(m) + " is not prime");
}

std::uint64_t PrimeModulus::pow(std::uint64_t base, std::uint64_t exponent) const noexcept {
  return powmod64(base, exponent, m_);
}

std::uint64_t PrimeModulus::inv(std::uint64_t a) const {
  a %= m_;
  if (a == 0) throw FieldError("division by zero in field Z/" + std::to_string(m_));
  // Extended Euclid on signed 64-bit; m < 2^32 keeps every quantity in range.
  std::int64_t old_r = static_cast<std::int64_t>(a), r = static_cast<std::int64_t>(m_);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  const auto m = static_cast<std::int64_t>(m_);
  std::int64_t x = old_s % m;
  if (x < 0) x += m;
  return static_cast<std::uint64_t>(x);
}

FieldElement FieldElement::from_signed(std::int64_t value, PrimeModulus modulus) {
  const auto m = static_cast<std::int64_t>(modulus.value());
  std::int64_t r = value % m;
  if (r < 0) r += m;
  return {static_cast<std::uint64_t>(r), modulus};
}

FieldElement FieldElement::inv() const { return {modulus_.inv(value_), modulus_}; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a.modulus_, b.modulus_);
  return {a.modulus_.add(a.value_, b.value_), a.modulus_};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a.modulus_, b.modulus_);
  return {a.modulus_.sub(a.value_, b.value_), a.modulus_};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a.modulus_, b.modulus_);
  return {a.modulus_.mul(a.value_, b.value_), a.modulus_};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inv(); }

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.value(); }

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t SeededRng::next_u64() { return engine_(); }

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ContractViolation("uniform_below: empty range");
  // Accept only draws below the largest multiple of bound.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x <= limit) return x % bound;
  }
}

FieldElement sample_uniform(const PrimeModulus& modulus, SeededRng& rng) {
  return {rng.uniform_below(modulus.value()), modulus};
}

}  // namespace chowid
