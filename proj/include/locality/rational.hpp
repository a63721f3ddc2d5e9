#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace locality {

// Nonnegative exact fraction. Always stored in lowest terms with den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num_) * b.den_ <
           static_cast<unsigned __int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

// |a - b| <= tol. Exact while the cross products stay below 2^80 and the
// tolerance terms below 2^40; otherwise falls back to long double.
inline bool within(const Rational& a, const Rational& b, const Rational& tol) {
  using u128 = unsigned __int128;
  const u128 cross_a = static_cast<u128>(a.num()) * b.den();
  const u128 cross_b = static_cast<u128>(b.num()) * a.den();
  const u128 diff = cross_a > cross_b ? cross_a - cross_b : cross_b - cross_a;
  const u128 den = static_cast<u128>(a.den()) * b.den();
  constexpr u128 kExact = static_cast<u128>(1) << 80;
  if (diff < kExact && den < kExact && tol.num() < (1ULL << 40) && tol.den() < (1ULL << 40)) {
    return diff * tol.den() <= den * tol.num();
  }
  return static_cast<long double>(diff) * tol.den() <=
         static_cast<long double>(den) * tol.num();
}

}  // namespace locality
