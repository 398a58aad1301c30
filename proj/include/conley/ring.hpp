#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include "conley/error.hpp"

namespace conley {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Runtime description of a coefficient ring.
struct RingSpec {
  enum class Kind { prime_field, rationals, integers };

  Kind kind = Kind::prime_field;
  std::int64_t characteristic = 2; // meaningful for prime_field only

  static RingSpec gf(std::int64_t p);
  static RingSpec rationals() { return {Kind::rationals, 0}; }
  static RingSpec integers() { return {Kind::integers, 0}; }

  bool is_field() const { return kind != Kind::integers; }
  bool is_finite() const { return kind == Kind::prime_field; }

  /// "gf2", "gf5", "rational", "integer".
  std::string name() const {
    switch (kind) {
    case Kind::prime_field:
      return "gf" + std::to_string(characteristic);
    case Kind::rationals:
      return "rational";
    case Kind::integers:
      return "integer";
    }
    return {};
  }

  static RingSpec parse(const std::string& text);

  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline RingSpec RingSpec::gf(std::int64_t p) {
  // products of two residues must fit in int64
  if (!is_prime(p) || p >= (std::int64_t{1} << 31))
    throw InvalidInstance("characteristic " + std::to_string(p) +
                          " is not a prime below 2^31");
  return {Kind::prime_field, p};
}

inline RingSpec RingSpec::parse(const std::string& text) {
  if (text == "rational" || text == "rationals") return rationals();
  if (text == "integer" || text == "integers") return integers();
  if (text.size() > 2 && text.rfind("gf", 0) == 0) {
    const std::string digits = text.substr(2);
    if (digits.find_first_not_of("0123456789") == std::string::npos &&
        digits.size() < 12)
      return gf(std::stoll(digits));
  }
  throw InvalidInstance("unknown ring '" + text +
                        "' (expected gf<p>, rational or integer)");
}

/// GF(p) with residues stored as int64 in [0, p).
class PrimeField {
public:
  using value_type = std::int64_t;
  static constexpr bool is_field = true;

  explicit PrimeField(std::int64_t p) : p_(RingSpec::gf(p).characteristic) {}

  RingSpec spec() const { return RingSpec{RingSpec::Kind::prime_field, p_}; }
  std::int64_t characteristic() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const {
    value_type s = a - b;
    return s < 0 ? s + p_ : s;
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
  value_type inv(value_type a) const {
    if (a == 0) throw Error("division by zero in " + spec().name());
    // extended Euclid on (a, p)
    std::int64_t r0 = p_, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
      const std::int64_t q = r0 / r1;
      std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
      std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
    }
    return t0 < 0 ? t0 + p_ : t0;
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  value_type from_integer(const Integer& n) const {
    Integer r = n % p_;
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  value_type from_rational(const Rational& q) const {
    const value_type den = from_integer(boost::multiprecision::denominator(q));
    if (den == 0)
      throw Error("denominator of " + q.str() + " vanishes in " +
                  spec().name());
    return div(from_integer(boost::multiprecision::numerator(q)), den);
  }
  Rational to_rational(value_type a) const { return Rational(a); }

  /// Residues in canonical order 0 < 1 < ... < p-1.
  std::vector<value_type> elements() const {
    std::vector<value_type> out(static_cast<std::size_t>(p_));
    for (std::int64_t i = 0; i < p_; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }

private:
  std::int64_t p_;
};

class RationalField {
public:
  using value_type = Rational;
  static constexpr bool is_field = true;

  RingSpec spec() const { return RingSpec::rationals(); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return a == 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw Error("division by zero in rational");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const {
    return mul(a, inv(b));
  }
  value_type from_integer(const Integer& n) const { return Rational(n); }
  value_type from_rational(const Rational& q) const { return q; }
  Rational to_rational(const value_type& a) const { return a; }
};

class IntegerRing {
public:
  using value_type = Integer;
  static constexpr bool is_field = false;

  RingSpec spec() const { return RingSpec::integers(); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return a == 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
  value_type from_integer(const Integer& n) const { return n; }
  value_type from_rational(const Rational& q) const {
    if (boost::multiprecision::denominator(q) != 1)
      throw Error("non-integral entry " + q.str() + " over integer ring");
    return boost::multiprecision::numerator(q);
  }
  Rational to_rational(const value_type& a) const { return Rational(a); }
};

/// Calls `fn` with the ring policy object matching `spec`.
template <class Fn>
decltype(auto) with_ring(const RingSpec& spec, Fn&& fn) {
  switch (spec.kind) {
  case RingSpec::Kind::prime_field:
    return fn(PrimeField(spec.characteristic));
  case RingSpec::Kind::rationals:
    return fn(RationalField{});
  case RingSpec::Kind::integers:
    break;
  }
  return fn(IntegerRing{});
}

} // namespace conley
