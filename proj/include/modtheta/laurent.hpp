#pragma once

#include <map>
#include <string>

#include "json.hpp"

namespace modtheta {

/// Integer Laurent polynomial in a formal v with v^2 = q. Half-integral powers
/// of q never appear: q^{1/2} is just v.
class LaurentV {
 public:
  LaurentV() = default;
  LaurentV(long long constant);  // NOLINT(google-explicit-constructor)

  static LaurentV monomial(long long coeff, int v_exponent);
  /// q^m, i.e. v^{2m}.
  static LaurentV q_power(int m) { return monomial(1, 2 * m); }

  const std::map<int, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long long coeff(int v_exponent) const;
  int min_exponent() const;
  int max_exponent() const;
  bool is_monomial() const { return terms_.size() == 1; }
  /// Only even v-exponents, i.e. an element of Z[q^{+-1}].
  bool in_q() const;
  /// Z[q]: even and nonnegative exponents.
  bool is_q_polynomial() const;

  LaurentV& operator+=(const LaurentV& o);
  LaurentV& operator-=(const LaurentV& o);
  LaurentV& operator*=(const LaurentV& o);
  friend LaurentV operator+(LaurentV a, const LaurentV& b) { return a += b; }
  friend LaurentV operator-(LaurentV a, const LaurentV& b) { return a -= b; }
  friend LaurentV operator*(LaurentV a, const LaurentV& b) { return a *= b; }
  LaurentV operator-() const;
  bool operator==(const LaurentV&) const = default;

  /// Multiply by v^k.
  LaurentV shifted(int k) const;
  /// Substitute v -> v^{-1}.
  LaurentV inverted() const;
  /// Evaluate at v^2 = q, requires in_q().
  long long eval_q(long long q) const;

  std::string to_string() const;
  /// [{"v": exponent, "c": coeff}, ...] in increasing exponent order.
  nlohmann::json to_json() const;
  static LaurentV from_json(const nlohmann::json& j);

 private:
  void add_term(int e, long long c);
  std::map<int, long long> terms_;
};

/// Checked int64 arithmetic; throws ResourceError on overflow.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

}  // namespace modtheta
