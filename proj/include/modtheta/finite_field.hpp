#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace modtheta {

/// F_{p^k} = F_p[x]/(m(x)). An element is stored as the base-p integer whose
/// digits are its coefficients, constant term first, so 0 and 1 are themselves
/// and F_p sits inside as 0..p-1.
class FiniteField {
 public:
  using Elem = std::int64_t;

  /// Largest field order the log tables are built for.
  static constexpr std::int64_t kMaxOrder = std::int64_t{1} << 22;

  /// The modulus is the first monic irreducible of degree k, ordering the
  /// candidates by their encoded lower coefficients.
  FiniteField(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  std::int64_t order() const { return order_; }
  /// Monic modulus, constant term first, length k + 1.
  const std::vector<int>& modulus() const { return modulus_; }
  /// A generator of the multiplicative group.
  Elem generator() const { return exp_[1]; }

  Elem from_int(long long n) const;
  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  /// Negative exponents go through the inverse; 0^0 = 1.
  Elem pow(Elem a, long long e) const;
  /// Multiplicative order of a nonzero element.
  std::int64_t mult_order(Elem a) const;
  /// Some square root, the one with the smallest encoding, if any.
  std::optional<Elem> sqrt(Elem a) const;

  std::vector<int> coefficients(Elem a) const;
  Elem from_coefficients(const std::vector<int>& c) const;
  void check(Elem a) const;

  /// Integer for prime-field elements, coefficient list otherwise.
  nlohmann::json to_json(Elem a) const;
  Elem from_json(const nlohmann::json& j) const;
  std::string to_string(Elem a) const;

  bool operator==(const FiniteField& o) const { return p_ == o.p_ && k_ == o.k_; }

 private:
  Elem add_raw(Elem a, Elem b, int sign) const;
  Elem mul_poly(Elem a, Elem b) const;

  int p_;
  int k_;
  std::int64_t order_;
  std::vector<int> modulus_;
  std::vector<std::int64_t> pow_p_;
  std::vector<Elem> exp_;           // exp_[i] = g^i, i < order - 1, doubled for cheap sums
  std::vector<std::int64_t> log_;   // log_[a] for a != 0
};

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Shared instance per (p, k).
FieldPtr make_field(int p, int k);

bool is_prime(long long n);

/// Dense polynomial over a FiniteField, constant term first, no trailing zeros.
using FieldPoly = std::vector<FiniteField::Elem>;

namespace field_poly {
void trim(FieldPoly& f);
FieldPoly mul(const FiniteField& F, const FieldPoly& a, const FieldPoly& b);
/// Remainder; b must be nonzero.
FieldPoly mod(const FiniteField& F, const FieldPoly& a, const FieldPoly& b);
/// Exact quotient and remainder.
std::pair<FieldPoly, FieldPoly> divmod(const FiniteField& F, const FieldPoly& a, const FieldPoly& b);
/// Monic gcd.
FieldPoly gcd(const FiniteField& F, FieldPoly a, FieldPoly b);
FieldPoly powmod(const FiniteField& F, FieldPoly base, std::uint64_t e, const FieldPoly& m);
FiniteField::Elem eval(const FiniteField& F, const FieldPoly& f, FiniteField::Elem x);
/// Roots in F with multiplicity, ascending by encoding, found by scanning the field.
std::vector<FiniteField::Elem> roots(const FiniteField& F, const FieldPoly& f);
/// Least d such that f splits over the degree-d extension of F.
int splitting_degree(const FiniteField& F, const FieldPoly& f);
}  // namespace field_poly

}  // namespace modtheta
