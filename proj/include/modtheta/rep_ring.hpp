#pragma once

#include <map>
#include <memory>

#include "json.hpp"
#include "modtheta/root_data.hpp"

namespace modtheta {

/// Multiplicities dim V_lambda(mu) for the dominant mu <= lambda. Other weights
/// follow by W-invariance.
struct WeightMultiplicityTable {
  Cocharacter highest;
  std::map<Cocharacter, long long> mults;

  long long at(const Cocharacter& dominant_mu) const {
    const auto it = mults.find(dominant_mu);
    return it == mults.end() ? 0 : it->second;
  }
};

/// Element of Z[X_*(T)] written out weight by weight (a "torus polynomial").
using WeightPolynomial = std::map<Cocharacter, long long>;

/// Finite integer combination sum c_lambda chi_lambda of irreducible characters,
/// keyed by dominant highest weight.
struct VirtualCharacter {
  std::map<Cocharacter, long long> coeffs;

  static VirtualCharacter irreducible(const Cocharacter& lambda) { return {{{lambda, 1}}}; }
  long long coeff(const Cocharacter& lambda) const {
    const auto it = coeffs.find(lambda);
    return it == coeffs.end() ? 0 : it->second;
  }
  void add(const Cocharacter& lambda, long long c);
  VirtualCharacter& operator+=(const VirtualCharacter& o);
  bool operator==(const VirtualCharacter&) const = default;

  /// {"terms": [{"weight": [...], "coeff": n}]}, terms in graded order.
  nlohmann::json to_json(const RootDatum& datum) const;
  static VirtualCharacter from_json(const nlohmann::json& doc);
};

/// Freudenthal recursion, memoized per (datum, lambda). Safe for concurrent use.
std::shared_ptr<const WeightMultiplicityTable> weight_multiplicities(const RootDatum& datum,
                                                                     const Cocharacter& lambda);

/// Weyl dimension formula over exact rationals.
long long dimension(const RootDatum& datum, const Cocharacter& lambda);

/// Full torus expansion of chi_lambda.
WeightPolynomial character_polynomial(const RootDatum& datum, const Cocharacter& lambda);
WeightPolynomial expand(const RootDatum& datum, const VirtualCharacter& x);
WeightPolynomial multiply_polynomials(const WeightPolynomial& a, const WeightPolynomial& b);
/// psi^i: every weight rescaled by i.
WeightPolynomial adams(const WeightPolynomial& p, int i);

/// Inverse of expand for W-invariant polynomials: peel off the character of the
/// highest remaining dominant term until nothing is left. Throws DomainError if
/// the input is not W-invariant.
VirtualCharacter decompose(const RootDatum& datum, const WeightPolynomial& p);

VirtualCharacter multiply(const RootDatum& datum, const VirtualCharacter& a,
                          const VirtualCharacter& b);
VirtualCharacter tensor_power(const RootDatum& datum, const Cocharacter& lambda, int e);
VirtualCharacter tensor_power(const RootDatum& datum, const VirtualCharacter& x, int e);
/// Sym^e via e Sym^e = sum_{i=1..e} psi^i Sym^{e-i}.
VirtualCharacter sym_power(const RootDatum& datum, const Cocharacter& lambda, int e);
VirtualCharacter sym_power(const RootDatum& datum, const VirtualCharacter& x, int e);

/// Value of the character at the identity, i.e. its (virtual) dimension.
long long virtual_dimension(const RootDatum& datum, const VirtualCharacter& x);

}  // namespace modtheta
