#pragma once

#include <map>
#include <memory>
#include <vector>

#include "json.hpp"
#include "modtheta/laurent.hpp"
#include "modtheta/rep_ring.hpp"
#include "modtheta/root_data.hpp"

namespace modtheta {

/// Finite sum of coeff * c_lambda in the spherical Hecke algebra, coefficients
/// in Z[v^{+-1}] with v^2 = q.
struct HeckeElement {
  RootDatumPtr datum;
  std::map<Cocharacter, LaurentV> terms;

  static HeckeElement basis(RootDatumPtr datum, const Cocharacter& lambda);
  void add(const Cocharacter& lambda, const LaurentV& c);
  LaurentV coeff(const Cocharacter& lambda) const;
  bool operator==(const HeckeElement& o) const;

  /// {"datum": name, "terms": [{"weight": [...], "coeff": [{"v": e, "c": n}]}]}
  nlohmann::json to_json() const;
  /// The datum field is resolved through RootDatum::from_name unless a datum is supplied.
  static HeckeElement from_json(const nlohmann::json& doc, RootDatumPtr datum = nullptr);
};

/// Element of R(G^) tensor Z[v^{+-1}]: sum coeff * chi_lambda.
struct LaurentCharacter {
  std::map<Cocharacter, LaurentV> terms;

  void add(const Cocharacter& lambda, const LaurentV& c);
  LaurentV coeff(const Cocharacter& lambda) const;
  bool operator==(const LaurentCharacter&) const = default;
  nlohmann::json to_json(const RootDatum& datum) const;
};

/// q-graded Kostant partition function of beta over the positive coroots,
/// grading by the number of parts. Encoded in even v-exponents. With
/// graded = false the value at q = 1 is returned as a constant.
LaurentV q_kostant(const RootDatum& datum, const Cocharacter& beta, bool graded = true);

/// Lusztig's q-analogue K_{lambda,mu}(q) of the weight multiplicity.
LaurentV lusztig_q_analog(const RootDatum& datum, const Cocharacter& lambda,
                          const Cocharacter& mu);

/// Triangular Satake data on a set of dominant weights closed under
/// dominant_weights_below, listed in graded order.
///
///   forward[i][j]: coefficient of chi_{mu_j} in S(c_{lambda_i}),  = b(mu) v^{2<rho,mu>}
///   inverse[i][j]: coefficient of c_{mu_j} in S^{-1}(chi_{lambda_i}),
///                  = v^{-2<rho,lambda>} d(mu)
/// Both are upper triangular: entry (i, j) vanishes unless mu_j <= lambda_i,
/// and the list puts higher weights first.
struct SatakeMatrices {
  RootDatumPtr datum;
  std::vector<Cocharacter> lambda_list;
  std::map<Cocharacter, std::size_t> index;
  std::vector<std::vector<LaurentV>> forward;
  std::vector<std::vector<LaurentV>> inverse;

  std::size_t size() const { return lambda_list.size(); }
  bool covers(const Cocharacter& lambda) const { return index.count(lambda) != 0; }
  const LaurentV& b_entry(const Cocharacter& lambda, const Cocharacter& mu) const;
  const LaurentV& d_entry(const Cocharacter& lambda, const Cocharacter& mu) const;
  /// b_lambda(mu) = forward entry times v^{-2<rho,mu>}.
  LaurentV b_coefficient(const Cocharacter& lambda, const Cocharacter& mu) const;
  /// d_lambda(mu) = inverse entry times v^{2<rho,lambda>}.
  LaurentV d_coefficient(const Cocharacter& lambda, const Cocharacter& mu) const;
  /// True when every b and d is a constant integer, as the classical statement
  /// b_lambda(mu), d_lambda(mu) in Z predicts. Often false; reported, not enforced.
  bool coefficients_constant() const;
};

/// Close the cutoff under dominant_weights_below and assemble both matrices.
/// Rows are memoized per datum, so rebuilding with a larger cutoff is cheap.
SatakeMatrices build_satake_matrices(RootDatumPtr datum, const std::vector<Cocharacter>& cutoff);

LaurentCharacter satake(const HeckeElement& h);
HeckeElement satake_inverse(RootDatumPtr datum, const LaurentCharacter& x);
HeckeElement hecke_multiply(const HeckeElement& a, const HeckeElement& b);

}  // namespace modtheta
