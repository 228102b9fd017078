#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modtheta/automorphic_weights.hpp"
#include "modtheta/errors.hpp"
#include "modtheta/finite_field.hpp"
#include "modtheta/root_data.hpp"
#include "modtheta/satake.hpp"

namespace modtheta {

using FieldElem = FiniteField::Elem;

/// Point of the dual torus over F: mu -> prod coords_i^{mu_i}.
struct TorusPoint {
  RootDatumPtr datum;
  FieldPtr field;
  std::vector<FieldElem> coords;

  TorusPoint(RootDatumPtr d, FieldPtr f, std::vector<FieldElem> c);

  FieldElem eval(const Cocharacter& mu) const;
  /// (w s)(mu) = s(w^{-1} mu), for the matrix of w^{-1}.
  TorusPoint act(const WeylElement& w_inverse) const;
  bool operator==(const TorusPoint& o) const { return coords == o.coords; }
  bool operator<(const TorusPoint& o) const { return coords < o.coords; }

  nlohmann::json to_json() const;
  static TorusPoint from_json(const nlohmann::json& doc);
};

/// Distinct points of the W-orbit, sorted by encoding.
std::vector<TorusPoint> weyl_orbit(const TorusPoint& s);
bool same_orbit(const TorusPoint& a, const TorusPoint& b);

/// Hecke eigensystem c_lambda -> Psi(c_lambda) on a set of dominant weights
/// closed under dominant_weights_below, with the specialization v -> sqrt_q.
struct EigenSystem {
  RootDatumPtr datum;
  FieldPtr field;
  long long q_value = 0;
  FieldElem sqrt_q = 0;
  std::map<Cocharacter, FieldElem> values;

  FieldElem at(const Cocharacter& lambda) const;
  bool operator==(const EigenSystem& o) const { return values == o.values && q_value == o.q_value && sqrt_q == o.sqrt_q; }

  nlohmann::json to_json() const;
  static EigenSystem from_json(const nlohmann::json& doc);
};

/// Check sqrt_q^2 = q and p does not divide q.
void check_specialization(const FiniteField& F, long long q_value, FieldElem sqrt_q);
/// Value of a Laurent polynomial at v = sqrt_q.
FieldElem specialize(const FiniteField& F, const LaurentV& c, FieldElem sqrt_q);

FieldElem char_value(const TorusPoint& s, const Cocharacter& lambda);
TorusPoint twist_point(const TorusPoint& s, const CharacterOfG& eta, FieldElem t);
/// q^{<eta, lambda>} in F.
FieldElem frobenius_scalar(const CharacterOfG& eta, const Cocharacter& lambda, long long q_value,
                           const FiniteField& F);

/// Psi(c_lambda) = sum_mu B[lambda][mu](sqrt_q) chi_mu(s) on the closure of domain.
EigenSystem eigensystem_from_point(const TorusPoint& s, const std::vector<Cocharacter>& domain,
                                   long long q_value, FieldElem sqrt_q);
/// omega(chi_lambda) = Psi(S^{-1} chi_lambda).
FieldElem omega(const EigenSystem& psi, const Cocharacter& lambda);

/// Recovery needs a larger field. Carries the polynomial and the least
/// extension degree (relative to the given field) over which it splits.
class ExtensionRequired : public DomainError {
 public:
  ExtensionRequired(FieldPoly poly, int degree, const std::string& detail)
      : DomainError("splits", detail), poly_(std::move(poly)), degree_(degree) {}
  const FieldPoly& polynomial() const { return poly_; }
  int degree() const { return degree_; }

 private:
  FieldPoly poly_;
  int degree_;
};

/// Characteristic polynomial of the standard representation (gl(n) and gsp(4)),
/// constant term first.
FieldPoly characteristic_polynomial(const EigenSystem& psi);
/// W-orbit of Satake parameters for gl(n) or gsp(4). Throws ExtensionRequired
/// when the characteristic polynomial does not split, DomainError("recoverable")
/// for other data or when no point reproduces psi.
std::vector<TorusPoint> point_from_eigensystem(const EigenSystem& psi);
bool recoverable_datum(const RootDatum& d);

struct TwistReport {
  bool eigen_ok = true;                     // (i)
  std::vector<Cocharacter> eigen_failures;
  bool param_ok = true;                     // (ii)
  std::string param_route;                  // "orbit" or "character"
  std::string param_detail;
  bool character_checked = false;           // (iii) needs a recovered point
  bool character_ok = true;
  std::vector<Cocharacter> character_failures;
  std::optional<std::vector<TorusPoint>> orbit1;
  std::optional<std::vector<TorusPoint>> orbit2;

  bool equivalent() const { return eigen_ok == param_ok; }
  bool ok() const { return eigen_ok && param_ok && character_ok; }
  nlohmann::json to_json() const;
};

/// Compare psi2 against the twist of psi1 by eta at the eigensystem level,
/// the parameter level, and through the character identity.
TwistReport check_twist_theorem(const EigenSystem& psi1, const EigenSystem& psi2, const CharacterOfG& eta);

/// nu^{|kappa0| / 2} for admissible kappa0.
CharacterOfG theta_twist_character(const SignatureData& sig, const AutWeight& kappa0, const CharacterOfG& nu);

struct IsogenyScalar {
  long long exponent;  // d |kappa0| / 2
  long long value;     // p^exponent mod p
};
IsogenyScalar p_isogeny_scalar(int d, const SignatureData& sig, const AutWeight& kappa0, int p);

}  // namespace modtheta
