#include "modtheta/galois_twist.hpp"

#include <algorithm>
#include <set>

#include "modtheta/rep_ring.hpp"

namespace modtheta {

namespace {

void require_field(const FiniteField& F, FieldElem a, const char* what) {
  if (a < 0 || a >= F.order())
    throw DomainError("field_element", std::string(what) + " is not an element of the field");
}

RootDatumPtr datum_from_doc(const nlohmann::json& doc) {
  if (!doc.contains("datum")) throw ParseError("missing \"datum\"");
  const auto& d = doc.at("datum");
  if (d.is_string()) return make_datum(RootDatum::from_name(d.get<std::string>()));
  return make_datum(RootDatum::from_json(d));
}

FieldPtr field_from_doc(const nlohmann::json& doc) {
  try {
    return make_field(doc.at("p").get<int>(), doc.value("k", 1));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field: ") + e.what());
  }
}

bool is_gsp4(const RootDatum& d) {
  static const std::string key = RootDatum::gsp(4).key();
  return d.key() == key;
}
bool is_gl(const RootDatum& d) { return d.key() == RootDatum::gl(d.rank()).key(); }

}  // namespace

TorusPoint::TorusPoint(RootDatumPtr d, FieldPtr f, std::vector<FieldElem> c)
    : datum(std::move(d)), field(std::move(f)), coords(std::move(c)) {
  if (static_cast<int>(coords.size()) != datum->rank())
    throw DimensionError("torus point has " + std::to_string(coords.size()) + " coordinates, rank is " +
                         std::to_string(datum->rank()));
  for (auto x : coords) {
    require_field(*field, x, "coordinate");
    if (x == 0) throw DomainError("nonzero", "torus point coordinates must be nonzero");
  }
}

FieldElem TorusPoint::eval(const Cocharacter& mu) const {
  datum->check_length(mu, "weight");
  FieldElem out = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) out = field->mul(out, field->pow(coords[i], mu[i]));
  return out;
}

TorusPoint TorusPoint::act(const WeylElement& w_inverse) const {
  const int n = datum->rank();
  std::vector<FieldElem> out(n, 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out[j] = field->mul(out[j], field->pow(coords[i], w_inverse.matrix[i * n + j]));
  return TorusPoint(datum, field, out);
}

nlohmann::json TorusPoint::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (auto x : coords) c.push_back(field->to_json(x));
  return {{"datum", datum->name()}, {"p", field->p()}, {"k", field->k()}, {"coords", c}};
}

TorusPoint TorusPoint::from_json(const nlohmann::json& doc) {
  auto d = datum_from_doc(doc);
  auto f = field_from_doc(doc);
  if (!doc.contains("coords") || !doc.at("coords").is_array()) throw ParseError("missing \"coords\" list");
  std::vector<FieldElem> c;
  for (const auto& x : doc.at("coords")) c.push_back(f->from_json(x));
  return TorusPoint(d, f, c);
}

std::vector<TorusPoint> weyl_orbit(const TorusPoint& s) {
  std::set<TorusPoint> seen;
  for (const auto& w : s.datum->weyl_group().elements) seen.insert(s.act(w));
  return {seen.begin(), seen.end()};
}

bool same_orbit(const TorusPoint& a, const TorusPoint& b) {
  if (a.datum->key() != b.datum->key() || !(*a.field == *b.field)) return false;
  for (const auto& w : a.datum->weyl_group().elements)
    if (a.act(w) == b) return true;
  return false;
}

FieldElem EigenSystem::at(const Cocharacter& lambda) const {
  const auto it = values.find(lambda);
  if (it == values.end()) throw DomainError("covered", "eigensystem has no value at " + format_weight(lambda));
  return it->second;
}

nlohmann::json EigenSystem::to_json() const {
  std::vector<Cocharacter> keys;
  for (const auto& [w, v] : values) keys.push_back(w);
  datum->sort_graded(keys);
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& w : keys) vals.push_back({{"weight", w}, {"value", field->to_json(values.at(w))}});
  return {{"datum", datum->name()}, {"p", field->p()},          {"k", field->k()},
          {"q", q_value},           {"sqrt_q", field->to_json(sqrt_q)}, {"values", vals}};
}

EigenSystem EigenSystem::from_json(const nlohmann::json& doc) {
  EigenSystem out;
  out.datum = datum_from_doc(doc);
  out.field = field_from_doc(doc);
  try {
    out.q_value = doc.at("q").get<long long>();
    out.sqrt_q = out.field->from_json(doc.at("sqrt_q"));
    for (const auto& t : doc.at("values")) {
      const auto w = t.at("weight").get<Cocharacter>();
      out.datum->require_dominant(w);
      out.values[w] = out.field->from_json(t.at("value"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("eigensystem: ") + e.what());
  }
  check_specialization(*out.field, out.q_value, out.sqrt_q);
  return out;
}

void check_specialization(const FiniteField& F, long long q_value, FieldElem sqrt_q) {
  if (q_value % F.p() == 0)
    throw DomainError("q_prime_to_p", "q = " + std::to_string(q_value) + " is divisible by p = " + std::to_string(F.p()));
  require_field(F, sqrt_q, "sqrt_q");
  if (F.mul(sqrt_q, sqrt_q) != F.from_int(q_value))
    throw DomainError("sqrt_q", F.to_string(sqrt_q) + " does not square to q = " + std::to_string(q_value));
}

FieldElem specialize(const FiniteField& F, const LaurentV& c, FieldElem sqrt_q) {
  FieldElem out = 0;
  for (const auto& [e, n] : c.terms()) out = F.add(out, F.mul(F.from_int(n), F.pow(sqrt_q, e)));
  return out;
}

FieldElem char_value(const TorusPoint& s, const Cocharacter& lambda) {
  s.datum->require_dominant(lambda);
  const auto& F = *s.field;
  FieldElem out = 0;
  for (const auto& [mu, m] : weight_multiplicities(*s.datum, lambda)->mults) {
    FieldElem orbit_sum = 0;
    for (const auto& w : s.datum->weyl_orbit(mu)) orbit_sum = F.add(orbit_sum, s.eval(w));
    out = F.add(out, F.mul(F.from_int(m), orbit_sum));
  }
  return out;
}

TorusPoint twist_point(const TorusPoint& s, const CharacterOfG& eta, FieldElem t) {
  s.datum->check_length(eta.coords, "character");
  require_field(*s.field, t, "t");
  if (t == 0) throw DomainError("nonzero", "twisting element t must be nonzero");
  std::vector<FieldElem> c = s.coords;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = s.field->mul(c[i], s.field->pow(t, eta.coords[i]));
  return TorusPoint(s.datum, s.field, c);
}

FieldElem frobenius_scalar(const CharacterOfG& eta, const Cocharacter& lambda, long long q_value,
                           const FiniteField& F) {
  if (q_value % F.p() == 0)
    throw DomainError("q_prime_to_p", "q = " + std::to_string(q_value) + " is divisible by p = " + std::to_string(F.p()));
  return F.pow(F.from_int(q_value), pairing(eta.coords, lambda));
}

EigenSystem eigensystem_from_point(const TorusPoint& s, const std::vector<Cocharacter>& domain, long long q_value,
                                   FieldElem sqrt_q) {
  const auto& F = *s.field;
  check_specialization(F, q_value, sqrt_q);
  const auto m = build_satake_matrices(s.datum, domain);
  std::vector<FieldElem> chi(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) chi[j] = char_value(s, m.lambda_list[j]);

  EigenSystem out{s.datum, s.field, q_value, sqrt_q, {}};
  std::vector<FieldElem> psi(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j)
      if (!m.forward[i][j].is_zero()) psi[i] = F.add(psi[i], F.mul(specialize(F, m.forward[i][j], sqrt_q), chi[j]));
    out.values[m.lambda_list[i]] = psi[i];
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    FieldElem back = 0;
    for (std::size_t j = i; j < m.size(); ++j)
      if (!m.inverse[i][j].is_zero()) back = F.add(back, F.mul(specialize(F, m.inverse[i][j], sqrt_q), psi[j]));
    if (back != chi[i]) throw std::logic_error("inverse Satake relation fails at " + format_weight(m.lambda_list[i]));
  }
  return out;
}

FieldElem omega(const EigenSystem& psi, const Cocharacter& lambda) {
  const auto m = build_satake_matrices(psi.datum, {lambda});
  const auto& F = *psi.field;
  const std::size_t i = m.index.at(lambda);
  FieldElem out = 0;
  for (std::size_t j = i; j < m.size(); ++j)
    if (!m.inverse[i][j].is_zero())
      out = F.add(out, F.mul(specialize(F, m.inverse[i][j], psi.sqrt_q), psi.at(m.lambda_list[j])));
  return out;
}

bool recoverable_datum(const RootDatum& d) { return is_gl(d) || is_gsp4(d); }

FieldPoly characteristic_polynomial(const EigenSystem& psi) {
  const auto& d = *psi.datum;
  const auto& F = *psi.field;
  if (is_gl(d)) {
    const int n = d.rank();
    FieldPoly f(n + 1, 0);
    f[n] = 1;
    for (int i = 1; i <= n; ++i) {
      Cocharacter fundamental(n, 0);
      std::fill(fundamental.begin(), fundamental.begin() + i, 1);
      const FieldElem e = omega(psi, fundamental);
      f[n - i] = i % 2 == 0 ? e : F.neg(e);
    }
    return f;
  }
  if (is_gsp4(d)) {
    if (F.p() == 2) throw DomainError("p_odd", "gsp4 recovery divides by 2");
    const Cocharacter standard{1, 1, 1};
    const FieldElem z = omega(psi, {2, 1, 1});
    const FieldElem e1 = omega(psi, standard);
    FieldElem p2 = 0;
    for (const auto& [mu, c] : decompose(d, adams(character_polynomial(d, standard), 2)).coeffs)
      p2 = F.add(p2, F.mul(F.from_int(c), omega(psi, mu)));
    const FieldElem e2 = F.div(F.sub(F.mul(e1, e1), p2), F.from_int(2));
    const FieldElem e3 = F.mul(z, e1);
    const FieldElem e4 = F.mul(z, z);
    return {e4, F.neg(e3), e2, F.neg(e1), 1};
  }
  throw DomainError("recoverable", "point recovery is implemented for gl(n) and gsp4 only, not " + d.name());
}

std::vector<TorusPoint> point_from_eigensystem(const EigenSystem& psi) {
  const auto& F = *psi.field;
  const FieldPoly f = characteristic_polynomial(psi);
  const auto rs = field_poly::roots(F, f);
  if (rs.size() + 1 != f.size()) {
    const int d = field_poly::splitting_degree(F, f);
    nlohmann::json coeffs = nlohmann::json::array();
    for (auto c : f) coeffs.push_back(F.to_json(c));
    throw ExtensionRequired(f, d * F.k(),
                            "characteristic polynomial " + coeffs.dump() + " (constant term first) splits over F_" +
                                std::to_string(F.p()) + "^" + std::to_string(d * F.k()) + ", not over F_" +
                                std::to_string(F.p()) + "^" + std::to_string(F.k()));
  }
  if (is_gl(*psi.datum)) return weyl_orbit(TorusPoint(psi.datum, psi.field, rs));

  // gsp4: eigenvalues s0 * {s1 s2, s1, s2, 1}, paired into two products equal to z.
  const FieldElem z = omega(psi, {2, 1, 1});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (b == a || F.mul(rs[a], rs[b]) != z) continue;
      std::vector<int> rest;
      for (int i = 0; i < 4; ++i)
        if (i != a && i != b) rest.push_back(i);
      const FieldElem c = rs[rest[0]], e = rs[rest[1]];
      if (F.mul(c, e) != z || rs[a] == 0) continue;
      return weyl_orbit(TorusPoint(psi.datum, psi.field, {rs[a], F.div(c, rs[a]), F.div(e, rs[a])}));
    }
  throw DomainError("recoverable", "eigenvalues do not pair up into a symplectic similitude class");
}

nlohmann::json TwistReport::to_json() const {
  auto weights = [](const std::vector<Cocharacter>& ws) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& w : ws) a.push_back(w);
    return a;
  };
  auto orbit = [](const std::optional<std::vector<TorusPoint>>& o) -> nlohmann::json {
    if (!o) return nullptr;
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : *o) {
      nlohmann::json c = nlohmann::json::array();
      for (auto x : s.coords) c.push_back(s.field->to_json(x));
      a.push_back(c);
    }
    return a;
  };
  return {{"eigen_ok", eigen_ok},
          {"eigen_failures", weights(eigen_failures)},
          {"param_ok", param_ok},
          {"param_route", param_route},
          {"param_detail", param_detail},
          {"character_checked", character_checked},
          {"character_ok", character_ok},
          {"character_failures", weights(character_failures)},
          {"orbit1", orbit(orbit1)},
          {"orbit2", orbit(orbit2)},
          {"equivalent", equivalent()},
          {"ok", ok()}};
}

TwistReport check_twist_theorem(const EigenSystem& psi1, const EigenSystem& psi2, const CharacterOfG& eta) {
  if (psi1.datum->key() != psi2.datum->key()) throw DomainError("same_specialization", "eigensystems live on different data");
  if (!(*psi1.field == *psi2.field)) throw DomainError("same_specialization", "eigensystems live over different fields");
  if (psi1.q_value != psi2.q_value || psi1.sqrt_q != psi2.sqrt_q)
    throw DomainError("same_specialization", "eigensystems use different q or sqrt_q");
  std::vector<Cocharacter> domain, other;
  for (const auto& [w, v] : psi1.values) domain.push_back(w);
  for (const auto& [w, v] : psi2.values) other.push_back(w);
  if (domain != other) throw DomainError("same_specialization", "eigensystems have different domains");
  psi1.datum->check_length(eta.coords, "character");
  const auto& F = *psi1.field;
  const FieldElem qbar = F.from_int(psi1.q_value);
  const long long q = psi1.q_value;

  TwistReport r;
  for (const auto& lambda : domain) {
    if (psi2.values.at(lambda) != F.mul(frobenius_scalar(eta, lambda, q, F), psi1.values.at(lambda))) {
      r.eigen_ok = false;
      r.eigen_failures.push_back(lambda);
    }
  }

  auto character_route = [&]() {
    r.param_route = "character";
    for (const auto& lambda : domain) {
      if (omega(psi2, lambda) != F.mul(frobenius_scalar(eta, lambda, q, F), omega(psi1, lambda))) {
        r.param_ok = false;
        r.param_detail = "omega values differ at " + format_weight(lambda);
        return;
      }
    }
  };

  std::optional<TorusPoint> s1;
  if (recoverable_datum(*psi1.datum)) {
    r.param_route = "orbit";
    try {
      r.orbit1 = point_from_eigensystem(psi1);
      s1 = r.orbit1->front();
    } catch (const ExtensionRequired& e) {
      r.param_detail = e.what();
    } catch (const DomainError& e) {
      r.param_ok = false;
      r.param_detail = std::string("psi1: ") + e.what();
    }
    if (s1) {
      try {
        r.orbit2 = point_from_eigensystem(psi2);
      } catch (const DomainError& e) {
        r.param_ok = false;
        r.param_detail = std::string("psi2: ") + e.what();
      }
    }
    if (s1 && r.orbit2) {
      const TorusPoint twisted = twist_point(*s1, eta, qbar);
      const TorusPoint& s2 = r.orbit2->front();
      if (!same_orbit(twisted, s2)) {
        r.param_ok = false;
        r.param_detail = "recovered orbit of psi2 is not the twisted orbit of psi1";
      } else if (eigensystem_from_point(*s1, domain, q, psi1.sqrt_q).values != psi1.values) {
        r.param_ok = false;
        r.param_detail = "psi1 is not the eigensystem of its recovered point";
      } else if (eigensystem_from_point(s2, domain, q, psi2.sqrt_q).values != psi2.values) {
        r.param_ok = false;
        r.param_detail = "psi2 is not the eigensystem of its recovered point";
      }
    } else if (!s1 && r.param_ok) {
      character_route();
    }
  } else {
    character_route();
  }

  if (!s1) return r;
  r.character_checked = true;
  const TorusPoint twisted = twist_point(*s1, eta, qbar);
  for (const auto& lambda : domain) {
    const FieldElem scale = frobenius_scalar(eta, lambda, q, F);
    if (char_value(twisted, lambda) != F.mul(scale, char_value(*s1, lambda))) {
      r.character_ok = false;
      r.character_failures.push_back(lambda);
    }
  }
  return r;
}

CharacterOfG theta_twist_character(const SignatureData& sig, const AutWeight& kappa0, const CharacterOfG& nu) {
  if (!is_admissible_characterized(sig, kappa0))
    throw DomainError("admissible", kappa0.to_string() + " is not admissible");
  const long long a = abs_weight(kappa0);
  if (a % 2 != 0) throw DomainError("even_abs", "|kappa0| = " + std::to_string(a) + " is odd");
  CharacterOfG out{nu.name + "^" + std::to_string(a / 2), nu.coords};
  for (auto& c : out.coords) c *= static_cast<int>(a / 2);
  return out;
}

IsogenyScalar p_isogeny_scalar(int d, const SignatureData& sig, const AutWeight& kappa0, int p) {
  if (d < 1) throw DomainError("d_positive", "d must be >= 1; d = 0 is the prime-to-p case");
  if (!is_prime(p)) throw DomainError("p_prime", std::to_string(p) + " is not prime");
  if (!is_admissible_characterized(sig, kappa0))
    throw DomainError("admissible", kappa0.to_string() + " is not admissible");
  const long long exponent = static_cast<long long>(d) * (abs_weight(kappa0) / 2);
  const auto F = make_field(p, 1);
  return {exponent, F->pow(F->from_int(p), exponent)};
}

}  // namespace modtheta
