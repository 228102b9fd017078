#include "modtheta/satake.hpp"

#include <mutex>
#include <set>
#include <unordered_map>

#include "modtheta/errors.hpp"

namespace modtheta {

namespace {

using Row = std::map<Cocharacter, LaurentV>;

// Memoized q-Kostant counts, q-analogues and Satake rows for one root datum.
class DatumTables {
 public:
  explicit DatumTables(const RootDatum& d) : datum_(d) {
    for (const auto& beta : d.positive_coroots()) {
      auto c = d.coroot_coefficients(beta);
      if (!c) throw std::logic_error("positive coroot outside the coroot lattice");
      positive_in_basis_.push_back(std::move(*c));
    }
  }

  LaurentV kostant(const Cocharacter& beta) {
    std::lock_guard lock(mutex_);
    return kostant_unlocked(beta);
  }

  LaurentV q_analog(const Cocharacter& lambda, const Cocharacter& mu) {
    std::lock_guard lock(mutex_);
    return q_analog_unlocked(lambda, mu);
  }

  Row inverse_row(const Cocharacter& lambda) {
    std::lock_guard lock(mutex_);
    return inverse_row_unlocked(lambda);
  }

  Row forward_row(const Cocharacter& lambda) {
    std::lock_guard lock(mutex_);
    return forward_row_unlocked(lambda);
  }

 private:
  LaurentV kostant_unlocked(const Cocharacter& beta) {
    const auto coeffs = datum_.coroot_coefficients(beta);
    if (!coeffs) return {};
    for (long long c : *coeffs)
      if (c < 0) return {};
    return count(0, *coeffs);
  }

  // Expressions of target (in simple-coroot coordinates) using positive coroots
  // idx, idx+1, ...; each part contributes one factor of q.
  LaurentV count(std::size_t idx, const std::vector<long long>& target) {
    const bool done = std::all_of(target.begin(), target.end(), [](long long x) { return x == 0; });
    if (done) return LaurentV(1);
    if (idx == positive_in_basis_.size()) return {};
    auto key = std::make_pair(idx, target);
    if (auto it = kostant_memo_.find(key); it != kostant_memo_.end()) return it->second;

    const auto& gamma = positive_in_basis_[idx];
    LaurentV total;
    std::vector<long long> rest = target;
    for (int m = 0;; ++m) {
      total += count(idx + 1, rest).shifted(2 * m);
      bool fits = true;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        rest[k] -= gamma[k];
        if (rest[k] < 0) fits = false;
      }
      if (!fits) break;
    }
    kostant_memo_.emplace(std::move(key), total);
    return total;
  }

  LaurentV q_analog_unlocked(const Cocharacter& lambda, const Cocharacter& mu) {
    if (!datum_.leq(mu, lambda)) {
      throw DomainError("leq", format_weight(mu) + " is not <= " + format_weight(lambda));
    }
    auto key = std::make_pair(lambda, mu);
    if (auto it = q_analog_memo_.find(key); it != q_analog_memo_.end()) return it->second;

    const int n = datum_.rank();
    const Cocharacter& two_rho = datum_.two_rho_dual();
    Cocharacter top(n);
    Cocharacter bottom(n);
    for (int i = 0; i < n; ++i) {
      top[i] = 2 * lambda[i] + two_rho[i];
      bottom[i] = 2 * mu[i] + two_rho[i];
    }
    LaurentV total;
    for (const auto& w : datum_.weyl_group().elements) {
      Cocharacter beta = w.apply(top);
      bool integral = true;
      for (int i = 0; i < n; ++i) {
        const int twice = beta[i] - bottom[i];
        if (twice % 2 != 0) integral = false;
        beta[i] = twice / 2;
      }
      if (!integral) continue;
      const LaurentV p = kostant_unlocked(beta);
      if (w.sign() > 0) total += p; else total -= p;
    }
    if (!total.is_q_polynomial()) {
      throw std::logic_error("q-analogue is not a polynomial in q: " + total.to_string());
    }
    q_analog_memo_.emplace(std::move(key), total);
    return total;
  }

  Row inverse_row_unlocked(const Cocharacter& lambda) {
    if (auto it = inverse_rows_.find(lambda); it != inverse_rows_.end()) return it->second;
    const long long rho_lambda = datum_.rho_pairing_doubled(lambda);
    Row row;
    for (const auto& mu : datum_.dominant_weights_below(lambda)) {
      // d_lambda(mu) = q^{<rho, lambda - mu>} K_{lambda,mu}(q^{-1})
      const LaurentV k = q_analog_unlocked(lambda, mu);
      const LaurentV d = k.inverted().shifted(static_cast<int>(rho_lambda - datum_.rho_pairing_doubled(mu)));
      if (!d.is_q_polynomial()) {
        throw std::logic_error("d_lambda(mu) is not in Z[q] at " + format_weight(lambda) + ", " +
                               format_weight(mu));
      }
      if (!d.is_zero()) row.emplace(mu, d.shifted(static_cast<int>(-rho_lambda)));
    }
    if (row.at(lambda) != LaurentV::monomial(1, static_cast<int>(-rho_lambda))) {
      throw std::logic_error("d_lambda(lambda) != 1 at " + format_weight(lambda));
    }
    inverse_rows_.emplace(lambda, row);
    return row;
  }

  Row forward_row_unlocked(const Cocharacter& lambda) {
    if (auto it = forward_rows_.find(lambda); it != forward_rows_.end()) return it->second;
    const auto below = datum_.dominant_weights_below(lambda);  // graded, lambda first
    std::map<Cocharacter, Row> inverse;
    for (const auto& mu : below) inverse.emplace(mu, inverse_row_unlocked(mu));

    // Solve sum_mu B[lambda][mu] D[mu][nu] = delta(lambda, nu) from the top down.
    Row row;
    for (const auto& nu : below) {
      LaurentV acc = nu == lambda ? LaurentV(1) : LaurentV();
      for (const auto& [mu, b] : row) {
        const auto& d_row = inverse.at(mu);
        if (auto it = d_row.find(nu); it != d_row.end()) acc -= b * it->second;
      }
      const LaurentV& diag = inverse.at(nu).at(nu);
      if (!diag.is_monomial()) throw std::logic_error("Satake diagonal is not a unit");
      const auto [e, c] = *diag.terms().begin();
      if (c != 1 && c != -1) throw std::logic_error("Satake diagonal is not a unit");
      LaurentV entry = acc.shifted(-e);
      if (c == -1) entry = -entry;
      if (!entry.is_zero()) row.emplace(nu, std::move(entry));
    }
    const auto rho_lambda = static_cast<int>(datum_.rho_pairing_doubled(lambda));
    if (row.at(lambda) != LaurentV::monomial(1, rho_lambda)) {
      throw std::logic_error("b_lambda(lambda) != 1 at " + format_weight(lambda));
    }
    forward_rows_.emplace(lambda, row);
    return row;
  }

  const RootDatum& datum_;
  std::recursive_mutex mutex_;
  std::vector<std::vector<long long>> positive_in_basis_;
  std::map<std::pair<std::size_t, std::vector<long long>>, LaurentV> kostant_memo_;
  std::map<std::pair<Cocharacter, Cocharacter>, LaurentV> q_analog_memo_;
  std::map<Cocharacter, Row> inverse_rows_;
  std::map<Cocharacter, Row> forward_rows_;
};

// One table per datum key. Holds its own copy of the datum so that callers may
// pass temporaries.
class TableRegistry {
 public:
  DatumTables& get(const RootDatum& d) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(d.key());
    if (it == entries_.end()) {
      auto owned = std::make_unique<RootDatum>(d);
      auto tables = std::make_unique<DatumTables>(*owned);
      it = entries_.emplace(d.key(), Entry{std::move(owned), std::move(tables)}).first;
    }
    return *it->second.tables;
  }

 private:
  struct Entry {
    std::unique_ptr<RootDatum> datum;
    std::unique_ptr<DatumTables> tables;
  };
  std::mutex mutex_;
  std::unordered_map<std::string, Entry> entries_;
};

DatumTables& tables_for(const RootDatum& d) {
  static TableRegistry registry;
  return registry.get(d);
}

void add_to(std::map<Cocharacter, LaurentV>& m, const Cocharacter& w, const LaurentV& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = m.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
  }
}

LaurentV lookup(const std::map<Cocharacter, LaurentV>& m, const Cocharacter& w) {
  const auto it = m.find(w);
  return it == m.end() ? LaurentV() : it->second;
}

const LaurentV kZero{};

}  // namespace

HeckeElement HeckeElement::basis(RootDatumPtr datum, const Cocharacter& lambda) {
  datum->require_dominant(lambda);
  HeckeElement h{std::move(datum), {}};
  h.terms.emplace(lambda, LaurentV(1));
  return h;
}

void HeckeElement::add(const Cocharacter& lambda, const LaurentV& c) {
  datum->require_dominant(lambda);
  add_to(terms, lambda, c);
}

LaurentV HeckeElement::coeff(const Cocharacter& lambda) const { return lookup(terms, lambda); }

bool HeckeElement::operator==(const HeckeElement& o) const {
  return datum->key() == o.datum->key() && terms == o.terms;
}

nlohmann::json HeckeElement::to_json() const {
  std::vector<Cocharacter> keys;
  for (const auto& [w, c] : terms) keys.push_back(w);
  datum->sort_graded(keys);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : keys) arr.push_back({{"weight", w}, {"coeff", terms.at(w).to_json()}});
  return {{"datum", datum->name()}, {"terms", arr}};
}

HeckeElement HeckeElement::from_json(const nlohmann::json& doc, RootDatumPtr datum) {
  if (!doc.is_object() || !doc.contains("terms") || !doc.at("terms").is_array()) {
    throw ParseError("Hecke element needs a 'terms' array");
  }
  if (!datum) {
    if (!doc.contains("datum") || !doc.at("datum").is_string()) {
      throw ParseError("Hecke element needs a 'datum' name");
    }
    datum = make_datum(RootDatum::from_name(doc.at("datum").get<std::string>()));
  }
  HeckeElement h{datum, {}};
  for (const auto& t : doc.at("terms")) {
    if (!t.contains("weight") || !t.contains("coeff")) {
      throw ParseError("Hecke term needs 'weight' and 'coeff'");
    }
    const auto w = t.at("weight").get<Cocharacter>();
    datum->check_length(w, "weight");
    h.add(w, LaurentV::from_json(t.at("coeff")));
  }
  return h;
}

void LaurentCharacter::add(const Cocharacter& lambda, const LaurentV& c) { add_to(terms, lambda, c); }

LaurentV LaurentCharacter::coeff(const Cocharacter& lambda) const { return lookup(terms, lambda); }

nlohmann::json LaurentCharacter::to_json(const RootDatum& datum) const {
  std::vector<Cocharacter> keys;
  for (const auto& [w, c] : terms) keys.push_back(w);
  datum.sort_graded(keys);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : keys) arr.push_back({{"weight", w}, {"coeff", terms.at(w).to_json()}});
  return {{"datum", datum.name()}, {"terms", arr}};
}

LaurentV q_kostant(const RootDatum& datum, const Cocharacter& beta, bool graded) {
  datum.check_length(beta, "weight");
  const LaurentV p = tables_for(datum).kostant(beta);
  if (graded) return p;
  long long total = 0;
  for (const auto& [e, c] : p.terms()) total = checked_add(total, c);
  return LaurentV(total);
}

LaurentV lusztig_q_analog(const RootDatum& datum, const Cocharacter& lambda,
                          const Cocharacter& mu) {
  return tables_for(datum).q_analog(lambda, mu);
}

const LaurentV& SatakeMatrices::b_entry(const Cocharacter& lambda, const Cocharacter& mu) const {
  const auto i = index.find(lambda);
  const auto j = index.find(mu);
  if (i == index.end() || j == index.end()) return kZero;
  return forward[i->second][j->second];
}

const LaurentV& SatakeMatrices::d_entry(const Cocharacter& lambda, const Cocharacter& mu) const {
  const auto i = index.find(lambda);
  const auto j = index.find(mu);
  if (i == index.end() || j == index.end()) return kZero;
  return inverse[i->second][j->second];
}

LaurentV SatakeMatrices::b_coefficient(const Cocharacter& lambda, const Cocharacter& mu) const {
  return b_entry(lambda, mu).shifted(static_cast<int>(-datum->rho_pairing_doubled(mu)));
}

LaurentV SatakeMatrices::d_coefficient(const Cocharacter& lambda, const Cocharacter& mu) const {
  return d_entry(lambda, mu).shifted(static_cast<int>(datum->rho_pairing_doubled(lambda)));
}

bool SatakeMatrices::coefficients_constant() const {
  for (const auto& lambda : lambda_list)
    for (const auto& mu : lambda_list) {
      const LaurentV b = b_coefficient(lambda, mu);
      const LaurentV d = d_coefficient(lambda, mu);
      if (!b.is_zero() && (b.min_exponent() != 0 || b.max_exponent() != 0)) return false;
      if (!d.is_zero() && (d.min_exponent() != 0 || d.max_exponent() != 0)) return false;
    }
  return true;
}

SatakeMatrices build_satake_matrices(RootDatumPtr datum, const std::vector<Cocharacter>& cutoff) {
  std::set<Cocharacter> closed;
  for (const auto& lambda : cutoff) {
    for (auto& mu : datum->dominant_weights_below(lambda)) closed.insert(std::move(mu));
  }
  SatakeMatrices m;
  m.datum = datum;
  m.lambda_list.assign(closed.begin(), closed.end());
  datum->sort_graded(m.lambda_list);
  for (std::size_t i = 0; i < m.lambda_list.size(); ++i) m.index[m.lambda_list[i]] = i;

  auto& tables = tables_for(*datum);
  const std::size_t n = m.lambda_list.size();
  m.forward.assign(n, std::vector<LaurentV>(n));
  m.inverse.assign(n, std::vector<LaurentV>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [mu, c] : tables.forward_row(m.lambda_list[i])) m.forward[i][m.index.at(mu)] = c;
    for (const auto& [mu, c] : tables.inverse_row(m.lambda_list[i])) m.inverse[i][m.index.at(mu)] = c;
  }
  return m;
}

LaurentCharacter satake(const HeckeElement& h) {
  auto& tables = tables_for(*h.datum);
  LaurentCharacter out;
  for (const auto& [lambda, a] : h.terms)
    for (const auto& [mu, b] : tables.forward_row(lambda)) out.add(mu, a * b);
  return out;
}

HeckeElement satake_inverse(RootDatumPtr datum, const LaurentCharacter& x) {
  auto& tables = tables_for(*datum);
  HeckeElement out{datum, {}};
  for (const auto& [lambda, a] : x.terms) {
    datum->require_dominant(lambda);
    for (const auto& [mu, d] : tables.inverse_row(lambda)) out.add(mu, a * d);
  }
  return out;
}

HeckeElement hecke_multiply(const HeckeElement& a, const HeckeElement& b) {
  if (a.datum->key() != b.datum->key()) {
    throw DomainError("same_datum", "cannot multiply Hecke elements of " + a.datum->name() +
                                        " and " + b.datum->name());
  }
  const RootDatum& d = *a.datum;
  const LaurentCharacter sa = satake(a);
  const LaurentCharacter sb = satake(b);
  LaurentCharacter product;
  for (const auto& [lambda, x] : sa.terms)
    for (const auto& [mu, y] : sb.terms) {
      const auto decomposition = multiply(d, VirtualCharacter::irreducible(lambda),
                                          VirtualCharacter::irreducible(mu));
      const LaurentV xy = x * y;
      for (const auto& [nu, n] : decomposition.coeffs) product.add(nu, xy * LaurentV(n));
    }
  return satake_inverse(a.datum, product);
}

}  // namespace modtheta
