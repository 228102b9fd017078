#include "modtheta/rep_ring.hpp"

#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "modtheta/errors.hpp"
#include "modtheta/laurent.hpp"

namespace modtheta {

namespace {

class MultiplicityCache {
 public:
  std::shared_ptr<const WeightMultiplicityTable> find(const std::string& key) const {
    std::shared_lock lock(mutex_);
    const auto it = tables_.find(key);
    return it == tables_.end() ? nullptr : it->second;
  }

  std::shared_ptr<const WeightMultiplicityTable> insert(
      const std::string& key, std::shared_ptr<const WeightMultiplicityTable> table) {
    std::unique_lock lock(mutex_);
    return tables_.try_emplace(key, std::move(table)).first->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const WeightMultiplicityTable>> tables_;
};

MultiplicityCache& cache() {
  static MultiplicityCache instance;
  return instance;
}

Cocharacter add_scaled(const Cocharacter& a, const Cocharacter& b, int k) {
  Cocharacter out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += k * b[i];
  return out;
}

Cocharacter doubled_plus(const Cocharacter& mu, const Cocharacter& two_rho) {
  Cocharacter out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = 2 * mu[i] + two_rho[i];
  return out;
}

std::shared_ptr<const WeightMultiplicityTable> freudenthal(const RootDatum& datum,
                                                           const Cocharacter& lambda) {
  // 4x the usual recursion so that rho stays integral:
  //   ((L,L) - (M,M)) m(mu) = 8 sum_{beta>0} sum_{k>=1} m(mu + k beta)(mu + k beta, beta)
  // with L = 2 lambda + 2 rho, M = 2 mu + 2 rho, rho the dual group's half-sum.
  const auto dominant = datum.dominant_weights_below(lambda);
  auto table = std::make_shared<WeightMultiplicityTable>();
  table->highest = lambda;
  std::map<Cocharacter, bool> in_support;
  for (const auto& mu : dominant) in_support[mu] = true;

  const Cocharacter big_l = doubled_plus(lambda, datum.two_rho_dual());
  const long long norm_l = datum.form(big_l, big_l);
  table->mults[lambda] = 1;
  for (const auto& mu : dominant) {
    if (mu == lambda) continue;
    long long rhs = 0;
    for (const auto& beta : datum.positive_coroots()) {
      for (int k = 1;; ++k) {
        const Cocharacter w = add_scaled(mu, beta, k);
        const Cocharacter d = datum.dominant_conjugate(w);
        if (!in_support.count(d)) break;
        const long long m = table->mults.at(d);
        rhs = checked_add(rhs, checked_mul(m, datum.form(w, beta)));
      }
    }
    const Cocharacter big_m = doubled_plus(mu, datum.two_rho_dual());
    const long long denom = norm_l - datum.form(big_m, big_m);
    const long long num = checked_mul(8, rhs);
    if (denom <= 0 || num % denom != 0) {
      throw std::logic_error("Freudenthal recursion produced a non-integral multiplicity at " +
                             format_weight(mu));
    }
    if (num != 0) table->mults[mu] = num / denom;
  }
  return table;
}

}  // namespace

void VirtualCharacter::add(const Cocharacter& lambda, long long c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs.try_emplace(lambda, c);
  if (!inserted) {
    it->second = checked_add(it->second, c);
    if (it->second == 0) coeffs.erase(it);
  }
}

VirtualCharacter& VirtualCharacter::operator+=(const VirtualCharacter& o) {
  for (const auto& [w, c] : o.coeffs) add(w, c);
  return *this;
}

nlohmann::json VirtualCharacter::to_json(const RootDatum& datum) const {
  std::vector<Cocharacter> keys;
  for (const auto& [w, c] : coeffs) keys.push_back(w);
  datum.sort_graded(keys);
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& w : keys) terms.push_back({{"weight", w}, {"coeff", coeffs.at(w)}});
  return {{"terms", terms}};
}

VirtualCharacter VirtualCharacter::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("terms") || !doc.at("terms").is_array()) {
    throw ParseError("virtual character needs a 'terms' array");
  }
  VirtualCharacter out;
  try {
    for (const auto& t : doc.at("terms")) {
      out.add(t.at("weight").get<Cocharacter>(), t.at("coeff").get<long long>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("virtual character term: ") + e.what());
  }
  return out;
}

std::shared_ptr<const WeightMultiplicityTable> weight_multiplicities(const RootDatum& datum,
                                                                     const Cocharacter& lambda) {
  datum.require_dominant(lambda);
  const std::string key = datum.key() + '|' + format_weight(lambda);
  if (auto hit = cache().find(key)) return hit;
  return cache().insert(key, freudenthal(datum, lambda));
}

long long dimension(const RootDatum& datum, const Cocharacter& lambda) {
  datum.require_dominant(lambda);
  using boost::multiprecision::cpp_int;
  const Cocharacter shifted = doubled_plus(lambda, datum.two_rho_dual());
  const Cocharacter& rho2 = datum.two_rho_dual();
  cpp_int num = 1;
  cpp_int den = 1;
  for (const auto& beta : datum.positive_coroots()) {
    num *= datum.form(shifted, beta);
    den *= datum.form(rho2, beta);
  }
  if (num % den != 0) throw std::logic_error("Weyl dimension formula is not integral");
  return static_cast<long long>(num / den);
}

WeightPolynomial character_polynomial(const RootDatum& datum, const Cocharacter& lambda) {
  const auto table = weight_multiplicities(datum, lambda);
  WeightPolynomial out;
  for (const auto& [mu, m] : table->mults)
    for (const auto& w : datum.weyl_orbit(mu)) out[w] += m;
  return out;
}

WeightPolynomial expand(const RootDatum& datum, const VirtualCharacter& x) {
  WeightPolynomial out;
  for (const auto& [lambda, c] : x.coeffs) {
    for (const auto& [w, m] : character_polynomial(datum, lambda)) {
      auto& slot = out[w];
      slot = checked_add(slot, checked_mul(c, m));
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

WeightPolynomial multiply_polynomials(const WeightPolynomial& a, const WeightPolynomial& b) {
  WeightPolynomial out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      auto& slot = out[add_scaled(wa, wb, 1)];
      slot = checked_add(slot, checked_mul(ca, cb));
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

WeightPolynomial adams(const WeightPolynomial& p, int i) {
  WeightPolynomial out;
  for (const auto& [w, c] : p) {
    Cocharacter scaled = w;
    for (auto& x : scaled) x *= i;
    out[scaled] += c;
  }
  return out;
}

VirtualCharacter decompose(const RootDatum& datum, const WeightPolynomial& p) {
  auto graded = [&datum](const Cocharacter& a, const Cocharacter& b) {
    return datum.graded_before(a, b);
  };
  std::map<Cocharacter, long long, decltype(graded)> dominant(graded);
  auto coeff_of = [&p](const Cocharacter& w) {
    const auto it = p.find(w);
    return it == p.end() ? 0LL : it->second;
  };
  for (const auto& [w, c] : p) {
    if (c == 0) continue;
    const Cocharacter d = datum.dominant_conjugate(w);
    if (coeff_of(d) != c) {
      throw DomainError("w_invariant", "coefficient of " + format_weight(w) +
                                           " differs from that of its dominant conjugate");
    }
    if (d != w) continue;
    for (const auto& x : datum.weyl_orbit(d)) {
      if (coeff_of(x) != c) {
        throw DomainError("w_invariant", "coefficient of " + format_weight(x) +
                                             " differs from that of " + format_weight(d));
      }
    }
    dominant[w] = c;
  }
  VirtualCharacter out;
  while (!dominant.empty()) {
    const auto top = *dominant.begin();
    out.add(top.first, top.second);
    const auto table = weight_multiplicities(datum, top.first);
    for (const auto& [mu, m] : table->mults) {
      auto it = dominant.find(mu);
      const long long delta = checked_mul(top.second, m);
      if (it == dominant.end()) {
        dominant.emplace(mu, -delta);
      } else {
        it->second = checked_add(it->second, -delta);
        if (it->second == 0) dominant.erase(it);
      }
    }
  }
  return out;
}

VirtualCharacter multiply(const RootDatum& datum, const VirtualCharacter& a,
                          const VirtualCharacter& b) {
  return decompose(datum, multiply_polynomials(expand(datum, a), expand(datum, b)));
}

VirtualCharacter tensor_power(const RootDatum& datum, const Cocharacter& lambda, int e) {
  return tensor_power(datum, VirtualCharacter::irreducible(lambda), e);
}

VirtualCharacter tensor_power(const RootDatum& datum, const VirtualCharacter& x, int e) {
  if (e < 1) throw DomainError("e_positive", "tensor power exponent must be >= 1");
  const WeightPolynomial base = expand(datum, x);
  WeightPolynomial acc = base;
  for (int i = 1; i < e; ++i) acc = multiply_polynomials(acc, base);
  return decompose(datum, acc);
}

VirtualCharacter sym_power(const RootDatum& datum, const Cocharacter& lambda, int e) {
  return sym_power(datum, VirtualCharacter::irreducible(lambda), e);
}

VirtualCharacter sym_power(const RootDatum& datum, const VirtualCharacter& x, int e) {
  if (e < 1) throw DomainError("e_positive", "symmetric power exponent must be >= 1");
  const WeightPolynomial base = expand(datum, x);
  std::vector<WeightPolynomial> sym{WeightPolynomial{{Cocharacter(datum.rank(), 0), 1}}};
  for (int j = 1; j <= e; ++j) {
    WeightPolynomial acc;
    for (int i = 1; i <= j; ++i) {
      for (const auto& [w, c] : multiply_polynomials(adams(base, i), sym[j - i])) {
        auto& slot = acc[w];
        slot = checked_add(slot, c);
      }
    }
    WeightPolynomial next;
    for (const auto& [w, c] : acc) {
      if (c == 0) continue;
      if (c % j != 0) throw std::logic_error("Newton recursion for Sym^e is not integral");
      next[w] = c / j;
    }
    sym.push_back(std::move(next));
  }
  return decompose(datum, sym[e]);
}

long long virtual_dimension(const RootDatum& datum, const VirtualCharacter& x) {
  long long total = 0;
  for (const auto& [lambda, c] : x.coeffs)
    total = checked_add(total, checked_mul(c, dimension(datum, lambda)));
  return total;
}

}  // namespace modtheta
