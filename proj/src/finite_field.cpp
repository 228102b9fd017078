#include "modtheta/finite_field.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "modtheta/errors.hpp"

namespace modtheta {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

int mod_p(long long a, int p) {
  const long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

// Remainder of a modulo a monic b over F_p.
std::vector<int> prime_poly_mod(std::vector<int> a, const std::vector<int>& b, int p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const int lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = mod_p(a[shift + i] - static_cast<long long>(lead) * b[i], p);
    a.pop_back();
  }
  return a;
}

bool has_monic_factor_of_degree(const std::vector<int>& f, int d, int p) {
  long long count = 1;
  for (int i = 0; i < d; ++i) count *= p;
  std::vector<int> g(d + 1, 0);
  g[d] = 1;
  for (long long code = 0; code < count; ++code) {
    long long c = code;
    for (int i = 0; i < d; ++i, c /= p) g[i] = static_cast<int>(c % p);
    const auto r = prime_poly_mod(f, g, p);
    bool zero = true;
    for (int x : r) zero = zero && x == 0;
    if (zero) return true;
  }
  return false;
}

std::vector<long long> prime_factors(long long n) {
  std::vector<long long> out;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

FiniteField::FiniteField(int p, int k) : p_(p), k_(k) {
  if (!is_prime(p)) throw DomainError("p_prime", std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("k_positive", "extension degree must be >= 1");
  order_ = 1;
  for (int i = 0; i < k; ++i) {
    pow_p_.push_back(order_);
    if (order_ > kMaxOrder / p)
      throw ResourceError("field order " + std::to_string(p) + "^" + std::to_string(k) + " exceeds the table bound");
    order_ *= p;
  }

  modulus_.assign(k + 1, 0);
  modulus_[k] = 1;
  for (std::int64_t code = 0; code < order_; ++code) {
    std::int64_t c = code;
    for (int i = 0; i < k; ++i, c /= p) modulus_[i] = static_cast<int>(c % p);
    if (k > 1 && modulus_[0] == 0) continue;
    bool irreducible = true;
    for (int d = 1; 2 * d <= k && irreducible; ++d) irreducible = !has_monic_factor_of_degree(modulus_, d, p);
    if (irreducible) break;
  }

  const std::int64_t n = order_ - 1;
  const auto factors = prime_factors(n);
  auto slow_pow = [this](Elem a, std::int64_t e) {
    Elem r = 1;
    while (e > 0) {
      if (e & 1) r = mul_poly(r, a);
      a = mul_poly(a, a);
      e >>= 1;
    }
    return r;
  };
  Elem g = 1;
  for (Elem cand = (order_ == 2 ? 1 : 2); cand < order_; ++cand) {
    bool ok = true;
    for (auto r : factors) ok = ok && slow_pow(cand, n / r) != 1;
    if (ok) {
      g = cand;
      break;
    }
  }
  exp_.resize(2 * n);
  log_.assign(order_, -1);
  Elem cur = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    exp_[i] = exp_[i + n] = cur;
    log_[cur] = i;
    cur = mul_poly(cur, g);
  }
  if (cur != 1) throw std::logic_error("multiplicative generator search failed");
}

FiniteField::Elem FiniteField::mul_poly(Elem a, Elem b) const {
  std::vector<long long> prod(2 * k_ - 1, 0);
  const auto ca = coefficients(a), cb = coefficients(b);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) prod[i + j] += static_cast<long long>(ca[i]) * cb[j];
  std::vector<int> r(prod.size());
  for (std::size_t i = 0; i < prod.size(); ++i) r[i] = mod_p(prod[i], p_);
  r = prime_poly_mod(r, modulus_, p_);
  r.resize(k_, 0);
  return from_coefficients(r);
}

void FiniteField::check(Elem a) const {
  if (a < 0 || a >= order_)
    throw DomainError("field_element", std::to_string(a) + " is not an element of F_" + std::to_string(order_));
}

std::vector<int> FiniteField::coefficients(Elem a) const {
  std::vector<int> out(k_);
  for (int i = 0; i < k_; ++i, a /= p_) out[i] = static_cast<int>(a % p_);
  return out;
}

FiniteField::Elem FiniteField::from_coefficients(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) > k_) throw DimensionError("too many coefficients for F_" + std::to_string(order_));
  Elem out = 0;
  for (std::size_t i = 0; i < c.size(); ++i) out += static_cast<Elem>(mod_p(c[i], p_)) * pow_p_[i];
  return out;
}

FiniteField::Elem FiniteField::from_int(long long n) const { return mod_p(n, p_); }

FiniteField::Elem FiniteField::add_raw(Elem a, Elem b, int sign) const {
  Elem out = 0;
  for (int i = 0; i < k_; ++i, a /= p_, b /= p_)
    out += static_cast<Elem>(mod_p(a % p_ + sign * (b % p_), p_)) * pow_p_[i];
  return out;
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (k_ == 1) return (a + b) % p_;
  return add_raw(a, b, 1);
}

FiniteField::Elem FiniteField::sub(Elem a, Elem b) const {
  if (k_ == 1) return (a - b + p_) % p_;
  return add_raw(a, b, -1);
}

FiniteField::Elem FiniteField::neg(Elem a) const { return sub(0, a); }

FiniteField::Elem FiniteField::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw DomainError("nonzero", "division by zero in F_" + std::to_string(order_));
  const std::int64_t n = order_ - 1;
  return exp_[(n - log_[a]) % n];
}

FiniteField::Elem FiniteField::pow(Elem a, long long e) const {
  if (e == 0) return 1;
  if (a == 0) {
    if (e < 0) throw DomainError("nonzero", "negative power of zero");
    return 0;
  }
  const std::int64_t n = order_ - 1;
  long long r = (static_cast<long long>(log_[a]) * (e % n)) % n;
  if (r < 0) r += n;
  return exp_[r];
}

std::int64_t FiniteField::mult_order(Elem a) const {
  if (a == 0) throw DomainError("nonzero", "0 has no multiplicative order");
  const std::int64_t n = order_ - 1;
  return n / std::gcd(n, log_[a]);
}

std::optional<FiniteField::Elem> FiniteField::sqrt(Elem a) const {
  for (Elem x = 0; x < order_; ++x)
    if (mul(x, x) == a) return x;
  return std::nullopt;
}

nlohmann::json FiniteField::to_json(Elem a) const {
  if (k_ == 1) return a;
  return coefficients(a);
}

FiniteField::Elem FiniteField::from_json(const nlohmann::json& j) const {
  if (j.is_number_integer()) return from_int(j.get<long long>());
  if (j.is_array()) {
    std::vector<int> c;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw ParseError("field coefficients must be integers");
      c.push_back(mod_p(x.get<long long>(), p_));
    }
    return from_coefficients(c);
  }
  throw ParseError("field element must be an integer or a coefficient list");
}

std::string FiniteField::to_string(Elem a) const { return to_json(a).dump(); }

FieldPtr make_field(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, k}];
  if (!slot) slot = std::make_shared<const FiniteField>(p, k);
  return slot;
}

namespace field_poly {

using Elem = FiniteField::Elem;

void trim(FieldPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

FieldPoly mul(const FiniteField& F, const FieldPoly& a, const FieldPoly& b) {
  if (a.empty() || b.empty()) return {};
  FieldPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  trim(out);
  return out;
}

std::pair<FieldPoly, FieldPoly> divmod(const FiniteField& F, const FieldPoly& a, const FieldPoly& b) {
  FieldPoly r = a, bb = b;
  trim(r);
  trim(bb);
  if (bb.empty()) throw DomainError("nonzero", "polynomial division by zero");
  if (r.size() < bb.size()) return {{}, r};
  FieldPoly q(r.size() - bb.size() + 1, 0);
  const Elem lead_inv = F.inv(bb.back());
  while (r.size() >= bb.size()) {
    const std::size_t shift = r.size() - bb.size();
    const Elem c = F.mul(r.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < bb.size(); ++i) r[shift + i] = F.sub(r[shift + i], F.mul(c, bb[i]));
    trim(r);
    if (r.empty()) break;
  }
  trim(q);
  return {q, r};
}

FieldPoly mod(const FiniteField& F, const FieldPoly& a, const FieldPoly& b) { return divmod(F, a, b).second; }

FieldPoly gcd(const FiniteField& F, FieldPoly a, FieldPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FieldPoly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const Elem li = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, li);
  return a;
}

FieldPoly powmod(const FiniteField& F, FieldPoly base, std::uint64_t e, const FieldPoly& m) {
  FieldPoly r{1};
  base = mod(F, base, m);
  while (e > 0) {
    if (e & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return mod(F, r, m);
}

Elem eval(const FiniteField& F, const FieldPoly& f, Elem x) {
  Elem acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
  return acc;
}

std::vector<Elem> roots(const FiniteField& F, const FieldPoly& f) {
  FieldPoly g = f;
  trim(g);
  if (g.empty()) throw DomainError("nonzero", "the zero polynomial has every element as a root");
  std::vector<Elem> out;
  for (Elem x = 0; x < F.order() && g.size() > 1; ++x) {
    while (g.size() > 1 && eval(F, g, x) == 0) {
      out.push_back(x);
      g = divmod(F, g, FieldPoly{F.neg(x), 1}).first;
    }
  }
  return out;
}

int splitting_degree(const FiniteField& F, const FieldPoly& f) {
  constexpr int kMaxDegree = 64;
  FieldPoly g = f;
  trim(g);
  if (g.size() <= 2) return 1;
  FieldPoly rest = g;
  const FieldPoly x{0, 1};
  FieldPoly frob = x;
  for (int d = 1; d <= kMaxDegree; ++d) {
    frob = powmod(F, frob, static_cast<std::uint64_t>(F.order()), g);
    FieldPoly diff = frob;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = F.sub(diff[1], 1);
    trim(diff);
    const FieldPoly h = gcd(F, g, diff);
    if (h.size() <= 1) continue;
    FieldPoly r = rest;
    while (true) {
      const FieldPoly c = gcd(F, r, h);
      if (c.size() <= 1) break;
      r = divmod(F, r, c).first;
    }
    if (r.size() <= 1) return d;
  }
  throw ResourceError("splitting field degree exceeds " + std::to_string(kMaxDegree));
}

}  // namespace field_poly

}  // namespace modtheta
