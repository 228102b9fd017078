#include "modtheta/laurent.hpp"

#include <sstream>

#include "modtheta/errors.hpp"

namespace modtheta {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError("int64 overflow in addition");
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("int64 overflow in multiplication");
  return r;
}

LaurentV::LaurentV(long long constant) {
  if (constant != 0) terms_[0] = constant;
}

LaurentV LaurentV::monomial(long long coeff, int v_exponent) {
  LaurentV out;
  if (coeff != 0) out.terms_[v_exponent] = coeff;
  return out;
}

void LaurentV::add_term(int e, long long c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = checked_add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

long long LaurentV::coeff(int v_exponent) const {
  const auto it = terms_.find(v_exponent);
  return it == terms_.end() ? 0 : it->second;
}

int LaurentV::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LaurentV::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

bool LaurentV::in_q() const {
  for (const auto& [e, c] : terms_)
    if (e % 2 != 0) return false;
  return true;
}

bool LaurentV::is_q_polynomial() const { return in_q() && min_exponent() >= 0; }

LaurentV& LaurentV::operator+=(const LaurentV& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentV& LaurentV::operator-=(const LaurentV& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentV& LaurentV::operator*=(const LaurentV& o) {
  LaurentV out;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) out.add_term(e1 + e2, checked_mul(c1, c2));
  terms_ = std::move(out.terms_);
  return *this;
}

LaurentV LaurentV::operator-() const {
  LaurentV out;
  for (const auto& [e, c] : terms_) out.terms_[e] = -c;
  return out;
}

LaurentV LaurentV::shifted(int k) const {
  LaurentV out;
  for (const auto& [e, c] : terms_) out.terms_[e + k] = c;
  return out;
}

LaurentV LaurentV::inverted() const {
  LaurentV out;
  for (const auto& [e, c] : terms_) out.terms_[-e] = c;
  return out;
}

long long LaurentV::eval_q(long long q) const {
  if (!in_q()) throw DomainError("even_exponents", "cannot evaluate " + to_string() + " at q");
  long long total = 0;
  for (const auto& [e, c] : terms_) {
    const int m = e / 2;
    if (m < 0) throw DomainError("polynomial", "negative power of q in " + to_string());
    long long pw = 1;
    for (int i = 0; i < m; ++i) pw = checked_mul(pw, q);
    total = checked_add(total, checked_mul(c, pw));
  }
  return total;
}

std::string LaurentV::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto [e, c] = *it;
    long long a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    } else if (a < 0) {
      os << '-';
      a = -a;
    }
    first = false;
    if (e == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << '*';
    os << 'v';
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

nlohmann::json LaurentV::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : terms_) arr.push_back({{"v", e}, {"c", c}});
  return arr;
}

LaurentV LaurentV::from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return LaurentV(j.get<long long>());
  if (!j.is_array()) throw ParseError("Laurent coefficient must be an array of {v, c}");
  LaurentV out;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("v") || !t.contains("c")) {
      throw ParseError("Laurent term needs fields 'v' and 'c'");
    }
    out.add_term(t.at("v").get<int>(), t.at("c").get<long long>());
  }
  return out;
}

}  // namespace modtheta
