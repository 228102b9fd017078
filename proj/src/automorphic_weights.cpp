#include "modtheta/automorphic_weights.hpp"

#include <map>
#include <numeric>
#include <sstream>

#include "modtheta/errors.hpp"
#include "modtheta/finite_field.hpp"

namespace modtheta {

SignatureData SignatureData::symplectic(std::vector<int> ns) {
  SignatureData s;
  s.kind = SignatureCase::C;
  for (int n : ns) {
    if (n < 1) throw DomainError("a_positive", "place sizes must be >= 1");
    s.places.push_back({0, 0, n});
  }
  if (s.places.empty()) throw DomainError("places_nonempty", "signature needs at least one place");
  return s;
}

SignatureData SignatureData::unitary(std::vector<std::pair<int, int>> pairs) {
  SignatureData s;
  s.kind = SignatureCase::A;
  for (auto [a, b] : pairs) {
    if (a < 1 || b < 1) throw DomainError("a_positive", "place sizes must be >= 1");
    s.places.push_back({a, b, a + b});
  }
  if (s.places.empty()) throw DomainError("places_nonempty", "signature needs at least one place");
  return s;
}

SignatureData SignatureData::from_json(const nlohmann::json& doc) {
  try {
    const std::string c = doc.at("case").get<std::string>();
    if (c == "C") {
      std::vector<int> ns;
      for (const auto& p : doc.at("places")) ns.push_back(p.at("n").get<int>());
      return symplectic(ns);
    }
    if (c == "A") {
      std::vector<std::pair<int, int>> pairs;
      for (const auto& p : doc.at("places")) pairs.emplace_back(p.at("a").get<int>(), p.at("a_star").get<int>());
      return unitary(pairs);
    }
    throw ParseError("case must be \"A\" or \"C\", got \"" + c + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signature: ") + e.what());
  }
}

nlohmann::json SignatureData::to_json() const {
  nlohmann::json places = nlohmann::json::array();
  for (const auto& p : this->places) {
    if (kind == SignatureCase::C)
      places.push_back({{"n", p.n}});
    else
      places.push_back({{"a", p.a}, {"a_star", p.a_star}});
  }
  return {{"case", kind == SignatureCase::C ? "C" : "A"}, {"places", places}};
}

std::vector<int> SignatureData::factor_sizes() const {
  std::vector<int> out;
  for (const auto& p : places) {
    if (kind == SignatureCase::C) {
      out.push_back(p.n);
    } else {
      out.push_back(p.a);
      out.push_back(p.a_star);
    }
  }
  return out;
}

RootDatum SignatureData::datum() const {
  const auto sizes = factor_sizes();
  RootDatum d = RootDatum::gl(sizes.front());
  for (std::size_t i = 1; i < sizes.size(); ++i) d = RootDatum::product(d, RootDatum::gl(sizes[i]));
  return d;
}

std::vector<int> AutWeight::flatten() const {
  std::vector<int> out;
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

AutWeight AutWeight::unflatten(const SignatureData& sig, const std::vector<int>& flat) {
  AutWeight out;
  std::size_t at = 0;
  for (int a : sig.factor_sizes()) {
    if (at + a > flat.size()) throw DimensionError("weight is shorter than the signature");
    out.parts.emplace_back(flat.begin() + at, flat.begin() + at + a);
    at += a;
  }
  if (at != flat.size()) throw DimensionError("weight is longer than the signature");
  return out;
}

AutWeight AutWeight::from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("automorphic weight must be a list");
  AutWeight out;
  // A flat list of integers is read as a single factor.
  if (!doc.empty() && doc.front().is_number_integer()) {
    out.parts.push_back(doc.get<std::vector<int>>());
    return out;
  }
  try {
    out.parts = doc.get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("automorphic weight: ") + e.what());
  }
  return out;
}

std::string AutWeight::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? ";" : "") << format_weight(parts[i]);
  return os.str();
}

void validate_weight(const SignatureData& sig, const AutWeight& kappa) {
  const auto sizes = sig.factor_sizes();
  if (kappa.parts.size() != sizes.size())
    throw DimensionError("weight has " + std::to_string(kappa.parts.size()) + " factors, signature has " +
                         std::to_string(sizes.size()));
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    const auto& part = kappa.parts[t];
    if (static_cast<int>(part.size()) != sizes[t])
      throw DimensionError("factor " + std::to_string(t) + " has length " + std::to_string(part.size()) +
                           ", expected " + std::to_string(sizes[t]));
    for (std::size_t i = 0; i + 1 < part.size(); ++i)
      if (part[i] < part[i + 1]) throw DomainError("dominant", kappa.to_string() + " is not non-increasing");
  }
}

long long abs_weight(const AutWeight& kappa) {
  long long s = 0;
  for (const auto& part : kappa.parts) s = std::accumulate(part.begin(), part.end(), s);
  return s;
}

bool is_positive(const AutWeight& kappa) {
  bool nonzero = false;
  for (const auto& part : kappa.parts) {
    if (!part.empty() && part.back() < 0) return false;
    for (int x : part) nonzero = nonzero || x != 0;
  }
  return nonzero;
}

bool is_even(const AutWeight& kappa) {
  for (const auto& part : kappa.parts)
    for (int x : part)
      if (x % 2 != 0) return false;
  return true;
}

bool is_sum_symmetric(const SignatureData& sig, const AutWeight& kappa) {
  if (sig.kind != SignatureCase::A)
    throw DomainError("case_a", "sum-symmetry is only defined for unitary signatures");
  validate_weight(sig, kappa);
  for (std::size_t i = 0; i + 1 < kappa.parts.size(); i += 2) {
    const auto& a = kappa.parts[i];
    const auto& b = kappa.parts[i + 1];
    if (std::accumulate(a.begin(), a.end(), 0LL) != std::accumulate(b.begin(), b.end(), 0LL)) return false;
  }
  return true;
}

bool is_admissible_characterized(const SignatureData& sig, const AutWeight& kappa) {
  validate_weight(sig, kappa);
  if (!is_positive(kappa)) return false;
  return sig.kind == SignatureCase::C ? is_even(kappa) : is_sum_symmetric(sig, kappa);
}

VirtualCharacter v_squared(const SignatureData& sig) {
  const auto sizes = sig.factor_sizes();
  const int rank = std::accumulate(sizes.begin(), sizes.end(), 0);
  VirtualCharacter out;
  int offset = 0;
  if (sig.kind == SignatureCase::C) {
    for (int n : sizes) {
      Cocharacter w(rank, 0);
      w[offset] = 2;
      out.add(w, 1);
      offset += n;
    }
  } else {
    for (std::size_t i = 0; i + 1 < sizes.size(); i += 2) {
      Cocharacter w(rank, 0);
      w[offset] = 1;
      w[offset + sizes[i]] = 1;
      out.add(w, 1);
      offset += sizes[i] + sizes[i + 1];
    }
  }
  return out;
}

VirtualCharacter v_squared_power(const SignatureData& sig, int e, ConstituentMode mode, int bound) {
  if (e < 1) throw DomainError("e_positive", "depth must be >= 1");
  const auto sizes = sig.factor_sizes();
  const long long n = std::accumulate(sizes.begin(), sizes.end(), 0LL);
  if (e * n > bound)
    throw ResourceError("e * rank = " + std::to_string(e * n) + " exceeds the configured bound " +
                        std::to_string(bound));
  const RootDatum d = sig.datum();
  const auto base = v_squared(sig);
  return mode == ConstituentMode::Tensor ? tensor_power(d, base, e) : sym_power(d, base, e);
}

bool is_constituent_depth_e(const SignatureData& sig, const AutWeight& lambda, int e, ConstituentMode mode,
                            int bound) {
  validate_weight(sig, lambda);
  return v_squared_power(sig, e, mode, bound).coeff(lambda.flatten()) > 0;
}

long long depth(const SignatureData& sig, const AutWeight& lambda) {
  if (!is_admissible_characterized(sig, lambda))
    throw DomainError("admissible", lambda.to_string() + " is not admissible");
  return abs_weight(lambda) / 2;
}

AutWeight weight_shift(const SignatureData& sig, const AutWeight& kappa, const AutWeight& lambda, int p) {
  validate_weight(sig, kappa);
  if (!is_prime(p)) throw DomainError("p_prime", std::to_string(p) + " is not prime");
  const long long e = depth(sig, lambda);
  AutWeight out = kappa;
  for (std::size_t t = 0; t < out.parts.size(); ++t)
    for (std::size_t i = 0; i < out.parts[t].size(); ++i)
      out.parts[t][i] += lambda.parts[t][i] + static_cast<int>((p - 1) * e);
  return out;
}

std::vector<AutWeight> enumerate_weights(const SignatureData& sig, int lo, int hi, long long min_abs,
                                         long long max_abs) {
  const auto sizes = sig.factor_sizes();
  const int rank = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<AutWeight> out;
  std::vector<int> flat(rank, lo);
  while (true) {
    const AutWeight w = AutWeight::unflatten(sig, flat);
    bool dominant = true;
    for (const auto& part : w.parts)
      for (std::size_t i = 0; i + 1 < part.size(); ++i) dominant = dominant && part[i] >= part[i + 1];
    const long long a = abs_weight(w);
    if (dominant && a >= min_abs && a <= max_abs) out.push_back(w);
    int i = rank - 1;
    while (i >= 0 && flat[i] == hi) flat[i--] = lo;
    if (i < 0) break;
    ++flat[i];
  }
  return out;
}

ConstituentMode parse_mode(const std::string& s) {
  if (s == "tensor") return ConstituentMode::Tensor;
  if (s == "sym") return ConstituentMode::Sym;
  throw ParseError("mode must be \"tensor\" or \"sym\", got \"" + s + "\"");
}

nlohmann::json ReconcileReport::to_json() const {
  const auto list = [](const std::vector<AutWeight>& ws) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& w : ws) out.push_back(w.to_json());
    return out;
  };
  return {{"checked", entries.size()},
          {"sym_agrees", sym_agrees()},
          {"sym_mismatches", list(sym_mismatches)},
          {"tensor_discrepancies", list(tensor_discrepancies)}};
}

ReconcileReport reconcile_admissibility(const SignatureData& sig, int lo, int hi, long long max_abs, int bound) {
  ReconcileReport report;
  std::map<long long, std::pair<VirtualCharacter, VirtualCharacter>> powers;
  const long long min_abs = static_cast<long long>(lo) * static_cast<long long>(sig.datum().rank());
  for (const auto& w : enumerate_weights(sig, lo, hi, min_abs, max_abs)) {
    ReconcileEntry e{w, is_admissible_characterized(sig, w), false, false};
    const long long a = abs_weight(w);
    if (a > 0 && a % 2 == 0) {
      auto it = powers.find(a / 2);
      if (it == powers.end()) {
        const int depth_e = static_cast<int>(a / 2);
        it = powers
                 .emplace(a / 2, std::make_pair(v_squared_power(sig, depth_e, ConstituentMode::Sym, bound),
                                                v_squared_power(sig, depth_e, ConstituentMode::Tensor, bound)))
                 .first;
      }
      e.sym = it->second.first.coeff(w.flatten()) > 0;
      e.tensor = it->second.second.coeff(w.flatten()) > 0;
    }
    if (e.characterized != e.sym) report.sym_mismatches.push_back(w);
    if (e.characterized != e.tensor) report.tensor_discrepancies.push_back(w);
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace modtheta
