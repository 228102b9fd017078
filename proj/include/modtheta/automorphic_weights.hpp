#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "modtheta/rep_ring.hpp"
#include "modtheta/root_data.hpp"

namespace modtheta {

enum class SignatureCase { A, C };

/// One place of the reflex field. Case A uses (a, a_star), case C uses n.
struct Place {
  int a = 0;
  int a_star = 0;
  int n = 0;
};

/// Signature of H = prod_tau GL_{a_tau}. In case A every place contributes the
/// two factors GL_a (tau) and GL_{a_star} (tau*), in that order.
struct SignatureData {
  SignatureCase kind = SignatureCase::C;
  std::vector<Place> places;

  static SignatureData symplectic(std::vector<int> ns);
  static SignatureData unitary(std::vector<std::pair<int, int>> pairs);
  static SignatureData from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  /// a_tau for every factor of H, in storage order.
  std::vector<int> factor_sizes() const;
  /// Product of gl(a_tau) over the factors.
  RootDatum datum() const;
};

/// One non-increasing integer tuple per factor of H.
struct AutWeight {
  std::vector<std::vector<int>> parts;

  bool operator==(const AutWeight&) const = default;
  std::vector<int> flatten() const;
  static AutWeight unflatten(const SignatureData& sig, const std::vector<int>& flat);
  nlohmann::json to_json() const { return parts; }
  static AutWeight from_json(const nlohmann::json& doc);
  std::string to_string() const;
};

/// Throws DimensionError on a shape mismatch, DomainError("dominant") otherwise.
void validate_weight(const SignatureData& sig, const AutWeight& kappa);

long long abs_weight(const AutWeight& kappa);
bool is_positive(const AutWeight& kappa);
bool is_even(const AutWeight& kappa);
/// Case A only: the tau and tau* sums agree at every place.
bool is_sum_symmetric(const SignatureData& sig, const AutWeight& kappa);
/// Positive and even (case C), positive and sum-symmetric (case A).
bool is_admissible_characterized(const SignatureData& sig, const AutWeight& kappa);

enum class ConstituentMode { Tensor, Sym };

/// Default bound on e times the total rank of H.
inline constexpr int kDefaultConstituentBound = 32;

/// Sym^2 V_tau summed over tau (case C), V_tau (x) V_tau* summed over places (case A).
VirtualCharacter v_squared(const SignatureData& sig);
/// The e-th tensor or symmetric power of v_squared.
VirtualCharacter v_squared_power(const SignatureData& sig, int e, ConstituentMode mode,
                                 int bound = kDefaultConstituentBound);
/// lambda has positive multiplicity in v_squared_power(e, mode).
bool is_constituent_depth_e(const SignatureData& sig, const AutWeight& lambda, int e, ConstituentMode mode,
                            int bound = kDefaultConstituentBound);

/// |lambda| / 2 for admissible lambda.
long long depth(const SignatureData& sig, const AutWeight& lambda);

/// kappa + lambda + (p - 1) |lambda| / 2 in every entry.
AutWeight weight_shift(const SignatureData& sig, const AutWeight& kappa, const AutWeight& lambda, int p);

/// Dominant weights with entries in [lo, hi] and |lambda| in [min_abs, max_abs].
std::vector<AutWeight> enumerate_weights(const SignatureData& sig, int lo, int hi, long long min_abs,
                                         long long max_abs);

ConstituentMode parse_mode(const std::string& s);

/// One weight of a reconciliation sweep. The constituent flags use e = |lambda| / 2
/// and are false when |lambda| is odd or not positive.
struct ReconcileEntry {
  AutWeight weight;
  bool characterized = false;
  bool sym = false;
  bool tensor = false;
};

/// Characterized predicate against both constituent modes on a weight range.
struct ReconcileReport {
  std::vector<ReconcileEntry> entries;
  std::vector<AutWeight> sym_mismatches;         // characterized != sym
  std::vector<AutWeight> tensor_discrepancies;   // characterized != tensor

  bool sym_agrees() const { return sym_mismatches.empty(); }
  nlohmann::json to_json() const;
};

/// All dominant weights with entries in [lo, hi] and |lambda| <= max_abs.
ReconcileReport reconcile_admissibility(const SignatureData& sig, int lo, int hi, long long max_abs,
                                        int bound = kDefaultConstituentBound);

}  // namespace modtheta
