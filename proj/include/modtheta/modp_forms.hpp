#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "modtheta/galois_twist.hpp"

namespace modtheta {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Truncated q-expansion a_0 + a_1 q + ... + a_N q^N over Q or F_p, tagged
/// with a weight. Binary operations keep the smaller truncation.
class QExpansion {
 public:
  enum class Ring { Q, Fp };

  static QExpansion rational(int weight, std::vector<BigRational> coeffs);
  static QExpansion modp(int p, int weight, std::vector<long long> coeffs);

  Ring ring() const { return ring_; }
  int p() const { return p_; }
  int weight() const { return weight_; }
  int trunc() const;
  QExpansion with_weight(int k) const;

  /// Coefficient in F_p (Fp ring) or exact (Q ring). n beyond trunc throws.
  long long fp(int n) const;
  const BigRational& q(int n) const;
  const std::vector<long long>& fp_coeffs() const { return fc_; }
  const std::vector<BigRational>& q_coeffs() const { return qc_; }

  bool is_zero() const;
  /// Q -> F_p; throws when a denominator is divisible by p.
  QExpansion reduce(int p) const;
  QExpansion truncated(int n) const;

  /// Sum and difference need equal weights; the product adds them.
  QExpansion operator+(const QExpansion& o) const;
  QExpansion operator-(const QExpansion& o) const;
  QExpansion operator*(const QExpansion& o) const;
  QExpansion scaled(long long c) const;
  /// Coefficientwise equality through min(trunc, n).
  bool agrees(const QExpansion& o, int n) const;
  bool operator==(const QExpansion& o) const;

  nlohmann::json to_json() const;
  static QExpansion from_json(const nlohmann::json& doc);

 private:
  void require_compatible(const QExpansion& o, const char* op) const;

  Ring ring_ = Ring::Q;
  int p_ = 0;
  int weight_ = 0;
  std::vector<BigRational> qc_;
  std::vector<long long> fc_;
};

/// floor(k / 12) + 1.
int sturm_bound(int k);
/// dim M_k(SL_2(Z)).
int dim_mk(int k);
/// Rejects p < 5 and composite p.
void require_good_prime(int p);

QExpansion eisenstein4(int N);
QExpansion eisenstein6(int N);
QExpansion delta(int N);
QExpansion eisenstein4_mod(int p, int N);
QExpansion eisenstein6_mod(int p, int N);
QExpansion delta_mod(int p, int N);

/// E4^a E6^b Delta^c mod p, 4a + 6b + 12c = k, b in {0, 1}, c = 0..dim - 1.
/// Memoized per (k, p, N).
const std::vector<QExpansion>& basis(int k, int p, int N);

/// The constant series 1 at weight p - 1.
QExpansion hasse(int p, int N);
/// sum n a_n q^n at weight k + p + 1.
QExpansion theta(const QExpansion& f);
/// b_n = a_{n ell} + ell^{k-1} a_{n/ell}; truncation becomes trunc / ell.
QExpansion hecke_T(int ell, const QExpansion& f);

/// T_ell(theta f) = ell theta(T_ell f) through N. With theta_weight = false the
/// theta image keeps weight k, which breaks the identity in general.
bool commutation_check(const QExpansion& f, int ell, int N, bool theta_weight = true);

/// Rank over F_p of the given coefficient rows.
int fp_rank(std::vector<std::vector<long long>> rows, int p);

/// Least k' = k mod (p - 1) in [0, k] whose form space contains f through the
/// Sturm bound of k.
int filtration(const QExpansion& f);

struct ThetaCycle {
  std::vector<int> filtrations;  // of theta^i f, i = 1..iterations
  bool zero_orbit = false;
  int period = 0;                // least period of the sequence, divides p - 1
  nlohmann::json to_json() const;
};
ThetaCycle theta_cycle(const QExpansion& f, int iterations);

struct EigenTwistEntry {
  int ell = 0;
  long long a_ell = 0;             // a_ell(f)
  bool f_eigen = false;            // T_ell f = a_ell f
  bool theta_eigen = false;        // T_ell theta f = ell a_ell theta f
  long long theta_eigenvalue = 0;  // ell a_ell
  int field_degree = 0;
  std::optional<TwistReport> twist;
};

struct EigenTwistReport {
  bool theta_kills = false;
  std::vector<EigenTwistEntry> entries;
  bool ok() const;
  nlohmann::json to_json() const;
};

/// Gl(2) eigensystem at ell attached to a normalized eigenform of weight k:
/// Psi(c_0) = 1, Psi(c_(1,0)) = a_ell, Psi(c_(1,1)) = ell^{k-2}.
EigenSystem package_eigensystem(long long a_ell, int weight, int ell, FieldPtr field, FieldElem sqrt_ell);

EigenTwistReport eigen_twist_check(const QExpansion& f, const std::vector<int>& ells);

}  // namespace modtheta
