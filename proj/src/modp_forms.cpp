#include "modtheta/modp_forms.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "modtheta/errors.hpp"
#include "modtheta/finite_field.hpp"

namespace modtheta {

namespace {

long long mod(long long a, long long p) {
  const long long r = a % p;
  return r < 0 ? r + p : r;
}

long long pow_mod(long long b, long long e, long long p) {
  b = mod(b, p);
  if (e < 0) {
    if (b == 0) throw DomainError("nonzero", "negative power of 0 mod p");
    e = mod(e, p - 1);
  }
  long long r = 1 % p;
  while (e > 0) {
    if (e & 1) r = static_cast<long long>(static_cast<__int128>(r) * b % p);
    b = static_cast<long long>(static_cast<__int128>(b) * b % p);
    e >>= 1;
  }
  return r;
}

long long inv_mod(long long a, long long p) {
  if (mod(a, p) == 0) throw DomainError("invertible", "denominator divisible by p = " + std::to_string(p));
  return pow_mod(a, p - 2, p);
}

long long bigint_mod(const BigInt& n, long long p) {
  BigInt r = n % p;
  if (r < 0) r += p;
  return r.convert_to<long long>();
}

BigRational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return BigRational(BigInt(s));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in \"" + s + "\"");
    return BigRational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw ParseError("not a rational number: \"" + s + "\"");
  }
}

// sigma_j(n) for n = 0..N with sigma(0) = 0.
std::vector<BigInt> sigma_table(int j, int N) {
  std::vector<BigInt> out(N + 1, 0);
  for (int d = 1; d <= N; ++d) {
    BigInt dj = boost::multiprecision::pow(BigInt(d), j);
    for (int m = d; m <= N; m += d) out[m] += dj;
  }
  return out;
}

std::vector<long long> sigma_table_mod(int j, int N, long long p) {
  std::vector<long long> out(N + 1, 0);
  for (int d = 1; d <= N; ++d) {
    const long long dj = pow_mod(d, j, p);
    for (int m = d; m <= N; m += d) out[m] = (out[m] + dj) % p;
  }
  return out;
}

std::vector<BigInt> int_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<BigInt> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<BigInt> eisenstein_int(int j, long long c, int N) {
  auto s = sigma_table(j, N);
  s[0] = 1;
  for (int n = 1; n <= N; ++n) s[n] *= c;
  return s;
}

QExpansion from_ints(int weight, const std::vector<BigInt>& v) {
  std::vector<BigRational> c(v.begin(), v.end());
  return QExpansion::rational(weight, std::move(c));
}

void require_trunc(int N) {
  if (N < 0) throw DomainError("trunc_nonnegative", "truncation must be >= 0");
}

}  // namespace

QExpansion QExpansion::rational(int weight, std::vector<BigRational> coeffs) {
  if (coeffs.empty()) throw DomainError("trunc_nonnegative", "a q-expansion needs at least a_0");
  QExpansion f;
  f.ring_ = Ring::Q;
  f.weight_ = weight;
  f.qc_ = std::move(coeffs);
  return f;
}

QExpansion QExpansion::modp(int p, int weight, std::vector<long long> coeffs) {
  if (!is_prime(p)) throw DomainError("p_prime", std::to_string(p) + " is not prime");
  if (coeffs.empty()) throw DomainError("trunc_nonnegative", "a q-expansion needs at least a_0");
  QExpansion f;
  f.ring_ = Ring::Fp;
  f.p_ = p;
  f.weight_ = weight;
  for (auto& c : coeffs) c = mod(c, p);
  f.fc_ = std::move(coeffs);
  return f;
}

int QExpansion::trunc() const {
  return static_cast<int>(ring_ == Ring::Q ? qc_.size() : fc_.size()) - 1;
}

QExpansion QExpansion::with_weight(int k) const {
  QExpansion f = *this;
  f.weight_ = k;
  return f;
}

long long QExpansion::fp(int n) const {
  if (ring_ != Ring::Fp) throw DomainError("ring_fp", "series is over Q");
  if (n < 0 || n > trunc()) throw DomainError("trunc", "coefficient " + std::to_string(n) + " beyond truncation " + std::to_string(trunc()));
  return fc_[n];
}

const BigRational& QExpansion::q(int n) const {
  if (ring_ != Ring::Q) throw DomainError("ring_q", "series is over F_p");
  if (n < 0 || n > trunc()) throw DomainError("trunc", "coefficient " + std::to_string(n) + " beyond truncation " + std::to_string(trunc()));
  return qc_[n];
}

bool QExpansion::is_zero() const {
  if (ring_ == Ring::Fp) {
    for (auto c : fc_)
      if (c != 0) return false;
    return true;
  }
  for (const auto& c : qc_)
    if (c != 0) return false;
  return true;
}

QExpansion QExpansion::reduce(int p) const {
  if (ring_ == Ring::Fp) {
    if (p != p_) throw DomainError("same_prime", "series is already reduced mod " + std::to_string(p_));
    return *this;
  }
  require_good_prime(p);
  std::vector<long long> c;
  c.reserve(qc_.size());
  for (const auto& x : qc_)
    c.push_back(bigint_mod(numerator(x), p) * inv_mod(bigint_mod(denominator(x), p), p) % p);
  return modp(p, weight_, std::move(c));
}

QExpansion QExpansion::truncated(int n) const {
  if (n < 0 || n > trunc()) throw DomainError("trunc", "cannot extend a truncated series to " + std::to_string(n));
  QExpansion f = *this;
  if (ring_ == Ring::Q)
    f.qc_.resize(n + 1);
  else
    f.fc_.resize(n + 1);
  return f;
}

void QExpansion::require_compatible(const QExpansion& o, const char* op) const {
  if (ring_ != o.ring_ || p_ != o.p_)
    throw DomainError("same_ring", std::string(op) + " of series over different rings");
}

QExpansion QExpansion::operator+(const QExpansion& o) const {
  require_compatible(o, "sum");
  if (weight_ != o.weight_) throw DomainError("same_weight", "sum of series of weights " + std::to_string(weight_) + " and " + std::to_string(o.weight_));
  QExpansion f = truncated(std::min(trunc(), o.trunc()));
  for (int n = 0; n <= f.trunc(); ++n) {
    if (ring_ == Ring::Q)
      f.qc_[n] += o.qc_[n];
    else
      f.fc_[n] = (f.fc_[n] + o.fc_[n]) % p_;
  }
  return f;
}

QExpansion QExpansion::operator-(const QExpansion& o) const { return *this + o.scaled(-1); }

QExpansion QExpansion::operator*(const QExpansion& o) const {
  require_compatible(o, "product");
  const int n = std::min(trunc(), o.trunc());
  QExpansion f = truncated(n);
  f.weight_ = weight_ + o.weight_;
  if (ring_ == Ring::Q) {
    std::vector<BigRational> c(n + 1, 0);
    for (int i = 0; i <= n; ++i)
      if (qc_[i] != 0)
        for (int j = 0; i + j <= n; ++j) c[i + j] += qc_[i] * o.qc_[j];
    f.qc_ = std::move(c);
  } else {
    std::vector<long long> c(n + 1, 0);
    for (int i = 0; i <= n; ++i)
      if (fc_[i] != 0)
        for (int j = 0; i + j <= n; ++j) c[i + j] = (c[i + j] + fc_[i] * o.fc_[j]) % p_;
    f.fc_ = std::move(c);
  }
  return f;
}

QExpansion QExpansion::scaled(long long c) const {
  QExpansion f = *this;
  if (ring_ == Ring::Q) {
    for (auto& x : f.qc_) x *= c;
  } else {
    const long long cm = mod(c, p_);
    for (auto& x : f.fc_) x = x * cm % p_;
  }
  return f;
}

bool QExpansion::agrees(const QExpansion& o, int n) const {
  require_compatible(o, "comparison");
  if (n > trunc() || n > o.trunc())
    throw DomainError("trunc", "comparison through " + std::to_string(n) + " exceeds a truncation");
  for (int i = 0; i <= n; ++i) {
    if (ring_ == Ring::Q ? qc_[i] != o.qc_[i] : fc_[i] != o.fc_[i]) return false;
  }
  return true;
}

bool QExpansion::operator==(const QExpansion& o) const {
  return ring_ == o.ring_ && p_ == o.p_ && weight_ == o.weight_ && qc_ == o.qc_ && fc_ == o.fc_;
}

nlohmann::json QExpansion::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  if (ring_ == Ring::Q) {
    for (const auto& c : qc_) coeffs.push_back(c.str());
  } else {
    for (auto c : fc_) coeffs.push_back(std::to_string(c));
  }
  nlohmann::json out{{"ring", ring_ == Ring::Q ? "Q" : "Fp"}, {"weight", weight_}, {"coeffs", coeffs}, {"trunc", trunc()}};
  if (ring_ == Ring::Fp) out["p"] = p_;
  return out;
}

QExpansion QExpansion::from_json(const nlohmann::json& doc) {
  try {
    const std::string ring = doc.at("ring").get<std::string>();
    const int weight = doc.at("weight").get<int>();
    std::vector<std::string> raw;
    for (const auto& c : doc.at("coeffs")) raw.push_back(c.is_string() ? c.get<std::string>() : c.dump());
    if (doc.contains("trunc") && doc.at("trunc").get<int>() + 1 != static_cast<int>(raw.size()))
      throw ParseError("trunc does not match the number of coefficients");
    if (ring == "Q") {
      std::vector<BigRational> c;
      for (const auto& s : raw) c.push_back(parse_rational(s));
      return rational(weight, std::move(c));
    }
    if (ring == "Fp") {
      const int p = doc.at("p").get<int>();
      std::vector<long long> c;
      for (const auto& s : raw) {
        const BigRational r = parse_rational(s);
        c.push_back(bigint_mod(numerator(r), p) * inv_mod(bigint_mod(denominator(r), p), p) % p);
      }
      return modp(p, weight, std::move(c));
    }
    throw ParseError("ring must be \"Q\" or \"Fp\"");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("q-expansion: ") + e.what());
  }
}

int sturm_bound(int k) { return k / 12 + 1; }

int dim_mk(int k) {
  if (k < 0 || k % 2 != 0) return 0;
  if (k % 12 == 2) return k / 12;
  return k / 12 + 1;
}

void require_good_prime(int p) {
  if (!is_prime(p)) throw DomainError("p_prime", std::to_string(p) + " is not prime");
  if (p < 5) throw DomainError("p_ge_5", "level-one bases need p >= 5, got " + std::to_string(p));
}

QExpansion eisenstein4(int N) {
  require_trunc(N);
  return from_ints(4, eisenstein_int(3, 240, N));
}

QExpansion eisenstein6(int N) {
  require_trunc(N);
  return from_ints(6, eisenstein_int(5, -504, N));
}

QExpansion delta(int N) {
  require_trunc(N);
  const auto e4 = eisenstein_int(3, 240, N);
  const auto e6 = eisenstein_int(5, -504, N);
  const auto cube = int_mul(int_mul(e4, e4), e4);
  const auto square = int_mul(e6, e6);
  std::vector<BigInt> d(N + 1);
  for (int n = 0; n <= N; ++n) {
    d[n] = cube[n] - square[n];
    if (d[n] % 1728 != 0) throw std::logic_error("E4^3 - E6^2 is not divisible by 1728");
    d[n] /= 1728;
  }
  return from_ints(12, d);
}

QExpansion eisenstein4_mod(int p, int N) {
  require_good_prime(p);
  require_trunc(N);
  auto s = sigma_table_mod(3, N, p);
  s[0] = 1;
  for (int n = 1; n <= N; ++n) s[n] = s[n] * 240 % p;
  return QExpansion::modp(p, 4, s);
}

QExpansion eisenstein6_mod(int p, int N) {
  require_good_prime(p);
  require_trunc(N);
  auto s = sigma_table_mod(5, N, p);
  s[0] = 1;
  for (int n = 1; n <= N; ++n) s[n] = mod(s[n] * -504, p);
  return QExpansion::modp(p, 6, s);
}

QExpansion delta_mod(int p, int N) {
  const auto e4 = eisenstein4_mod(p, N);
  const auto e6 = eisenstein6_mod(p, N);
  return (e4 * e4 * e4 - (e6 * e6).with_weight(12)).scaled(inv_mod(1728, p));
}

const std::vector<QExpansion>& basis(int k, int p, int N) {
  require_good_prime(p);
  require_trunc(N);
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<QExpansion>> cache;
  const auto key = std::make_tuple(k, p, N);
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<QExpansion> out;
  const int d = dim_mk(k);
  if (d > 0) {
    const auto e4 = eisenstein4_mod(p, N);
    const auto e6 = eisenstein6_mod(p, N);
    const auto dl = delta_mod(p, N);
    QExpansion delta_power = QExpansion::modp(p, 0, std::vector<long long>(N + 1, 0));
    std::vector<long long> one(N + 1, 0);
    one[0] = 1;
    const QExpansion unit = QExpansion::modp(p, 0, one);
    delta_power = unit;
    for (int c = 0; c < d; ++c) {
      const int rest = k - 12 * c;
      const int b = rest % 4 == 2 ? 1 : 0;
      const int a = (rest - 6 * b) / 4;
      QExpansion f = delta_power;
      for (int i = 0; i < a; ++i) f = f * e4;
      if (b == 1) f = f * e6;
      out.push_back(f);
      delta_power = delta_power * dl;
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

QExpansion hasse(int p, int N) {
  require_good_prime(p);
  require_trunc(N);
  std::vector<long long> c(N + 1, 0);
  c[0] = 1;
  return QExpansion::modp(p, p - 1, c);
}

QExpansion theta(const QExpansion& f) {
  if (f.ring() != QExpansion::Ring::Fp)
    throw DomainError("ring_fp", "theta acts on q-expansions mod p");
  std::vector<long long> c(f.trunc() + 1);
  for (int n = 0; n <= f.trunc(); ++n) c[n] = static_cast<long long>(n % f.p()) * f.fp(n) % f.p();
  return QExpansion::modp(f.p(), f.weight() + f.p() + 1, c);
}

QExpansion hecke_T(int ell, const QExpansion& f) {
  if (!is_prime(ell)) throw DomainError("ell_prime", std::to_string(ell) + " is not prime");
  const int target = f.trunc() / ell;
  const int k = f.weight();
  if (f.ring() == QExpansion::Ring::Fp) {
    const int p = f.p();
    if (ell == p) throw DomainError("ell_not_p", "T_ell at ell = p is a bad place");
    const long long scale = pow_mod(ell, k - 1, p);
    std::vector<long long> c(target + 1);
    for (int n = 0; n <= target; ++n) {
      long long b = f.fp(n * ell);
      if (n % ell == 0) b = (b + scale * f.fp(n / ell)) % p;
      c[n] = b;
    }
    return QExpansion::modp(p, k, c);
  }
  BigRational scale = k - 1 >= 0 ? BigRational(boost::multiprecision::pow(BigInt(ell), k - 1))
                                 : BigRational(BigInt(1), boost::multiprecision::pow(BigInt(ell), 1 - k));
  std::vector<BigRational> c(target + 1);
  for (int n = 0; n <= target; ++n) {
    c[n] = f.q(n * ell);
    if (n % ell == 0) c[n] += scale * f.q(n / ell);
  }
  return QExpansion::rational(k, c);
}

bool commutation_check(const QExpansion& f, int ell, int N, bool theta_weight) {
  QExpansion tf = theta(f);
  if (!theta_weight) tf = tf.with_weight(f.weight());
  const QExpansion lhs = hecke_T(ell, tf);
  const QExpansion rhs = theta(hecke_T(ell, f)).scaled(ell);
  if (lhs.trunc() < N || rhs.trunc() < N)
    throw DomainError("trunc", "need truncation >= " + std::to_string(ell) + " * " + std::to_string(N));
  return lhs.agrees(rhs, N);
}

int fp_rank(std::vector<std::vector<long long>> rows, int p) {
  int rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] % p == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const long long inv = inv_mod(rows[rank][col], p);
    for (auto& x : rows[rank]) x = mod(x, p) * inv % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || rows[r][col] % p == 0) continue;
      const long long factor = mod(rows[r][col], p);
      for (std::size_t c = 0; c < cols; ++c) rows[r][c] = mod(rows[r][c] - factor * rows[rank][c], p);
    }
    ++rank;
  }
  return rank;
}

int filtration(const QExpansion& f) {
  if (f.ring() != QExpansion::Ring::Fp) throw DomainError("ring_fp", "filtration is defined mod p");
  require_good_prime(f.p());
  if (f.is_zero()) throw DomainError("nonzero", "the zero series has no filtration");
  const int k = f.weight();
  if (k < 0) throw DomainError("weight_nonnegative", "weight must be >= 0");
  const int B = sturm_bound(k);
  if (f.trunc() < B)
    throw DomainError("trunc_sturm", "truncation " + std::to_string(f.trunc()) + " is below the Sturm bound " + std::to_string(B));
  const int p = f.p();
  const std::vector<long long> target(f.fp_coeffs().begin(), f.fp_coeffs().begin() + B + 1);
  for (int kp = k % (p - 1); kp <= k; kp += p - 1) {
    std::vector<std::vector<long long>> rows;
    for (const auto& g : basis(kp, p, B)) rows.push_back(g.fp_coeffs());
    const int r = fp_rank(rows, p);
    rows.push_back(target);
    if (fp_rank(rows, p) == r) return kp;
  }
  throw DomainError("consistent", "series is not the reduction of a weight-" + std::to_string(k) + " form");
}

nlohmann::json ThetaCycle::to_json() const {
  return {{"filtrations", filtrations}, {"zero_orbit", zero_orbit}, {"period", period}};
}

ThetaCycle theta_cycle(const QExpansion& f, int iterations) {
  if (f.ring() != QExpansion::Ring::Fp) throw DomainError("ring_fp", "theta cycles are defined mod p");
  const int p = f.p();
  if (iterations < p) throw DomainError("iterations_ge_p", "need at least p = " + std::to_string(p) + " iterations");
  ThetaCycle out;
  std::vector<QExpansion> iterates;
  QExpansion g = f;
  for (int i = 1; i <= iterations; ++i) {
    g = theta(g);
    if (g.is_zero()) {
      out.zero_orbit = true;
      out.filtrations.clear();
      return out;
    }
    iterates.push_back(g);
    out.filtrations.push_back(filtration(g));
  }
  if (!iterates[p - 1].agrees(iterates[0], iterates[0].trunc()))
    throw std::logic_error("theta^p differs from theta");
  const int n = static_cast<int>(out.filtrations.size());
  for (int d = 1; d <= p - 1; ++d) {
    if ((p - 1) % d != 0) continue;
    bool periodic = true;
    for (int i = 0; i + d < n && periodic; ++i) periodic = out.filtrations[i] == out.filtrations[i + d];
    if (periodic) {
      out.period = d;
      break;
    }
  }
  if (out.period == 0) throw std::logic_error("filtrations of theta iterates are not (p - 1)-periodic");
  return out;
}

bool EigenTwistReport::ok() const {
  if (theta_kills) return false;
  for (const auto& e : entries)
    if (!e.f_eigen || !e.theta_eigen || !e.twist || !e.twist->ok()) return false;
  return true;
}

nlohmann::json EigenTwistReport::to_json() const {
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries) {
    es.push_back({{"ell", e.ell},
                  {"a_ell", e.a_ell},
                  {"f_eigen", e.f_eigen},
                  {"theta_eigen", e.theta_eigen},
                  {"theta_eigenvalue", e.theta_eigenvalue},
                  {"field_degree", e.field_degree},
                  {"twist", e.twist ? e.twist->to_json() : nlohmann::json(nullptr)}});
  }
  return {{"theta_kills", theta_kills}, {"entries", es}, {"ok", ok()}};
}

EigenSystem package_eigensystem(long long a_ell, int weight, int ell, FieldPtr field, FieldElem sqrt_ell) {
  const auto gl2 = make_datum(RootDatum::gl(2));
  const auto& F = *field;
  check_specialization(F, ell, sqrt_ell);
  EigenSystem psi{gl2, field, ell, sqrt_ell, {}};
  psi.values[{0, 0}] = 1;
  psi.values[{1, 0}] = F.from_int(a_ell);
  psi.values[{1, 1}] = F.pow(F.from_int(ell), weight - 2);
  return psi;
}

EigenTwistReport eigen_twist_check(const QExpansion& f, const std::vector<int>& ells) {
  if (f.ring() != QExpansion::Ring::Fp) throw DomainError("ring_fp", "eigen_twist_check works mod p");
  const int p = f.p();
  EigenTwistReport report;
  const QExpansion tf = theta(f);
  if (tf.is_zero()) {
    report.theta_kills = true;
    return report;
  }
  if (f.trunc() < 1 || f.fp(1) != 1) throw DomainError("normalized", "eigenform must have a_1 = 1");
  for (int ell : ells) {
    if (!is_prime(ell)) throw DomainError("ell_prime", std::to_string(ell) + " is not prime");
    if (ell == p) throw DomainError("ell_not_p", "ell must differ from p");
    if (f.trunc() / ell < sturm_bound(tf.weight()))
      throw DomainError("trunc_sturm", "truncation / ell is below the Sturm bound of theta f");
    EigenTwistEntry e;
    e.ell = ell;
    e.a_ell = f.fp(ell);
    const QExpansion tfl = hecke_T(ell, f);
    e.f_eigen = tfl.agrees(f.scaled(e.a_ell), tfl.trunc());
    const QExpansion ttl = hecke_T(ell, tf);
    e.theta_eigenvalue = static_cast<long long>(ell) * e.a_ell % p;
    e.theta_eigen = ttl.agrees(tf.scaled(e.theta_eigenvalue), ttl.trunc());

    for (int degree : {1, 2, 4}) {
      const auto F = make_field(p, degree);
      const auto root = F->sqrt(F->from_int(ell));
      if (!root) continue;
      const auto psi1 = package_eigensystem(e.a_ell, f.weight(), ell, F, *root);
      try {
        point_from_eigensystem(psi1);
      } catch (const ExtensionRequired&) {
        continue;
      }
      const auto psi2 = package_eigensystem(e.theta_eigenvalue, tf.weight(), ell, F, *root);
      e.field_degree = degree;
      e.twist = check_twist_theorem(psi1, psi2, psi1.datum->character("det"));
      break;
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace modtheta
