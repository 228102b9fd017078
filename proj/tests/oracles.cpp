#include "oracles.hpp"

#include <limits>
#include <stdexcept>

namespace modtheta::oracle {

namespace {

void bump(Poly& p, const Cocharacter& w, long long c) {
  auto& slot = p[w];
  slot += c;
  if (slot == 0) p.erase(w);
}

}  // namespace

Poly weyl_character(const RootDatum& d, const Cocharacter& lambda) {
  const int n = d.rank();
  const Cocharacter& two_rho = d.two_rho_dual();
  Cocharacter shifted(n);
  for (int i = 0; i < n; ++i) shifted[i] = 2 * lambda[i] + two_rho[i];

  Poly numerator;
  for (const auto& w : d.weyl_group().elements) {
    Cocharacter img = w.apply(shifted);
    for (int i = 0; i < n; ++i) {
      const int twice = img[i] - two_rho[i];
      if (twice % 2 != 0) throw std::logic_error("w(lambda+rho)-rho is not integral");
      img[i] = twice / 2;
    }
    bump(numerator, img, w.sign());
  }

  // Divide by (1 - x^{-beta}) for each positive coroot, always eliminating the
  // term of largest height first.
  Poly current = numerator;
  for (const auto& beta : d.positive_coroots()) {
    Poly quotient;
    Poly rest = current;
    long long guard = 0;
    while (!rest.empty()) {
      if (++guard > 10'000'000) throw std::logic_error("Weyl denominator division did not terminate");
      auto top = rest.begin();
      for (auto it = rest.begin(); it != rest.end(); ++it) {
        if (d.rho_pairing_doubled(it->first) > d.rho_pairing_doubled(top->first)) top = it;
      }
      const Cocharacter mu = top->first;
      const long long c = top->second;
      bump(quotient, mu, c);
      bump(rest, mu, -c);
      Cocharacter lower = mu;
      for (int i = 0; i < n; ++i) lower[i] -= beta[i];
      bump(rest, lower, c);
    }
    current = std::move(quotient);
  }
  return current;
}

std::map<int, long long> kostant_partitions(const RootDatum& d, const Cocharacter& beta) {
  std::map<int, long long> out;
  const auto& roots = d.positive_coroots();
  Cocharacter target = beta;
  std::vector<long long> heights;
  for (const auto& r : roots) heights.push_back(d.rho_pairing_doubled(r));

  auto recurse = [&](auto&& self, std::size_t idx, int parts) -> void {
    if (std::all_of(target.begin(), target.end(), [](int x) { return x == 0; })) {
      out[parts] += 1;
      return;
    }
    if (idx == roots.size()) return;
    const long long h = d.rho_pairing_doubled(target);
    for (int m = 0; static_cast<long long>(m) * heights[idx] <= h; ++m) {
      for (std::size_t i = 0; i < target.size(); ++i) target[i] -= m * roots[idx][i];
      self(self, idx + 1, parts + m);
      for (std::size_t i = 0; i < target.size(); ++i) target[i] += m * roots[idx][i];
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

namespace {

constexpr long long kInfinity = std::numeric_limits<long long>::max() / 4;

long long valuation(long long x, long long p) {
  if (x == 0) return kInfinity;
  long long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

long long power(long long p, long long e) {
  long long r = 1;
  for (long long i = 0; i < e; ++i) r *= p;
  return r;
}

// Cosets xK inside K diag(p^a, p^b) K, as (i, j, y) with x = [[p^i, y], [0, p^j]].
struct Coset {
  long long i, j, y;
};

std::vector<Coset> cosets(long long p, const Cocharacter& lambda) {
  const long long total = lambda[0] + lambda[1];
  std::vector<Coset> out;
  for (long long i = 0; i <= total; ++i) {
    const long long j = total - i;
    for (long long y = 0; y < power(p, i); ++y) {
      const long long vmin = std::min({i, j, valuation(y, p)});
      if (total - vmin == lambda[0] && vmin == lambda[1]) out.push_back({i, j, y});
    }
  }
  return out;
}

}  // namespace

std::map<Cocharacter, long long> gl2_convolution(long long p, const Cocharacter& lambda,
                                                 const Cocharacter& mu) {
  if (lambda.size() != 2 || mu.size() != 2 || lambda[1] < 0 || mu[1] < 0) {
    throw std::invalid_argument("gl2_convolution expects dominant weights with entries >= 0");
  }
  const auto left = cosets(p, lambda);
  const int total = lambda[0] + lambda[1] + mu[0] + mu[1];
  std::map<Cocharacter, long long> out;
  for (int nu2 = 0; 2 * nu2 <= total; ++nu2) {
    const int nu1 = total - nu2;
    long long count = 0;
    for (const auto& x : left) {
      // x^{-1} diag(p^nu1, p^nu2) = [[p^{nu1-i}, -y p^{nu2-i-j}], [0, p^{nu2-j}]]
      const long long vy = valuation(x.y, p);
      const long long off = vy == kInfinity ? kInfinity : vy + nu2 - x.i - x.j;
      const long long vmin = std::min({static_cast<long long>(nu1) - x.i, off,
                                       static_cast<long long>(nu2) - x.j});
      const long long det = nu1 + nu2 - x.i - x.j;
      if (det - vmin == mu[0] && vmin == mu[1]) ++count;
    }
    if (count != 0) out[{nu1, nu2}] = count;
  }
  return out;
}


std::vector<long long> tau_product(int N) {
  // prod (1 - q^n)^24 through q^(N-1), then shift by one.
  std::vector<__int128> series(N, 0);
  if (N > 0) series[0] = 1;
  for (int n = 1; n < N; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int i = N - 1; i >= n; --i) series[i] -= series[i - n];
  std::vector<long long> tau(N + 1, 0);
  for (int i = 0; i < N; ++i) tau[i + 1] = static_cast<long long>(series[i]);
  return tau;
}

}  // namespace modtheta::oracle
