#include <fstream>
#include <random>

#include "doctest.h"
#include "modtheta/errors.hpp"
#include "modtheta/modp_forms.hpp"
#include "oracles.hpp"

using namespace modtheta;

namespace {

QExpansion monomial_q(int p, int weight, int N) {
  std::vector<long long> c(N + 1, 0);
  c[1] = 1;
  return QExpansion::modp(p, weight, c);
}

}  // namespace

TEST_CASE("Eisenstein series and Delta over Q") {
  const auto d = delta(30);
  const auto tau = oracle::tau_product(30);
  CHECK(d.q(0) == BigRational(0));
  CHECK(d.q(1) == BigRational(1));
  CHECK(d.q(2) == BigRational(-24));
  for (int n = 0; n <= 30; ++n) CHECK(d.q(n) == BigRational(tau[n]));
  CHECK(eisenstein4(3).q(1) == BigRational(240));
  CHECK(eisenstein4(3).q(2) == BigRational(2160));
  CHECK(eisenstein6(3).q(1) == BigRational(-504));
  CHECK(eisenstein6(3).q(2) == BigRational(-16632));
  CHECK(d.weight() == 12);
}

TEST_CASE("reductions mod p") {
  const auto e4 = eisenstein4_mod(5, 40);
  CHECK(e4.fp(0) == 1);
  for (int n = 1; n <= 40; ++n) CHECK(e4.fp(n) == 0);
  CHECK(eisenstein4(40).reduce(5) == e4);
  const auto tau = oracle::tau_product(60);
  for (int p : {5, 7, 11, 13}) {
    const auto dm = delta_mod(p, 60);
    for (int n = 0; n <= 60; ++n) CHECK(dm.fp(n) == ((tau[n] % p) + p) % p);
    CHECK(eisenstein6(60).reduce(p) == eisenstein6_mod(p, 60));
  }
  CHECK_THROWS_AS(delta_mod(3, 10), DomainError);
  CHECK_THROWS_AS(basis(12, 2, 10), DomainError);
}

TEST_CASE("bases have the right dimension") {
  CHECK(dim_mk(0) == 1);
  CHECK(dim_mk(2) == 0);
  CHECK(dim_mk(12) == 2);
  CHECK(dim_mk(14) == 1);
  CHECK(dim_mk(24) == 3);
  CHECK(dim_mk(26) == 2);
  CHECK(dim_mk(7) == 0);
  const auto& b12 = basis(12, 7, 20);
  REQUIRE(b12.size() == 2);
  const auto e4 = eisenstein4_mod(7, 20);
  CHECK(b12[0] == e4 * e4 * e4);
  CHECK(b12[1] == delta_mod(7, 20));
  for (int p : {5, 7, 11, 13})
    for (int k = 0; k <= 60; ++k) {
      const auto& b = basis(k, p, sturm_bound(k));
      CHECK(static_cast<int>(b.size()) == dim_mk(k));
      std::vector<std::vector<long long>> rows;
      for (const auto& f : b) {
        CHECK(f.weight() == k);
        rows.push_back(f.fp_coeffs());
      }
      CHECK(fp_rank(rows, p) == dim_mk(k));
    }
}

TEST_CASE("hasse and theta") {
  for (int p : {5, 7}) {
    const auto h = hasse(p, 20);
    CHECK(h.weight() == p - 1);
    CHECK(h.fp(0) == 1);
    CHECK(theta(h).is_zero());
  }
  const auto q = monomial_q(5, 12, 10);
  CHECK(theta(q).fp_coeffs() == q.fp_coeffs());
  CHECK(theta(q).weight() == 18);
  const auto td = theta(delta_mod(5, 20));
  CHECK(td.fp(2) == 2);
  for (int n = 0; n <= 20; ++n) CHECK(td.fp(n) == ((n * oracle::tau_product(20)[n]) % 5 + 5) % 5);
  CHECK_THROWS_AS(theta(delta(5)), DomainError);
}

TEST_CASE("theta satisfies the Leibniz rule") {
  std::mt19937_64 rng(31337);
  for (int p : {5, 7, 11, 13}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int k1 = 4 + 2 * static_cast<int>(rng() % 6), k2 = 4 + 2 * static_cast<int>(rng() % 6);
      const auto& b1 = basis(k1, p, 30);
      const auto& b2 = basis(k2, p, 30);
      const auto& f = b1[rng() % b1.size()];
      const auto& g = b2[rng() % b2.size()];
      CHECK(theta(f * g) == theta(f) * g + f * theta(g));
    }
  }
}

TEST_CASE("Hecke operators") {
  const auto tau = oracle::tau_product(70);
  for (int ell : {2, 3, 5, 7}) {
    const auto d = delta(10 * ell);
    CHECK(hecke_T(ell, d) == d.truncated(10).scaled(tau[ell]));
  }
  const auto d5 = delta_mod(5, 60);
  const auto t2 = hecke_T(2, d5);
  CHECK(t2.trunc() == 30);
  CHECK(t2 == d5.truncated(30));
  const auto t3 = hecke_T(3, delta_mod(7, 60));
  CHECK(t3.is_zero());
  CHECK(hecke_T(3, QExpansion::modp(7, 12, std::vector<long long>(30, 0))).is_zero());
  CHECK_THROWS_AS(hecke_T(5, d5), DomainError);
  CHECK_THROWS_AS(hecke_T(4, d5), DomainError);
  // E4 is an eigenform with eigenvalue sigma_3(ell).
  const auto e4 = eisenstein4_mod(7, 60);
  CHECK(hecke_T(2, e4) == e4.truncated(30).scaled(9));
}

TEST_CASE("T_ell theta = ell theta T_ell") {
  CHECK(commutation_check(delta_mod(5, 100), 2, 50));
  CHECK(commutation_check(eisenstein6_mod(5, 150), 3, 50));
  bool guard_fails = false;
  for (int p : {5, 7, 11, 13})
    for (int k = 4; k <= 24; k += 2)
      for (const auto& f : basis(k, p, 100)) {
        for (int ell : {2, 3}) {
          if (ell == p) continue;
          CHECK(commutation_check(f, ell, 30));
          guard_fails = guard_fails || !commutation_check(f, ell, 30, false);
        }
      }
  CHECK(guard_fails);
  CHECK_FALSE(commutation_check(delta_mod(5, 100), 2, 50, false));
}

TEST_CASE("filtration") {
  for (int p : {5, 7, 11}) CHECK(filtration(hasse(p, 10)) == 0);
  CHECK(filtration(delta_mod(5, 20)) == 12);
  const int w = filtration(theta(delta_mod(5, 20)));
  CHECK(w == 18);
  CHECK_THROWS_AS(filtration(QExpansion::modp(5, 12, std::vector<long long>(5, 0))), DomainError);
  CHECK_THROWS_AS(filtration(delta_mod(5, 1)), DomainError);
  // q alone is not a weight-4 form mod 7.
  CHECK_THROWS_AS(filtration(monomial_q(7, 4, 10)), DomainError);
}

TEST_CASE("filtration properties") {
  for (int p : {5, 7, 11, 13}) {
    int count = 0;
    for (int k = 4; k <= 36 && count < 20; k += 2)
      for (const auto& f : basis(k, p, 40)) {
        const int w = filtration(f);
        CHECK(w <= k);
        CHECK((k - w) % (p - 1) == 0);
        CHECK(filtration(f * hasse(p, 40)) == w);
        const auto tf = theta(f);
        if (tf.is_zero()) continue;
        const int wt = filtration(tf);
        CHECK(wt <= w + p + 1);
        // Katz: the bound is attained exactly when p does not divide w(f).
        CHECK((wt == w + p + 1) == (w % p != 0));
        ++count;
      }
  }
}

TEST_CASE("theta cycles") {
  const auto d5 = delta_mod(5, 60);
  QExpansion g = d5;
  for (int i = 0; i < 5; ++i) g = theta(g);
  CHECK(g.fp_coeffs() == theta(d5).fp_coeffs());
  const auto cycle = theta_cycle(d5, 6);
  CHECK_FALSE(cycle.zero_orbit);
  REQUIRE(cycle.filtrations.size() == 6);
  CHECK(cycle.filtrations[0] == cycle.filtrations[4]);
  CHECK(cycle.filtrations[1] == cycle.filtrations[5]);
  CHECK(4 % cycle.period == 0);
  const auto constant = theta_cycle(hasse(5, 10), 5);
  CHECK(constant.zero_orbit);
  CHECK(constant.filtrations.empty());
  CHECK_THROWS_AS(theta_cycle(d5, 3), DomainError);
}

TEST_CASE("theta cycle of Delta mod 5 matches the fixture") {
  std::ifstream in(std::string(MODTHETA_FIXTURE_DIR) + "/theta_cycle_delta5.json");
  REQUIRE(in);
  const auto fixture = nlohmann::json::parse(in);
  const auto d5 = delta_mod(5, fixture.at("N").get<int>());
  QExpansion g = d5;
  for (int i = 0; i < 4; ++i) g = theta(g);
  CHECK(g.fp_coeffs() == d5.fp_coeffs());
  const auto cycle = theta_cycle(d5, fixture.at("iterations").get<int>());
  CHECK(cycle.filtrations == fixture.at("filtrations").get<std::vector<int>>());
  CHECK(cycle.period == fixture.at("period").get<int>());
}

TEST_CASE("eigen_twist_check") {
  const auto d5 = delta_mod(5, 100);
  const auto report = eigen_twist_check(d5, {2, 3, 7});
  CHECK(report.ok());
  REQUIRE(report.entries.size() == 3);
  CHECK(report.entries[0].theta_eigenvalue == 2);
  for (const auto& e : report.entries) {
    CHECK(e.f_eigen);
    CHECK(e.theta_eigen);
    REQUIRE(e.twist.has_value());
    CHECK(e.twist->param_route == "orbit");
  }
  // A series in q^5 is killed by theta.
  std::vector<long long> c(51, 0);
  c[5] = 1;
  c[10] = 3;
  const auto killed = eigen_twist_check(QExpansion::modp(5, 12, c), {2});
  CHECK(killed.theta_kills);
  CHECK_FALSE(killed.ok());
  CHECK(killed.entries.empty());
  c[1] = 2;
  CHECK_THROWS_AS(eigen_twist_check(QExpansion::modp(5, 12, c), {2}), DomainError);
  // E4 mod 7 is an eigenform with a_1 = 240 = 2; after normalizing it passes.
  const auto e4 = eisenstein4_mod(7, 60).scaled(4);
  CHECK(e4.fp(1) == 1);
  const auto e4_report = eigen_twist_check(e4, {2, 3});
  CHECK(e4_report.entries.size() == 2);
  for (const auto& e : e4_report.entries) CHECK(e.theta_eigen);
  CHECK_THROWS_AS(eigen_twist_check(d5, {5}), DomainError);
}

TEST_CASE("packaged eigensystems") {
  const auto F = make_field(5, 2);
  const auto root = *F->sqrt(2);
  const auto psi = package_eigensystem(-24, 12, 2, F, root);
  CHECK(psi.at({0, 0}) == 1);
  CHECK(psi.at({1, 0}) == 1);
  CHECK(psi.at({1, 1}) == F->from_int(1024));
}

TEST_CASE("q-expansion JSON") {
  const auto d = delta(5);
  const auto j = d.to_json();
  CHECK(j.at("ring") == "Q");
  CHECK(j.at("coeffs")[2] == "-24");
  CHECK(j.at("trunc") == 5);
  CHECK(QExpansion::from_json(j) == d);
  const auto m = delta_mod(7, 5);
  CHECK(QExpansion::from_json(m.to_json()) == m);
  CHECK(m.to_json().at("p") == 7);
  const auto r = QExpansion::from_json(nlohmann::json::parse(R"({"ring":"Q","weight":0,"coeffs":["1/2","-3"],"trunc":1})"));
  CHECK(r.q(0) == BigRational(1, 2));
  CHECK(r.reduce(5).fp(0) == 3);
  CHECK_THROWS_AS(QExpansion::from_json(nlohmann::json::parse(R"({"ring":"Q","weight":0,"coeffs":["x"]})")), ParseError);
  CHECK_THROWS_AS(QExpansion::from_json(nlohmann::json::parse(R"({"ring":"Q","weight":0,"coeffs":["1"],"trunc":3})")), ParseError);
}
