#include <random>
#include <set>

#include "doctest.h"
#include "modtheta/errors.hpp"
#include "modtheta/root_data.hpp"

using namespace modtheta;

namespace {

// Oracle: every lambda - sum n_i alpha_i^vee with 0 <= n_i <= bound that is dominant.
std::set<Cocharacter> brute_force_below(const RootDatum& d, const Cocharacter& lambda, int bound) {
  std::set<Cocharacter> out;
  const std::size_t s = d.simple_coroots().size();
  std::vector<int> n(s, 0);
  while (true) {
    Cocharacter mu = lambda;
    for (std::size_t j = 0; j < s; ++j)
      for (int k = 0; k < d.rank(); ++k) mu[k] -= n[j] * d.simple_coroots()[j][k];
    if (d.is_dominant(mu)) out.insert(mu);
    std::size_t j = 0;
    while (j < s && n[j] == bound) n[j++] = 0;
    if (j == s) break;
    ++n[j];
  }
  return out;
}

std::vector<Cocharacter> dominant_in_box(const RootDatum& d, int lo, int hi) {
  std::vector<Cocharacter> out;
  Cocharacter w(d.rank(), lo);
  while (true) {
    if (d.is_dominant(w)) out.push_back(w);
    int i = 0;
    while (i < d.rank() && w[i] == hi) w[i++] = lo;
    if (i == d.rank()) break;
    ++w[i];
  }
  return out;
}

}  // namespace

TEST_CASE("pairing") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(pairing({1, -1}, {1, 0}) == 1);
  CHECK(pairing({3, 7}, {0, 0}) == 0);
  const auto gsp4 = RootDatum::gsp(4);
  const auto& roots = gsp4.simple_roots();
  const auto& coroots = gsp4.simple_coroots();
  CHECK(pairing(roots.back(), coroots.back()) == 2);
  CHECK_THROWS_AS(pairing({1, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("is_dominant") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.is_dominant({1, 0}));
  CHECK_FALSE(gl2.is_dominant({0, 1}));
  CHECK(RootDatum::gl(3).is_dominant({1, 0, -1}));
  CHECK_THROWS_AS(gl2.is_dominant({1, 0, 0}), DimensionError);
}

TEST_CASE("leq") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.leq({1, 1}, {2, 0}));
  CHECK(gl2.leq({2, 0}, {2, 0}));
  CHECK_FALSE(gl2.leq({2, 0}, {1, 1}));
  CHECK_FALSE(gl2.leq({1, 0}, {2, 0}));  // different determinant
  CHECK_THROWS_AS(gl2.leq({0, 1}, {2, 0}), DomainError);
}

TEST_CASE("dominant_weights_below fixtures") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.dominant_weights_below({2, 0}) == std::vector<Cocharacter>{{2, 0}, {1, 1}});
  const auto gl3 = RootDatum::gl(3);
  CHECK(gl3.dominant_weights_below({1, 0, -1}) == std::vector<Cocharacter>{{1, 0, -1}, {0, 0, 0}});
  CHECK(gl3.dominant_weights_below({1, 0, 0}) == std::vector<Cocharacter>{{1, 0, 0}});
  CHECK_THROWS_AS(gl2.dominant_weights_below({0, 1}), DomainError);
}

TEST_CASE("dominant_weights_below agrees with exhaustive search") {
  for (const auto& d : {RootDatum::gl(2), RootDatum::gl(3), RootDatum::gsp(4), RootDatum::gsp(6)}) {
    for (const auto& lambda : dominant_in_box(d, -2, 3)) {
      const auto got = d.dominant_weights_below(lambda);
      const std::set<Cocharacter> got_set(got.begin(), got.end());
      CHECK(got_set.size() == got.size());
      CHECK(got_set == brute_force_below(d, lambda, 12));
      for (const auto& mu : got) CHECK(d.leq(mu, lambda));
      CHECK(got.front() == lambda);
    }
  }
}

TEST_CASE("rho_pairing_doubled") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.rho_pairing_doubled({1, 0}) == 1);
  CHECK(gl2.rho_pairing_doubled({1, 1}) == 0);
  // Oracle: sum of the three positive roots e1-e2, e2-e3, e1-e3 is (2,0,-2).
  CHECK(RootDatum::gl(3).rho_pairing_doubled({1, 0, -1}) == 4);
  CHECK(RootDatum::gl(3).positive_roots().size() == 3);
  CHECK(RootDatum::gsp(4).positive_roots().size() == 4);
}

TEST_CASE("weyl_orbit") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.weyl_orbit({1, 0}) == std::vector<Cocharacter>{{1, 0}, {0, 1}});
  CHECK(gl2.weyl_orbit({1, 1}) == std::vector<Cocharacter>{{1, 1}});
  CHECK(RootDatum::gl(3).weyl_orbit({1, 0, 0}).size() == 3);
  // gsp4 minuscule (1;1,1): the long reflection sends mu_2 -> mu_0 - mu_2.
  const auto orbit = RootDatum::gsp(4).weyl_orbit({1, 1, 1});
  CHECK(std::set<Cocharacter>(orbit.begin(), orbit.end()) ==
        std::set<Cocharacter>{{1, 1, 1}, {1, 1, 0}, {1, 0, 1}, {1, 0, 0}});
}

TEST_CASE("constructors") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(gl2.rank() == 2);
  const auto gsp4 = RootDatum::gsp(4);
  CHECK(gsp4.rank() == 3);
  for (const auto& a : gsp4.simple_coroots()) CHECK(pairing(gsp4.character("nu").coords, a) == 0);
  CHECK(RootDatum::product(gl2, RootDatum::gl(1)).rank() == 3);
  CHECK(RootDatum::from_name("gl2xgl1").rank() == 3);
  CHECK(RootDatum::from_name("gsp4").key() == gsp4.key());
  CHECK_THROWS_AS(RootDatum::from_name("so5"), ParseError);
}

TEST_CASE("from_json") {
  const auto doc = RootDatum::gsp(4).to_json();
  CHECK(RootDatum::from_json(doc).key() == RootDatum::gsp(4).key());
  nlohmann::json broken = doc;
  broken.erase("simple_coroots");
  CHECK_THROWS_WITH_AS(RootDatum::from_json(broken), doctest::Contains("simple_coroots"), ParseError);
  nlohmann::json bad_cartan = {{"name", "bad"},
                               {"rank", 2},
                               {"simple_roots", {{1, -1}}},
                               {"simple_coroots", {{1, 0}}}};
  CHECK_THROWS_AS(RootDatum::from_json(bad_cartan), DomainError);
  nlohmann::json dependent = {{"name", "dep"},
                              {"rank", 2},
                              {"simple_roots", {{2, 0}, {-2, 0}}},
                              {"simple_coroots", {{1, 0}, {1, 0}}}};
  CHECK_THROWS(RootDatum::from_json(dependent));
}

TEST_CASE("Weyl group orders") {
  CHECK(RootDatum::gl(1).weyl_group().size() == 1);
  CHECK(RootDatum::gl(3).weyl_group().size() == 6);
  CHECK(RootDatum::gl(4).weyl_group().size() == 24);
  CHECK(RootDatum::gsp(2).weyl_group().size() == 2);
  CHECK(RootDatum::gsp(4).weyl_group().size() == 8);
  CHECK(RootDatum::gsp(6).weyl_group().size() == 48);
  const auto gsp4 = RootDatum::gsp(4);
  for (const auto& g : gsp4.weyl_group().generators) {
    WeylElement sq{g.matrix, 0};
    const Cocharacter v{3, -1, 2};
    CHECK(sq.apply(g.apply(v)) == v);
  }
}

TEST_CASE("dominance is a partial order on random triples") {
  std::mt19937_64 rng(20261018);
  for (const auto& d : {RootDatum::gl(3), RootDatum::gsp(4)}) {
    const auto pool = dominant_in_box(d, -2, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
      const auto& a = pool[pick(rng)];
      const auto& b = pool[pick(rng)];
      const auto& c = pool[pick(rng)];
      CHECK(d.leq(a, a));
      if (d.leq(a, b) && d.leq(b, a)) CHECK(a == b);
      if (d.leq(a, b) && d.leq(b, c)) CHECK(d.leq(a, c));
      if (d.leq(a, b)) {
        for (const auto& [name, eta] : d.characters()) CHECK(pairing(eta.coords, a) == pairing(eta.coords, b));
      }
    }
  }
}

TEST_CASE("orbit of a dominant weight has exactly one dominant element") {
  const auto d = RootDatum::gsp(6);
  for (const auto& mu : dominant_in_box(d, -1, 2)) {
    int dominant = 0;
    for (const auto& w : d.weyl_orbit(mu)) dominant += d.is_dominant(w) ? 1 : 0;
    CHECK(dominant == 1);
    CHECK(d.dominant_conjugate(d.weyl_orbit(mu).back()) == mu);
  }
}
