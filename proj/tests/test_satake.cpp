#include "doctest.h"
#include "modtheta/errors.hpp"
#include "modtheta/satake.hpp"
#include "oracles.hpp"

using namespace modtheta;

namespace {

LaurentV q_poly(std::initializer_list<std::pair<int, long long>> terms) {
  LaurentV out;
  for (const auto& [m, c] : terms) out += LaurentV::monomial(c, 2 * m);
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

TEST_CASE("LaurentV basics") {
  const LaurentV v = LaurentV::monomial(1, 1);
  CHECK((v * v) == LaurentV::q_power(1));
  CHECK((v - v).is_zero());
  CHECK(LaurentV::monomial(3, 2).inverted() == LaurentV::monomial(3, -2));
  CHECK(q_poly({{0, 1}, {1, 2}}).eval_q(3) == 7);
  CHECK_THROWS_AS(v.eval_q(2), DomainError);
  CHECK(LaurentV::from_json(q_poly({{1, -1}}).to_json()) == q_poly({{1, -1}}));
  CHECK(q_poly({{0, 1}, {1, -2}}).to_string() == "-2*v^2 + 1");
}

TEST_CASE("q_kostant fixtures") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(q_kostant(gl2, {1, -1}) == q_poly({{1, 1}}));
  CHECK(q_kostant(gl2, {2, -2}) == q_poly({{2, 1}}));
  CHECK(q_kostant(gl2, {-1, 1}).is_zero());
  CHECK(q_kostant(gl2, {1, 0}).is_zero());
  const auto gl3 = RootDatum::gl(3);
  CHECK(q_kostant(gl3, {1, 0, -1}) == q_poly({{1, 1}, {2, 1}}));
  CHECK(q_kostant(gl3, {1, 0, -1}, false) == LaurentV(2));
}

TEST_CASE("q_kostant agrees with exhaustive enumeration") {
  for (const auto& d : {RootDatum::gl(3), RootDatum::gsp(4), RootDatum::gl(4)}) {
    for (const auto& beta : dominant_in_box(d, -3, 3)) {
      const auto oracle = oracle::kostant_partitions(d, beta);
      LaurentV expected;
      for (const auto& [m, c] : oracle) expected += LaurentV::monomial(c, 2 * m);
      CHECK_MESSAGE(q_kostant(d, beta) == expected, d.name(), format_weight(beta));
    }
  }
}

TEST_CASE("lusztig_q_analog") {
  const auto gl2 = RootDatum::gl(2);
  CHECK(lusztig_q_analog(gl2, {2, 0}, {2, 0}) == LaurentV(1));
  CHECK(lusztig_q_analog(gl2, {2, 0}, {1, 1}) == q_poly({{1, 1}}));
  const auto gl3 = RootDatum::gl(3);
  CHECK(lusztig_q_analog(gl3, {2, 1, 0}, {1, 1, 1}) == q_poly({{1, 1}, {2, 1}}));
  // Kostka-Foulkes K_{(2,2),(1,1,1,1)} = q^2 + q^4.
  CHECK(lusztig_q_analog(RootDatum::gl(4), {2, 2, 0, 0}, {1, 1, 1, 1}) == q_poly({{2, 1}, {4, 1}}));
  CHECK_THROWS_AS(lusztig_q_analog(gl2, {1, 1}, {2, 0}), DomainError);
}

TEST_CASE("q-analogue at q = 1 is the weight multiplicity") {
  for (const auto& d : {RootDatum::gl(3), RootDatum::gsp(4)}) {
    for (const auto& lambda : dominant_in_box(d, -1, 2)) {
      const auto table = weight_multiplicities(d, lambda);
      for (const auto& mu : d.dominant_weights_below(lambda)) {
        long long at_one = 0;
        const auto k = lusztig_q_analog(d, lambda, mu);
        for (const auto& [e, c] : k.terms()) at_one += c;
        CHECK(at_one == table->at(mu));
      }
    }
  }
}

TEST_CASE("Satake matrices: gl2 fixtures") {
  const auto gl2 = make_datum(RootDatum::gl(2));
  const auto m1 = build_satake_matrices(gl2, {{1, 0}});
  CHECK(m1.size() == 1);
  CHECK(m1.b_entry({1, 0}, {1, 0}) == LaurentV::monomial(1, 1));

  const auto m2 = build_satake_matrices(gl2, {{2, 0}});
  CHECK(m2.lambda_list == std::vector<Cocharacter>{{2, 0}, {1, 1}});
  CHECK(m2.d_entry({2, 0}, {2, 0}) == LaurentV::monomial(1, -2));
  CHECK(m2.d_entry({2, 0}, {1, 1}) == LaurentV::monomial(1, -2));
  CHECK(m2.d_coefficient({2, 0}, {1, 1}) == LaurentV(1));
  CHECK(m2.b_entry({2, 0}, {2, 0}) == LaurentV::q_power(1));
  CHECK(m2.b_entry({2, 0}, {1, 1}) == LaurentV(-1));
  CHECK(m2.b_coefficient({2, 0}, {1, 1}) == LaurentV(-1));
  CHECK(m2.coefficients_constant());
}

TEST_CASE("Satake matrices are mutually inverse and unitriangular") {
  for (const char* name : {"gl2", "gl3", "gsp4"}) {
    const auto d = make_datum(RootDatum::from_name(name));
    const auto cutoff = dominant_in_box(*d, -1, 2);
    const auto m = build_satake_matrices(d, cutoff);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& lambda = m.lambda_list[i];
      CHECK(m.b_coefficient(lambda, lambda) == LaurentV(1));
      CHECK(m.d_coefficient(lambda, lambda) == LaurentV(1));
      for (std::size_t j = 0; j < m.size(); ++j) {
        LaurentV entry;
        for (std::size_t k = 0; k < m.size(); ++k) entry += m.forward[i][k] * m.inverse[k][j];
        CHECK(entry == (i == j ? LaurentV(1) : LaurentV()));
        if (j < i) {
          CHECK(m.forward[i][j].is_zero());
          CHECK(m.inverse[i][j].is_zero());
        }
        if (!m.forward[i][j].is_zero()) CHECK(d->leq(m.lambda_list[j], lambda));
      }
    }
  }
}

TEST_CASE("gl3 adjoint row matches the coset count") {
  // c_(1,0,0) * c_(0,0,-1) = c_(1,0,-1) + (q^2 + q + 1) c_0, so
  // S(c_(1,0,-1)) = q^2 chi_(1,0,-1) - (q + 1) chi_0.
  const auto gl3 = make_datum(RootDatum::gl(3));
  const auto s = satake(HeckeElement::basis(gl3, {1, 0, -1}));
  CHECK(s.coeff({1, 0, -1}) == LaurentV::q_power(2));
  CHECK(s.coeff({0, 0, 0}) == -q_poly({{0, 1}, {1, 1}}));
}

TEST_CASE("satake and satake_inverse") {
  const auto gl2 = make_datum(RootDatum::gl(2));
  CHECK(satake(HeckeElement::basis(gl2, {1, 1})).terms ==
        std::map<Cocharacter, LaurentV>{{{1, 1}, LaurentV(1)}});
  HeckeElement h = HeckeElement::basis(gl2, {1, 0});
  h.add({1, 1}, LaurentV(1));
  const auto s = satake(h);
  CHECK(s.coeff({1, 0}) == LaurentV::monomial(1, 1));
  CHECK(s.coeff({1, 1}) == LaurentV(1));
  CHECK(satake_inverse(gl2, s) == h);

  const auto gl3 = make_datum(RootDatum::gl(3));
  for (const auto& lambda : dominant_in_box(*gl3, -2, 2)) {
    const auto c = HeckeElement::basis(gl3, lambda);
    CHECK(satake_inverse(gl3, satake(c)) == c);
  }
}

TEST_CASE("hecke_multiply fixtures") {
  const auto gl2 = make_datum(RootDatum::gl(2));
  const auto c10 = HeckeElement::basis(gl2, {1, 0});
  const auto c11 = HeckeElement::basis(gl2, {1, 1});
  const auto product = hecke_multiply(c10, c10);
  CHECK(product.coeff({2, 0}) == LaurentV(1));
  CHECK(product.coeff({1, 1}) == q_poly({{0, 1}, {1, 1}}));
  CHECK(product.terms.size() == 2);
  CHECK(hecke_multiply(c11, c10) == HeckeElement::basis(gl2, {2, 1}));
  CHECK(hecke_multiply(HeckeElement::basis(gl2, {0, 0}), product) == product);
  const auto gl3 = make_datum(RootDatum::gl(3));
  CHECK_THROWS_AS(hecke_multiply(c10, HeckeElement::basis(gl3, {1, 0, 0})), DomainError);
}

TEST_CASE("hecke_multiply matches the GL2 coset convolution") {
  const auto gl2 = make_datum(RootDatum::gl(2));
  const std::vector<Cocharacter> weights{{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}};
  for (long long q : {2, 3, 5}) {
    for (const auto& a : weights)
      for (const auto& b : weights) {
        const auto product = hecke_multiply(HeckeElement::basis(gl2, a), HeckeElement::basis(gl2, b));
        std::map<Cocharacter, long long> evaluated;
        for (const auto& [nu, c] : product.terms) evaluated[nu] = c.eval_q(q);
        CHECK_MESSAGE(evaluated == oracle::gl2_convolution(q, a, b), "q=", q, " ", format_weight(a),
                      "*", format_weight(b));
      }
  }
}

TEST_CASE("hecke_multiply is commutative on gsp4") {
  const auto d = make_datum(RootDatum::gsp(4));
  const auto a = HeckeElement::basis(d, {1, 1, 1});
  const auto b = HeckeElement::basis(d, {2, 2, 1});
  CHECK(hecke_multiply(a, b) == hecke_multiply(b, a));
}

TEST_CASE("HeckeElement JSON") {
  const auto gl2 = make_datum(RootDatum::gl(2));
  HeckeElement h = HeckeElement::basis(gl2, {2, 0});
  h.add({1, 1}, q_poly({{1, 1}, {0, 1}}));
  const auto doc = h.to_json();
  CHECK(doc.at("datum") == "gl2");
  CHECK(HeckeElement::from_json(doc) == h);
  CHECK_THROWS_AS(HeckeElement::from_json({{"datum", "gl2"}}), ParseError);
  CHECK_THROWS_AS(HeckeElement::from_json({{"datum", "gl2"}, {"terms", {{{"weight", {0, 1}}, {"coeff", 1}}}}}),
                  DomainError);
}
