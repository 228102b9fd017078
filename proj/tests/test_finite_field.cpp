#include <random>

#include "doctest.h"
#include "modtheta/errors.hpp"
#include "modtheta/finite_field.hpp"

using namespace modtheta;

namespace {

// Schoolbook product of coefficient vectors reduced by the modulus, with no
// tables involved.
std::vector<int> naive_mul(const FiniteField& F, const std::vector<int>& a, const std::vector<int>& b) {
  const int p = F.p(), k = F.k();
  std::vector<long long> prod(2 * k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) prod[i + j] += static_cast<long long>(a[i]) * b[j];
  const auto& m = F.modulus();
  for (int d = 2 * k - 1; d >= k; --d) {
    const long long c = prod[d] % p;
    for (int i = 0; i <= k; ++i) prod[d - k + i] -= c * m[i];
  }
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = static_cast<int>(((prod[i] % p) + p) % p);
  return out;
}

}  // namespace

TEST_CASE("prime fields") {
  const FiniteField F(7, 1);
  CHECK(F.order() == 7);
  CHECK(F.add(3, 5) == 1);
  CHECK(F.mul(3, 5) == 1);
  CHECK(F.inv(3) == 5);
  CHECK(F.pow(3, -1) == 5);
  CHECK(F.pow(2, 3) == 1);
  CHECK(F.from_int(-1) == 6);
  CHECK(F.sqrt(2) == 3);
  CHECK_FALSE(F.sqrt(3).has_value());
  CHECK(F.mult_order(3) == 6);
  CHECK_THROWS_AS(F.inv(0), DomainError);
  CHECK_THROWS_AS(FiniteField(6, 1), DomainError);
  CHECK_THROWS_AS(FiniteField(2, 40), ResourceError);
}

TEST_CASE("extension moduli are the first irreducibles") {
  CHECK(FiniteField(2, 2).modulus() == std::vector<int>{1, 1, 1});
  CHECK(FiniteField(3, 2).modulus() == std::vector<int>{1, 0, 1});
  CHECK(FiniteField(5, 2).modulus() == std::vector<int>{2, 0, 1});
  CHECK(FiniteField(2, 3).modulus() == std::vector<int>{1, 1, 0, 1});
  for (int p : {2, 3, 5, 7, 11})
    for (int k : {2, 3}) {
      const FiniteField F(p, k);
      // Degree <= 3: irreducible iff rootless.
      for (int x = 0; x < p; ++x) {
        long long v = 0;
        for (int i = k; i >= 0; --i) v = (v * x + F.modulus()[i]) % p;
        CHECK(v != 0);
      }
    }
}

TEST_CASE("table multiplication agrees with schoolbook products") {
  std::mt19937_64 rng(7001);
  for (int p : {2, 3, 5, 7, 11})
    for (int k : {1, 2, 3}) {
      const FiniteField F(p, k);
      std::uniform_int_distribution<FiniteField::Elem> pick(0, F.order() - 1);
      for (int trial = 0; trial < 200; ++trial) {
        const auto a = pick(rng), b = pick(rng);
        CHECK(F.coefficients(F.mul(a, b)) == naive_mul(F, F.coefficients(a), F.coefficients(b)));
        CHECK(F.add(a, F.neg(a)) == 0);
        CHECK(F.sub(F.add(a, b), b) == a);
        if (a != 0) {
          CHECK(F.mul(a, F.inv(a)) == 1);
          CHECK((F.order() - 1) % F.mult_order(a) == 0);
          CHECK(F.pow(a, F.order() - 1) == 1);
        }
      }
    }
}

TEST_CASE("field element JSON") {
  const FiniteField F(5, 2);
  CHECK(F.to_json(7) == nlohmann::json({2, 1}));
  CHECK(F.from_json(nlohmann::json({2, 1})) == 7);
  CHECK(F.from_json(nlohmann::json(-1)) == 4);
  CHECK_THROWS_AS(F.from_json(nlohmann::json("x")), ParseError);
}

TEST_CASE("polynomial roots and splitting degree") {
  const FiniteField F(7, 1);
  // x^2 - x + 1 = (x - 3)(x - 5) over F_7.
  CHECK(field_poly::roots(F, {1, 6, 1}) == std::vector<FiniteField::Elem>{3, 5});
  CHECK(field_poly::splitting_degree(F, {1, 6, 1}) == 1);
  // x^2 - x + 3 has discriminant 3, a non-square mod 7.
  CHECK(field_poly::roots(F, {3, 6, 1}).empty());
  CHECK(field_poly::splitting_degree(F, {3, 6, 1}) == 2);
  // (x - 1)^2 (x^3 - 2): 2 is not a cube mod 7.
  const FieldPoly cubic = field_poly::mul(F, {5, 0, 0, 1}, {1, 5, 1});
  CHECK(field_poly::roots(F, cubic) == std::vector<FiniteField::Elem>{1, 1});
  CHECK(field_poly::splitting_degree(F, cubic) == 3);
  CHECK(field_poly::gcd(F, {1, 5, 1}, {6, 1}) == FieldPoly{6, 1});
  const FiniteField G(7, 2);
  CHECK(field_poly::roots(G, {3, 6, 1}).size() == 2);
}
