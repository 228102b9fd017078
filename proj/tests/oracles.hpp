#pragma once

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the code path it is used to check.

#include <map>
#include <vector>

#include "modtheta/root_data.hpp"

namespace modtheta::oracle {

using Poly = std::map<Cocharacter, long long>;

/// chi_lambda from the Weyl character formula:
///   chi_lambda * prod_{beta>0} (1 - x^{-beta}) = sum_w sgn(w) x^{w(lambda+rho)-rho},
/// solved by long division one positive coroot at a time.
Poly weyl_character(const RootDatum& d, const Cocharacter& lambda);

/// Kostant partition count of beta over the positive coroots, graded by the
/// number of parts: result[m] = number of expressions with m parts.
std::map<int, long long> kostant_partitions(const RootDatum& d, const Cocharacter& beta);

/// Convolution product c_lambda * c_mu in the spherical Hecke algebra of
/// GL_2(Q_p), computed from explicit upper-triangular coset representatives.
/// Weights must have nonnegative entries. Returns coefficients of c_nu.
std::map<Cocharacter, long long> gl2_convolution(long long p, const Cocharacter& lambda,
                                                 const Cocharacter& mu);

/// Ramanujan tau(0..N) from Delta = q prod_{n>=1} (1 - q^n)^24.
std::vector<long long> tau_product(int N);

}  // namespace modtheta::oracle
