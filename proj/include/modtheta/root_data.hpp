#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace modtheta {

/// Integer coordinates of a cocharacter mu in X_*(T) = X^*(T^). Used for every
/// weight that indexes a Hecke basis element or a dual-group character.
using Cocharacter = std::vector<int>;
using Weight = Cocharacter;

/// A character of T that extends to G, e.g. det on GL_n or the similitude
/// character on GSp_2n. Kills every coroot.
struct CharacterOfG {
  std::string name;
  std::vector<int> coords;

  bool operator==(const CharacterOfG&) const = default;
};

/// Dot product in the fixed coordinates. Throws DimensionError on length mismatch.
long long pairing(const std::vector<int>& chi, const Cocharacter& mu);

std::string format_weight(const Weight& w);
Weight parse_weight(const std::string& text);

/// Element of W acting on cocharacter coordinates, mu -> matrix * mu.
struct WeylElement {
  std::vector<int> matrix;  // rank x rank, row-major
  int length = 0;

  Cocharacter apply(const Cocharacter& mu) const;
  int sign() const { return length % 2 == 0 ? 1 : -1; }
};

struct WeylGroup {
  int rank = 0;
  std::vector<WeylElement> elements;   // elements[0] is the identity
  std::vector<WeylElement> generators; // simple reflections, in root order

  std::size_t size() const { return elements.size(); }
};

/// Split root datum (X^*, simple roots, X_*, simple coroots) in fixed
/// coordinates of rank n, plus named characters of G.
///
/// Immutable after construction. The Weyl group, positive (co)roots and a
/// W-invariant form are derived eagerly by the constructor.
class RootDatum {
 public:
  RootDatum(std::string name, int rank, std::vector<std::vector<int>> simple_roots,
            std::vector<std::vector<int>> simple_coroots,
            std::map<std::string, CharacterOfG> characters = {});

  static RootDatum gl(int n);
  /// GSp_{2n} with coordinates (e_0; e_1..e_n). e_0 is the similitude nu.
  static RootDatum gsp(int two_n);
  static RootDatum product(const RootDatum& a, const RootDatum& b);
  static RootDatum from_json(const nlohmann::json& doc);
  /// Built-in names: gl<n>, gsp<2n>, and products joined by 'x' (gl2xgl1).
  static RootDatum from_name(const std::string& name);

  const std::string& name() const { return name_; }
  int rank() const { return rank_; }
  int semisimple_rank() const { return static_cast<int>(simple_roots_.size()); }
  const std::vector<std::vector<int>>& simple_roots() const { return simple_roots_; }
  const std::vector<std::vector<int>>& simple_coroots() const { return simple_coroots_; }
  const std::vector<std::vector<int>>& positive_roots() const { return positive_roots_; }
  const std::vector<std::vector<int>>& positive_coroots() const { return positive_coroots_; }
  const std::map<std::string, CharacterOfG>& characters() const { return characters_; }
  const CharacterOfG& character(const std::string& name) const;
  const WeylGroup& weyl_group() const { return weyl_; }

  /// Sum of the positive coroots, i.e. twice the dual group's rho.
  const Cocharacter& two_rho_dual() const { return two_rho_dual_; }

  /// W-invariant positive-definite integer form on cocharacters.
  long long form(const Cocharacter& x, const Cocharacter& y) const;

  bool is_dominant(const Cocharacter& mu) const;
  /// Dominance order on P+: lambda - mu is a nonnegative integral combination
  /// of simple coroots. Both arguments must be dominant.
  bool leq(const Cocharacter& mu, const Cocharacter& lambda) const;
  /// Coefficients of diff in the simple-coroot basis when they are integral,
  /// nullopt when diff lies outside the coroot lattice.
  std::optional<std::vector<long long>> coroot_coefficients(const Cocharacter& diff) const;
  std::vector<Cocharacter> dominant_weights_below(const Cocharacter& lambda) const;
  /// 2<rho, mu> where rho is the half-sum of the positive roots of G.
  long long rho_pairing_doubled(const Cocharacter& mu) const;
  std::vector<Cocharacter> weyl_orbit(const Cocharacter& mu) const;
  Cocharacter dominant_conjugate(const Cocharacter& mu) const;
  Cocharacter simple_reflection(int i, const Cocharacter& mu) const;

  /// Graded-lexicographic order: larger 2<rho,mu> first, then coordinates
  /// lexicographically descending. Refines the dominance order.
  bool graded_before(const Cocharacter& a, const Cocharacter& b) const;
  void sort_graded(std::vector<Cocharacter>& ws) const;

  /// Canonical JSON, also used as the cache key for derived tables.
  nlohmann::json to_json() const;
  const std::string& key() const { return key_; }

  void check_length(const std::vector<int>& v, const char* what) const;
  void require_dominant(const Cocharacter& mu) const;

 private:
  void validate() const;
  void build_derived();

  std::string name_;
  int rank_;
  std::vector<std::vector<int>> simple_roots_;
  std::vector<std::vector<int>> simple_coroots_;
  std::map<std::string, CharacterOfG> characters_;

  std::vector<std::vector<int>> positive_roots_;
  std::vector<std::vector<int>> positive_coroots_;
  std::vector<long long> two_rho_;  // sum of positive roots
  Cocharacter two_rho_dual_;
  std::vector<long long> gram_;     // rank x rank
  WeylGroup weyl_;
  std::string key_;
};

using RootDatumPtr = std::shared_ptr<const RootDatum>;

inline RootDatumPtr make_datum(RootDatum d) {
  return std::make_shared<const RootDatum>(std::move(d));
}

}  // namespace modtheta
