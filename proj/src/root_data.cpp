#include "modtheta/root_data.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include <boost/rational.hpp>

#include "modtheta/errors.hpp"

namespace modtheta {

namespace {

using Rational = boost::rational<long long>;

constexpr std::size_t kMaxWeylOrder = 200000;
constexpr long long kMaxEnumerationBox = 20'000'000;

// Solve sum_j c_j * columns[j] = target over Q. Columns must be linearly
// independent; returns nullopt when target is outside their span.
std::optional<std::vector<Rational>> solve_in_span(const std::vector<std::vector<int>>& columns,
                                                   const std::vector<int>& target) {
  const std::size_t rows = target.size();
  const std::size_t cols = columns.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = columns[c][r];
    a[r][cols] = target[r];
  }
  std::vector<std::size_t> pivot_row_of(cols, rows);
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t pr = row;
    while (pr < rows && a[pr][c].numerator() == 0) ++pr;
    if (pr == rows) continue;
    std::swap(a[pr], a[row]);
    const Rational inv = Rational(1) / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c].numerator() == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t k = c; k <= cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_row_of[c] = row;
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r) {
    if (a[r][cols].numerator() != 0) return std::nullopt;
  }
  std::vector<Rational> sol(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    if (pivot_row_of[c] == rows) return std::nullopt;  // dependent columns
    sol[c] = a[pivot_row_of[c]][cols];
  }
  return sol;
}

int rational_rank(const std::vector<std::vector<int>>& vectors, int length) {
  std::vector<std::vector<Rational>> a;
  for (const auto& v : vectors) a.emplace_back(v.begin(), v.end());
  int rank = 0;
  for (int c = 0; c < length && rank < static_cast<int>(a.size()); ++c) {
    std::size_t pr = rank;
    while (pr < a.size() && a[pr][c].numerator() == 0) ++pr;
    if (pr == a.size()) continue;
    std::swap(a[pr], a[rank]);
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      if (a[r][c].numerator() == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (int k = c; k < length; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<int> identity_matrix(int n) {
  std::vector<int> m(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

std::vector<int> matmul(const std::vector<int>& a, const std::vector<int>& b, int n) {
  std::vector<int> c(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const int aik = a[i * n + k];
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

std::vector<int> unit(int n, int i) {
  std::vector<int> v(n, 0);
  v[i] = 1;
  return v;
}

}  // namespace

long long pairing(const std::vector<int>& chi, const Cocharacter& mu) {
  if (chi.size() != mu.size()) {
    throw DimensionError("pairing of vectors of length " + std::to_string(chi.size()) +
                         " and " + std::to_string(mu.size()));
  }
  long long s = 0;
  for (std::size_t i = 0; i < chi.size(); ++i) s += static_cast<long long>(chi[i]) * mu[i];
  return s;
}

std::string format_weight(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  os << ')';
  return os.str();
}

Weight parse_weight(const std::string& text) {
  Weight w;
  std::string cleaned;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || ch == ' ') continue;
    cleaned.push_back(ch);
  }
  if (cleaned.empty()) return w;
  std::istringstream is(cleaned);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      w.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("weight '" + text + "' has non-integer entry '" + item + "'");
    }
  }
  return w;
}

Cocharacter WeylElement::apply(const Cocharacter& mu) const {
  const int n = static_cast<int>(mu.size());
  Cocharacter out(n, 0);
  for (int i = 0; i < n; ++i) {
    int s = 0;
    for (int j = 0; j < n; ++j) s += matrix[i * n + j] * mu[j];
    out[i] = s;
  }
  return out;
}

RootDatum::RootDatum(std::string name, int rank, std::vector<std::vector<int>> simple_roots,
                     std::vector<std::vector<int>> simple_coroots,
                     std::map<std::string, CharacterOfG> characters)
    : name_(std::move(name)),
      rank_(rank),
      simple_roots_(std::move(simple_roots)),
      simple_coroots_(std::move(simple_coroots)),
      characters_(std::move(characters)) {
  validate();
  build_derived();
}

void RootDatum::validate() const {
  if (rank_ < 1) throw DomainError("rank", "rank must be positive, got " + std::to_string(rank_));
  if (simple_roots_.size() != simple_coroots_.size()) {
    throw DomainError("simple_roots", "simple_roots and simple_coroots have different lengths");
  }
  if (static_cast<int>(simple_roots_.size()) > rank_) {
    throw DomainError("simple_roots", "more simple roots than the rank");
  }
  for (const auto& a : simple_roots_) check_length(a, "simple root");
  for (const auto& a : simple_coroots_) check_length(a, "simple coroot");
  const std::size_t s = simple_roots_.size();
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      const long long c = pairing(simple_roots_[i], simple_coroots_[j]);
      if (i == j && c != 2) {
        throw DomainError("cartan", "pairing of simple root " + std::to_string(i) +
                                        " with its coroot is " + std::to_string(c));
      }
      if (i != j && c > 0) {
        throw DomainError("cartan", "off-diagonal Cartan entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is positive");
      }
    }
  if (rational_rank(simple_coroots_, rank_) != static_cast<int>(s)) {
    throw DomainError("coroot_independence", "simple coroots are linearly dependent");
  }
  if (rational_rank(simple_roots_, rank_) != static_cast<int>(s)) {
    throw DomainError("root_independence", "simple roots are linearly dependent");
  }
  for (const auto& [key, chi] : characters_) {
    check_length(chi.coords, "character");
    for (const auto& a : simple_coroots_) {
      if (pairing(chi.coords, a) != 0) {
        throw DomainError("character_of_G", "character '" + key + "' does not kill coroot " +
                                                format_weight(a));
      }
    }
  }
}

void RootDatum::build_derived() {
  const int n = rank_;
  const std::size_t s = simple_roots_.size();

  // Weyl group: closure of the simple reflections under multiplication.
  weyl_.rank = n;
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<int> m = identity_matrix(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m[r * n + c] -= simple_coroots_[i][r] * simple_roots_[i][c];
    weyl_.generators.push_back({std::move(m), 1});
  }
  std::set<std::vector<int>> seen;
  weyl_.elements.push_back({identity_matrix(n), 0});
  seen.insert(weyl_.elements[0].matrix);
  for (std::size_t head = 0; head < weyl_.elements.size(); ++head) {
    const WeylElement cur = weyl_.elements[head];
    for (const auto& g : weyl_.generators) {
      auto m = matmul(g.matrix, cur.matrix, n);
      if (seen.insert(m).second) {
        weyl_.elements.push_back({std::move(m), cur.length + 1});
        if (weyl_.elements.size() > kMaxWeylOrder) {
          throw ResourceError("Weyl group of " + name_ + " exceeds " +
                              std::to_string(kMaxWeylOrder) + " elements");
        }
      }
    }
  }

  // Positive roots and coroots: s_i permutes the positive roots other than alpha_i.
  auto close_positive = [&](const std::vector<std::vector<int>>& simple, bool on_roots) {
    std::vector<std::vector<int>> out(simple.begin(), simple.end());
    std::set<std::vector<int>> have(out.begin(), out.end());
    for (std::size_t head = 0; head < out.size(); ++head) {
      for (std::size_t i = 0; i < s; ++i) {
        const auto beta = out[head];
        if (beta == simple[i]) continue;
        std::vector<int> img = beta;
        if (on_roots) {
          const long long c = pairing(beta, simple_coroots_[i]);
          for (int k = 0; k < n; ++k) img[k] -= static_cast<int>(c) * simple_roots_[i][k];
        } else {
          const long long c = pairing(simple_roots_[i], beta);
          for (int k = 0; k < n; ++k) img[k] -= static_cast<int>(c) * simple_coroots_[i][k];
        }
        if (have.insert(img).second) out.push_back(img);
      }
    }
    return out;
  };
  positive_roots_ = close_positive(simple_roots_, true);
  positive_coroots_ = close_positive(simple_coroots_, false);

  two_rho_.assign(n, 0);
  for (const auto& b : positive_roots_)
    for (int k = 0; k < n; ++k) two_rho_[k] += b[k];
  two_rho_dual_.assign(n, 0);
  for (const auto& b : positive_coroots_)
    for (int k = 0; k < n; ++k) two_rho_dual_[k] += b[k];

  gram_.assign(static_cast<std::size_t>(n) * n, 0);
  for (const auto& w : weyl_.elements)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        long long acc = 0;
        for (int k = 0; k < n; ++k)
          acc += static_cast<long long>(w.matrix[k * n + r]) * w.matrix[k * n + c];
        gram_[r * n + c] += acc;
      }

  key_ = to_json().dump();
}

RootDatum RootDatum::gl(int n) {
  if (n < 1) throw DomainError("n", "gl(n) needs n >= 1");
  std::vector<std::vector<int>> roots;
  for (int i = 0; i + 1 < n; ++i) {
    auto a = unit(n, i);
    a[i + 1] = -1;
    roots.push_back(a);
  }
  std::map<std::string, CharacterOfG> chars;
  chars["det"] = {"det", std::vector<int>(n, 1)};
  return RootDatum("gl" + std::to_string(n), n, roots, roots, chars);
}

RootDatum RootDatum::gsp(int two_n) {
  if (two_n < 2 || two_n % 2 != 0) {
    throw DomainError("n", "gsp(2n) needs a positive even argument, got " + std::to_string(two_n));
  }
  const int n = two_n / 2;
  const int rank = n + 1;
  std::vector<std::vector<int>> roots;
  std::vector<std::vector<int>> coroots;
  for (int i = 1; i < n; ++i) {
    auto a = unit(rank, i);
    a[i + 1] = -1;
    roots.push_back(a);
    coroots.push_back(a);
  }
  auto long_root = unit(rank, n);
  long_root[n] = 2;
  long_root[0] = -1;
  roots.push_back(long_root);
  coroots.push_back(unit(rank, n));
  std::map<std::string, CharacterOfG> chars;
  chars["nu"] = {"nu", unit(rank, 0)};
  return RootDatum("gsp" + std::to_string(two_n), rank, roots, coroots, chars);
}

RootDatum RootDatum::product(const RootDatum& a, const RootDatum& b) {
  const int rank = a.rank() + b.rank();
  auto embed = [rank](const std::vector<int>& v, int offset) {
    std::vector<int> out(rank, 0);
    std::copy(v.begin(), v.end(), out.begin() + offset);
    return out;
  };
  std::vector<std::vector<int>> roots;
  std::vector<std::vector<int>> coroots;
  for (const auto& r : a.simple_roots()) roots.push_back(embed(r, 0));
  for (const auto& r : b.simple_roots()) roots.push_back(embed(r, a.rank()));
  for (const auto& r : a.simple_coroots()) coroots.push_back(embed(r, 0));
  for (const auto& r : b.simple_coroots()) coroots.push_back(embed(r, a.rank()));
  std::map<std::string, CharacterOfG> chars;
  auto add_chars = [&](const RootDatum& d, int offset, const std::string& suffix) {
    for (const auto& [k, c] : d.characters()) {
      const bool clash = a.characters().count(k) && b.characters().count(k);
      const std::string key = clash ? k + suffix : k;
      chars[key] = {key, embed(c.coords, offset)};
    }
  };
  add_chars(a, 0, "_1");
  add_chars(b, a.rank(), "_2");
  return RootDatum(a.name() + "x" + b.name(), rank, roots, coroots, chars);
}

RootDatum RootDatum::from_json(const nlohmann::json& doc) {
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw ParseError(std::string("root datum is missing field '") + key + "'");
    }
    return doc.at(key);
  };
  try {
    const std::string name = field("name").get<std::string>();
    const int rank = field("rank").get<int>();
    auto roots = field("simple_roots").get<std::vector<std::vector<int>>>();
    auto coroots = field("simple_coroots").get<std::vector<std::vector<int>>>();
    std::map<std::string, CharacterOfG> chars;
    if (doc.contains("characters")) {
      for (const auto& [k, v] : doc.at("characters").items()) {
        chars[k] = {k, v.get<std::vector<int>>()};
      }
    }
    return RootDatum(name, rank, std::move(roots), std::move(coroots), std::move(chars));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("root datum field has the wrong type: ") + e.what());
  }
}

RootDatum RootDatum::from_name(const std::string& name) {
  const auto x = name.find('x');
  if (x != std::string::npos) {
    return product(from_name(name.substr(0, x)), from_name(name.substr(x + 1)));
  }
  auto number_after = [&](std::size_t prefix) {
    const std::string digits = name.substr(prefix);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw ParseError("unknown root datum name '" + name + "'");
    }
    return std::stoi(digits);
  };
  if (name.rfind("gsp", 0) == 0) return gsp(number_after(3));
  if (name.rfind("gl", 0) == 0) return gl(number_after(2));
  throw ParseError("unknown root datum name '" + name + "'");
}

const CharacterOfG& RootDatum::character(const std::string& name) const {
  const auto it = characters_.find(name);
  if (it == characters_.end()) {
    throw DomainError("character", "datum " + name_ + " has no character '" + name + "'");
  }
  return it->second;
}

void RootDatum::check_length(const std::vector<int>& v, const char* what) const {
  if (static_cast<int>(v.size()) != rank_) {
    throw DimensionError(std::string(what) + " " + format_weight(v) + " has length " +
                         std::to_string(v.size()) + ", datum " + name_ + " has rank " +
                         std::to_string(rank_));
  }
}

void RootDatum::require_dominant(const Cocharacter& mu) const {
  if (!is_dominant(mu)) {
    throw DomainError("dominant", format_weight(mu) + " is not dominant for " + name_);
  }
}

long long RootDatum::form(const Cocharacter& x, const Cocharacter& y) const {
  check_length(x, "weight");
  check_length(y, "weight");
  long long s = 0;
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c) s += static_cast<long long>(x[r]) * gram_[r * rank_ + c] * y[c];
  return s;
}

bool RootDatum::is_dominant(const Cocharacter& mu) const {
  check_length(mu, "weight");
  return std::all_of(simple_roots_.begin(), simple_roots_.end(),
                     [&](const auto& a) { return pairing(a, mu) >= 0; });
}

std::optional<std::vector<long long>> RootDatum::coroot_coefficients(const Cocharacter& diff) const {
  check_length(diff, "weight");
  const auto sol = solve_in_span(simple_coroots_, diff);
  if (!sol) return std::nullopt;
  std::vector<long long> out;
  out.reserve(sol->size());
  for (const auto& r : *sol) {
    if (r.denominator() != 1) return std::nullopt;
    out.push_back(r.numerator());
  }
  return out;
}

bool RootDatum::leq(const Cocharacter& mu, const Cocharacter& lambda) const {
  require_dominant(mu);
  require_dominant(lambda);
  Cocharacter diff(rank_);
  for (int i = 0; i < rank_; ++i) diff[i] = lambda[i] - mu[i];
  const auto coeffs = coroot_coefficients(diff);
  if (!coeffs) return false;
  return std::all_of(coeffs->begin(), coeffs->end(), [](long long c) { return c >= 0; });
}

Cocharacter RootDatum::simple_reflection(int i, const Cocharacter& mu) const {
  const long long c = pairing(simple_roots_.at(i), mu);
  Cocharacter out = mu;
  for (int k = 0; k < rank_; ++k) out[k] -= static_cast<int>(c) * simple_coroots_[i][k];
  return out;
}

Cocharacter RootDatum::dominant_conjugate(const Cocharacter& mu) const {
  check_length(mu, "weight");
  Cocharacter cur = mu;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < semisimple_rank(); ++i) {
      if (pairing(simple_roots_[i], cur) < 0) {
        cur = simple_reflection(i, cur);
        moved = true;
      }
    }
  }
  return cur;
}

std::vector<Cocharacter> RootDatum::dominant_weights_below(const Cocharacter& lambda) const {
  require_dominant(lambda);
  // Every dominant mu <= lambda is a weight of V_lambda, hence mu >= w0(lambda).
  // This bounds each simple-coroot coefficient of lambda - mu.
  Cocharacter lowest = lambda;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < semisimple_rank(); ++i) {
      if (pairing(simple_roots_[i], lowest) > 0) {
        lowest = simple_reflection(i, lowest);
        moved = true;
      }
    }
  }
  Cocharacter span(rank_);
  for (int i = 0; i < rank_; ++i) span[i] = lambda[i] - lowest[i];
  const auto bounds = coroot_coefficients(span);
  if (!bounds) throw DomainError("coroot_lattice", "lambda - w0(lambda) outside the coroot lattice");
  long long box = 1;
  for (long long b : *bounds) {
    box *= (b + 1);
    if (box > kMaxEnumerationBox) {
      throw ResourceError("dominant_weights_below(" + format_weight(lambda) +
                          ") search box exceeds " + std::to_string(kMaxEnumerationBox));
    }
  }
  std::vector<Cocharacter> out;
  const std::size_t s = simple_coroots_.size();
  std::vector<long long> n(s, 0);
  while (true) {
    Cocharacter mu = lambda;
    for (std::size_t j = 0; j < s; ++j)
      for (int k = 0; k < rank_; ++k) mu[k] -= static_cast<int>(n[j]) * simple_coroots_[j][k];
    if (is_dominant(mu)) out.push_back(std::move(mu));
    std::size_t j = 0;
    while (j < s && n[j] == (*bounds)[j]) n[j++] = 0;
    if (j == s) break;
    ++n[j];
  }
  sort_graded(out);
  return out;
}

long long RootDatum::rho_pairing_doubled(const Cocharacter& mu) const {
  check_length(mu, "weight");
  long long s = 0;
  for (int i = 0; i < rank_; ++i) s += two_rho_[i] * mu[i];
  return s;
}

std::vector<Cocharacter> RootDatum::weyl_orbit(const Cocharacter& mu) const {
  check_length(mu, "weight");
  std::set<Cocharacter> seen{mu};
  std::deque<Cocharacter> queue{mu};
  while (!queue.empty()) {
    const Cocharacter cur = queue.front();
    queue.pop_front();
    for (int i = 0; i < semisimple_rank(); ++i) {
      auto img = simple_reflection(i, cur);
      if (seen.insert(img).second) queue.push_back(std::move(img));
    }
  }
  std::vector<Cocharacter> out(seen.begin(), seen.end());
  sort_graded(out);
  return out;
}

bool RootDatum::graded_before(const Cocharacter& a, const Cocharacter& b) const {
  const long long ha = rho_pairing_doubled(a);
  const long long hb = rho_pairing_doubled(b);
  if (ha != hb) return ha > hb;
  return a > b;
}

void RootDatum::sort_graded(std::vector<Cocharacter>& ws) const {
  std::sort(ws.begin(), ws.end(),
            [this](const Cocharacter& a, const Cocharacter& b) { return graded_before(a, b); });
}

nlohmann::json RootDatum::to_json() const {
  nlohmann::json chars = nlohmann::json::object();
  for (const auto& [k, c] : characters_) chars[k] = c.coords;
  return {{"name", name_},
          {"rank", rank_},
          {"simple_roots", simple_roots_},
          {"simple_coroots", simple_coroots_},
          {"characters", chars}};
}

}  // namespace modtheta
