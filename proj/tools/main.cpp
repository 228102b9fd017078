#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "cli_support.hpp"
#include "json.hpp"
#include "modtheta/automorphic_weights.hpp"
#include "modtheta/errors.hpp"
#include "modtheta/galois_twist.hpp"
#include "modtheta/modp_forms.hpp"
#include "modtheta/rep_ring.hpp"
#include "modtheta/satake.hpp"

#ifndef MODTHETA_VERSION
#define MODTHETA_VERSION "0.0.0"
#endif

using namespace modtheta;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitDomain = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

// Inline JSON when the text starts with '{' or '[', a file path otherwise.
json json_arg(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what());
    }
  }
  return read_json_file(text);
}

RootDatumPtr datum_arg(const std::string& text) {
  if (text.empty()) throw DomainError("datum", "--datum is required");
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") return make_datum(RootDatum::from_json(read_json_file(text)));
  if (text.front() == '{') return make_datum(RootDatum::from_json(json_arg(text)));
  return make_datum(RootDatum::from_name(text));
}

Cocharacter weight_arg(const RootDatum& d, const std::string& text, const char* what) {
  if (text.empty()) throw DomainError("weight", std::string("--") + what + " is required");
  const auto w = parse_weight(text);
  d.check_length(w, what);
  return w;
}

std::vector<Cocharacter> weight_list_arg(const RootDatum& d, const std::string& text) {
  std::vector<Cocharacter> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(weight_arg(d, item, "domain"));
  return out;
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  for (int x : parse_weight(text)) out.push_back(x);
  return out;
}

// "C:2,1" (n per place), "A:2/1,1/1" (a/a_star per place) or JSON.
SignatureData sig_arg(const std::string& text) {
  if (text.empty()) throw DomainError("signature", "--sig is required");
  if (text.size() > 2 && text[1] == ':' && (text[0] == 'A' || text[0] == 'C')) {
    const std::string rest = text.substr(2);
    if (text[0] == 'C') return SignatureData::symplectic(int_list(rest));
    std::vector<std::pair<int, int>> pairs;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto slash = item.find('/');
      if (slash == std::string::npos) throw ParseError("case A places are written a/a_star, got '" + item + "'");
      pairs.emplace_back(std::stoi(item.substr(0, slash)), std::stoi(item.substr(slash + 1)));
    }
    return SignatureData::unitary(pairs);
  }
  return SignatureData::from_json(json_arg(text));
}

// Factors separated by ';', entries by ','.
AutWeight aut_weight_arg(const SignatureData& sig, const std::string& text, const char* what) {
  if (text.empty()) throw DomainError("weight", std::string("--") + what + " is required");
  AutWeight w;
  if (text.front() == '[') {
    w = AutWeight::from_json(json_arg(text));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) w.parts.push_back(int_list(item));
  }
  validate_weight(sig, w);
  return w;
}

std::string laurent_text(const LaurentV& x) { return x.to_string(); }

// Shared option state. Every subcommand reads the fields it declared.
struct Args {
  std::string format = "json";
  std::string config;
  std::uint64_t seed = acceptance::kDefaultSeed;
  unsigned jobs = 1;

  std::string datum;
  std::string weight;
  std::string left;
  std::string right;
  std::string mu;
  int power = 0;
  std::string mode = "tensor";
  long long q = 0;

  int p = 0;
  int ext_degree = 1;
  std::string sqrt_q;
  std::string coords;
  std::string domain;
  std::string eta;
  std::string t;
  std::string eigensystem;
  std::string psi1;
  std::string psi2;
  bool random = false;

  std::string sig;
  std::string kappa;
  std::string lambda;
  int e = 0;
  int lo = -2;
  int hi = 8;
  int max_abs = 8;

  int k = 12;
  int N = 50;
  std::string ell = "2";
  std::string form;  // empty: delta, or the whole basis for commcheck
  std::string input;
  std::string ring = "Fp";
  int iterations = 0;
  std::string fixtures;
};

// ---------------------------------------------------------------- root data

json cmd_rootdatum(const Args& a) {
  const auto d = datum_arg(a.datum);
  json out = d->to_json();
  out["weyl_order"] = d->weyl_group().size();
  out["positive_roots"] = d->positive_roots();
  out["positive_coroots"] = d->positive_coroots();
  out["two_rho_dual"] = d->two_rho_dual();
  return out;
}

json cmd_weights(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto lambda = weight_arg(*d, a.weight, "weight");
  json rows = json::array();
  for (const auto& mu : d->dominant_weights_below(lambda))
    rows.push_back({{"weight", mu}, {"two_rho_pairing", d->rho_pairing_doubled(mu)}});
  return {{"datum", d->name()}, {"weight", lambda}, {"below", rows}};
}

json cmd_mult(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto lambda = weight_arg(*d, a.weight, "weight");
  const auto table = weight_multiplicities(*d, lambda);
  std::vector<Cocharacter> order;
  for (const auto& [mu, m] : table->mults) order.push_back(mu);
  d->sort_graded(order);
  json rows = json::array();
  for (const auto& mu : order)
    rows.push_back({{"weight", mu}, {"mult", table->at(mu)}, {"orbit", d->weyl_orbit(mu).size()}});
  return {{"datum", d->name()}, {"weight", lambda}, {"dimension", dimension(*d, lambda)}, {"multiplicities", rows}};
}

json cmd_tensor(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto x = weight_arg(*d, a.left, "left");
  VirtualCharacter result;
  json out{{"datum", d->name()}, {"left", x}};
  if (a.power > 0) {
    const auto mode = parse_mode(a.mode);
    result = mode == ConstituentMode::Sym ? sym_power(*d, x, a.power) : tensor_power(*d, x, a.power);
    out["power"] = a.power;
    out["mode"] = a.mode;
  } else {
    const auto y = weight_arg(*d, a.right, "right");
    result = multiply(*d, VirtualCharacter::irreducible(x), VirtualCharacter::irreducible(y));
    out["right"] = y;
  }
  out["decomposition"] = result.to_json(*d).at("terms");
  out["dimension"] = virtual_dimension(*d, result);
  return out;
}

// ------------------------------------------------------------------- satake

json laurent_character_rows(const RootDatum& d, const LaurentCharacter& x) {
  std::vector<Cocharacter> order;
  for (const auto& [w, c] : x.terms) order.push_back(w);
  d.sort_graded(order);
  json rows = json::array();
  for (const auto& w : order) rows.push_back({{"weight", w}, {"coeff", laurent_text(x.coeff(w))}});
  return rows;
}

json hecke_rows(const HeckeElement& h, long long q) {
  std::vector<Cocharacter> order;
  for (const auto& [w, c] : h.terms) order.push_back(w);
  h.datum->sort_graded(order);
  json rows = json::array();
  for (const auto& w : order) {
    json row{{"weight", w}, {"coeff", laurent_text(h.coeff(w))}};
    if (q > 0) row["at_q"] = h.coeff(w).eval_q(q);
    rows.push_back(row);
  }
  return rows;
}

json cmd_satake(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto lambda = weight_arg(*d, a.weight, "weight");
  const auto s = satake(HeckeElement::basis(d, lambda));
  return {{"datum", d->name()}, {"c", lambda}, {"chi_terms", laurent_character_rows(*d, s)}, {"json", s.to_json(*d)}};
}

json cmd_satake_inv(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto lambda = weight_arg(*d, a.weight, "weight");
  LaurentCharacter chi;
  chi.add(lambda, LaurentV(1));
  const auto h = satake_inverse(d, chi);
  return {{"datum", d->name()}, {"chi", lambda}, {"c_terms", hecke_rows(h, a.q)}, {"json", h.to_json()}};
}

json cmd_hecke_mul(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto x = weight_arg(*d, a.left, "left");
  const auto y = weight_arg(*d, a.right, "right");
  const auto h = hecke_multiply(HeckeElement::basis(d, x), HeckeElement::basis(d, y));
  json out{{"datum", d->name()}, {"left", x}, {"right", y}, {"c_terms", hecke_rows(h, a.q)}, {"json", h.to_json()}};
  if (a.q > 0) out["q"] = a.q;
  return out;
}

json cmd_kl_poly(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto lambda = weight_arg(*d, a.weight, "weight");
  const auto mu = weight_arg(*d, a.mu, "mu");
  const auto k = lusztig_q_analog(*d, lambda, mu);
  json out{{"datum", d->name()}, {"lambda", lambda}, {"mu", mu}, {"poly", laurent_text(k)}, {"json", k.to_json()}};
  if (k.in_q()) out["at_q_1"] = k.eval_q(1);
  return out;
}

// -------------------------------------------------------------------- param

std::vector<Cocharacter> default_domain(const RootDatum& d) {
  if (d.name() == "gsp4") return {{2, 2, 2}, {2, 2, 1}, {2, 1, 1}, {1, 1, 1}};
  std::vector<Cocharacter> out;
  for (int i = 1; i <= d.rank(); ++i) {
    Cocharacter f(d.rank(), 0);
    std::fill(f.begin(), f.begin() + i, 1);
    out.push_back(f);
  }
  return out;
}

FieldPtr field_arg(const Args& a) {
  if (a.p == 0) throw DomainError("p_prime", "--p is required");
  return make_field(a.p, a.ext_degree);
}

FieldElem sqrt_arg(const FiniteField& F, const Args& a) {
  if (a.q <= 0) throw DomainError("q_positive", "--q is required");
  if (!a.sqrt_q.empty()) return F.from_int(std::stoll(a.sqrt_q));
  const auto r = F.sqrt(F.from_int(a.q));
  if (!r) throw DomainError("sqrt_q", "q = " + std::to_string(a.q) + " has no square root in F_" + std::to_string(F.p()) + "^" + std::to_string(F.k()));
  return *r;
}

TorusPoint point_arg(const RootDatumPtr& d, const FieldPtr& F, const Args& a) {
  std::vector<FieldElem> c;
  for (const auto& x : parse_weight(a.coords)) c.push_back(x);
  return TorusPoint(d, F, c);
}

CharacterOfG eta_arg(const RootDatum& d, const std::string& name) {
  if (!name.empty()) return d.character(name);
  return d.characters().count("nu") ? d.character("nu") : d.character("det");
}

json cmd_param_eval(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto F = field_arg(a);
  const auto s = point_arg(d, F, a);
  const auto domain = a.domain.empty() ? default_domain(*d) : weight_list_arg(*d, a.domain);
  const auto psi = eigensystem_from_point(s, domain, a.q, sqrt_arg(*F, a));
  json chars = json::array();
  for (const auto& [lambda, v] : psi.values) chars.push_back({{"weight", lambda}, {"chi", F->to_json(char_value(s, lambda))}});
  return {{"point", s.to_json()}, {"eigensystem", psi.to_json()}, {"characters", chars}};
}

json cmd_param_twist(const Args& a) {
  const auto d = datum_arg(a.datum);
  const auto F = field_arg(a);
  const auto s = point_arg(d, F, a);
  const auto eta = eta_arg(*d, a.eta);
  FieldElem t;
  if (!a.t.empty())
    t = F->from_int(std::stoll(a.t));
  else if (a.q > 0)
    t = F->from_int(a.q);
  else
    throw DomainError("twist_scalar", "give --t or --q");
  const auto twisted = twist_point(s, eta, t);
  return {{"point", s.to_json()}, {"eta", eta.name}, {"t", F->to_json(t)}, {"twisted", twisted.to_json()}};
}

json cmd_param_recover(const Args& a) {
  const auto psi = EigenSystem::from_json(json_arg(a.eigensystem));
  json orbit = json::array();
  for (const auto& s : point_from_eigensystem(psi)) orbit.push_back(s.to_json());
  json poly = json::array();
  for (auto c : characteristic_polynomial(psi)) poly.push_back(psi.field->to_json(c));
  return {{"characteristic_polynomial", poly}, {"orbit", orbit}};
}

json cmd_param_check_twist(const Args& a) {
  if (a.random) {
    std::mt19937_64 rng(a.seed);
    const auto d = a.datum.empty() ? datum_arg("gl2") : datum_arg(a.datum);
    const int p = a.p == 0 ? 5 : a.p;
    const auto F = make_field(p, a.ext_degree);
    long long q = a.q;
    std::optional<FieldElem> r;
    if (q > 0) {
      r = F->sqrt(F->from_int(q));
      if (!r) throw DomainError("sqrt_q", "q has no square root in the field");
    }
    while (!r) {
      q = 2 + static_cast<long long>(rng() % 40);
      r = q % p == 0 ? std::nullopt : F->sqrt(F->from_int(q));
    }
    std::vector<FieldElem> coords(d->rank());
    for (auto& c : coords) c = 1 + static_cast<FieldElem>(rng() % (F->order() - 1));
    const TorusPoint s(d, F, coords);
    const auto eta = eta_arg(*d, a.eta);
    const auto domain = a.domain.empty() ? default_domain(*d) : weight_list_arg(*d, a.domain);
    const auto psi1 = eigensystem_from_point(s, domain, q, *r);
    const auto psi2 = eigensystem_from_point(twist_point(s, eta, F->from_int(q)), domain, q, *r);
    const auto report = check_twist_theorem(psi1, psi2, eta);
    return {{"point", s.to_json()}, {"eta", eta.name}, {"report", report.to_json()}};
  }
  const auto psi1 = EigenSystem::from_json(json_arg(a.psi1));
  const auto psi2 = EigenSystem::from_json(json_arg(a.psi2));
  const auto eta = eta_arg(*psi1.datum, a.eta);
  const auto report = check_twist_theorem(psi1, psi2, eta);
  return {{"eta", eta.name}, {"report", report.to_json()}};
}

// ---------------------------------------------------------------------- adm

json cmd_adm_check(const Args& a) {
  const auto sig = sig_arg(a.sig);
  const auto w = aut_weight_arg(sig, a.weight, "weight");
  const bool admissible = is_admissible_characterized(sig, w);
  json out{{"signature", sig.to_json()}, {"weight", w.to_json()}, {"abs", abs_weight(w)},
           {"positive", is_positive(w)}, {"even", is_even(w)}, {"admissible", admissible}};
  if (sig.kind == SignatureCase::A) out["sum_symmetric"] = is_sum_symmetric(sig, w);
  if (admissible) out["depth"] = depth(sig, w);
  return out;
}

json cmd_adm_constituents(const Args& a) {
  const auto sig = sig_arg(a.sig);
  const auto mode = parse_mode(a.mode);
  const auto x = v_squared_power(sig, a.e, mode);
  const auto datum = sig.datum();
  json out{{"signature", sig.to_json()}, {"e", a.e}, {"mode", a.mode}, {"constituents", x.to_json(datum).at("terms")}};
  if (!a.weight.empty()) {
    const auto w = aut_weight_arg(sig, a.weight, "weight");
    out["weight"] = w.to_json();
    out["is_constituent"] = x.coeff(w.flatten()) > 0;
  }
  return out;
}

json cmd_adm_shift(const Args& a) {
  const auto sig = sig_arg(a.sig);
  const auto kappa = aut_weight_arg(sig, a.kappa, "kappa");
  const auto lambda = aut_weight_arg(sig, a.lambda, "lambda");
  const auto shifted = weight_shift(sig, kappa, lambda, a.p);
  return {{"kappa", kappa.to_json()}, {"lambda", lambda.to_json()}, {"p", a.p}, {"shifted", shifted.to_json()}};
}

json cmd_adm_depth(const Args& a) {
  const auto sig = sig_arg(a.sig);
  const auto w = aut_weight_arg(sig, a.weight, "weight");
  const long long e = depth(sig, w);
  return {{"weight", w.to_json()}, {"depth", e}};
}

json cmd_adm_reconcile(const Args& a) {
  const auto sig = sig_arg(a.sig);
  json out = reconcile_admissibility(sig, a.lo, a.hi, a.max_abs).to_json();
  out["signature"] = sig.to_json();
  out["range"] = {{"lo", a.lo}, {"hi", a.hi}, {"max_abs", a.max_abs}};
  return out;
}

// ----------------------------------------------------------------------- mf

std::vector<int> ell_list(const Args& a) { return int_list(a.ell); }

QExpansion form_arg(const Args& a, int N) {
  if (!a.input.empty()) return QExpansion::from_json(json_arg(a.input));
  const bool over_q = a.ring == "Q";
  if (!over_q && a.ring != "Fp") throw ParseError("--ring must be Q or Fp");
  if (a.form.empty() || a.form == "delta") return over_q ? delta(N) : delta_mod(a.p, N);
  if (a.form == "e4") return over_q ? eisenstein4(N) : eisenstein4_mod(a.p, N);
  if (a.form == "e6") return over_q ? eisenstein6(N) : eisenstein6_mod(a.p, N);
  if (a.form == "hasse") return hasse(a.p, N);
  if (a.form.rfind("basis:", 0) == 0) {
    const auto& b = basis(a.k, a.p, N);
    const std::size_t i = std::stoul(a.form.substr(6));
    if (i >= b.size()) throw DomainError("basis_index", "basis of weight " + std::to_string(a.k) + " has " + std::to_string(b.size()) + " elements");
    return b[i];
  }
  throw ParseError("--form must be delta, e4, e6, hasse or basis:<i>");
}

json cmd_mf_basis(const Args& a) {
  json forms = json::array();
  for (const auto& f : basis(a.k, a.p, a.N)) forms.push_back(f.to_json());
  return {{"p", a.p}, {"k", a.k}, {"dimension", dim_mk(a.k)}, {"sturm_bound", sturm_bound(a.k)}, {"basis", forms}};
}

json cmd_mf_theta(const Args& a) {
  const auto f = form_arg(a, a.N);
  const auto g = theta(f);
  return {{"input", f.to_json()}, {"theta", g.to_json()}};
}

json cmd_mf_hecke(const Args& a) {
  const auto ells = ell_list(a);
  int max_ell = 1;
  for (int l : ells) max_ell = std::max(max_ell, l);
  const auto f = form_arg(a, a.N * max_ell);
  json out = json::array();
  for (int l : ells) {
    const auto t = hecke_T(l, f);
    out.push_back({{"ell", l}, {"T_ell", t.to_json()}});
  }
  return {{"input_weight", f.weight()}, {"N", a.N}, {"results", out}};
}

json cmd_mf_filtration(const Args& a) {
  const auto f = form_arg(a, a.N);
  const int w = filtration(f);
  return {{"weight", f.weight()}, {"filtration", w}};
}

json cmd_mf_cycle(const Args& a) {
  const auto f = form_arg(a, a.N);
  const int iterations = a.iterations > 0 ? a.iterations : f.p() + 1;
  json out = theta_cycle(f, iterations).to_json();
  out["weight"] = f.weight();
  return out;
}

json cmd_mf_commcheck(const Args& a) {
  const auto ells = ell_list(a);
  int max_ell = 1;
  for (int l : ells) max_ell = std::max(max_ell, l);
  std::vector<QExpansion> forms;
  if (!a.input.empty() || (!a.form.empty() && a.form != "basis"))
    forms.push_back(form_arg(a, a.N * max_ell));
  else
    forms = basis(a.k, a.p, a.N * max_ell);
  struct Job {
    std::size_t form;
    int ell;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (int l : ells) jobs.push_back({i, l});
  const auto results = cli::parallel_map<int>(jobs.size(), a.jobs, [&](std::size_t i) {
    return commutation_check(forms[jobs[i].form], jobs[i].ell, a.N) ? 1 : 0;
  });
  bool ok = true;
  json rows = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ok = ok && results[i] == 1;
    rows.push_back({{"form", jobs[i].form}, {"ell", jobs[i].ell}, {"ok", results[i] == 1}});
  }
  return {{"ok", ok}, {"checks", rows}, {"N", a.N}};
}

json cmd_mf_twistcheck(const Args& a) {
  const auto ells = ell_list(a);
  int max_ell = 1;
  for (int l : ells) max_ell = std::max(max_ell, l);
  auto f = form_arg(a, a.N);
  const int needed = max_ell * sturm_bound(f.weight() + f.p() + 1);
  if (f.trunc() < needed && a.input.empty()) f = form_arg(a, needed);
  return eigen_twist_check(f, ells).to_json();
}

// ------------------------------------------------------------------- wiring

struct Command {
  CLI::App* app;
  std::function<json(const Args&)> run;
};

void add_datum(CLI::App* c, Args& a) { c->add_option("--datum", a.datum, "gl<n>, gsp<2n>, products joined by x, or a JSON file"); }

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  Args a;
  CLI::App app{"Spherical Hecke algebras, Satake parameters and mod-p theta operators"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", a.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--config", a.config, "JSON file of option defaults");
  app.add_option("--seed", a.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--jobs", a.jobs, "worker threads for sweeps")->capture_default_str();

  std::vector<Command> commands;
  const auto add = [&](CLI::App* parent, const std::string& name, const std::string& help,
                       std::function<json(const Args&)> run) {
    CLI::App* c = parent->add_subcommand(name, help);
    commands.push_back({c, std::move(run)});
    return c;
  };

  auto* c = add(&app, "rootdatum", "root datum summary", cmd_rootdatum);
  add_datum(c, a);
  c = add(&app, "weights", "dominant weights below a weight", cmd_weights);
  add_datum(c, a);
  c->add_option("--weight", a.weight);
  c = add(&app, "mult", "weight multiplicities", cmd_mult);
  add_datum(c, a);
  c->add_option("--weight", a.weight);
  c = add(&app, "tensor", "tensor product or power decomposition", cmd_tensor);
  add_datum(c, a);
  c->add_option("--left", a.left);
  c->add_option("--right", a.right);
  c->add_option("--power", a.power, "e-th power of --left instead of a product");
  c->add_option("--mode", a.mode, "tensor or sym")->capture_default_str();
  c = add(&app, "satake", "Satake transform of c_lambda", cmd_satake);
  add_datum(c, a);
  c->add_option("--weight", a.weight);
  c = add(&app, "satake-inv", "inverse Satake transform of chi_lambda", cmd_satake_inv);
  add_datum(c, a);
  c->add_option("--weight", a.weight);
  c->add_option("--q", a.q, "also evaluate at this q");
  c = add(&app, "hecke-mul", "product c_left * c_right", cmd_hecke_mul);
  add_datum(c, a);
  c->add_option("--left", a.left);
  c->add_option("--right", a.right);
  c->add_option("--q", a.q, "also evaluate at this q");
  c = add(&app, "kl-poly", "Lusztig q-analogue K_{lambda,mu}", cmd_kl_poly);
  add_datum(c, a);
  c->add_option("--weight", a.weight, "lambda");
  c->add_option("--mu", a.mu);

  CLI::App* param = app.add_subcommand("param", "Satake parameters over finite fields");
  param->require_subcommand(1);
  const auto field_opts = [&](CLI::App* s) {
    add_datum(s, a);
    s->add_option("--p", a.p);
    s->add_option("--ext-degree", a.ext_degree)->capture_default_str();
    s->add_option("--q", a.q);
    s->add_option("--sqrt-q", a.sqrt_q, "encoded field element; default: smallest root");
    s->add_option("--coords", a.coords, "encoded field elements, comma separated");
    s->add_option("--domain", a.domain, "weights separated by ';'");
    s->add_option("--eta", a.eta, "character of G; default nu, else det");
  };
  field_opts(add(param, "eval", "eigensystem of a torus point", cmd_param_eval));
  c = add(param, "twist", "twist a torus point by eta^(t)", cmd_param_twist);
  field_opts(c);
  c->add_option("--t", a.t, "twist scalar; default q");
  c = add(param, "recover", "Satake parameters of an eigensystem", cmd_param_recover);
  c->add_option("--eigensystem", a.eigensystem, "EigenSystem JSON (file or inline)");
  c = add(param, "check-twist", "compare two eigensystems against a twist", cmd_param_check_twist);
  field_opts(c);
  c->add_option("--psi1", a.psi1);
  c->add_option("--psi2", a.psi2);
  c->add_flag("--random", a.random, "build a seeded instance instead of reading files");

  CLI::App* adm = app.add_subcommand("adm", "automorphic weights");
  adm->require_subcommand(1);
  const auto sig_opt = [&](CLI::App* s) { s->add_option("--sig", a.sig, "C:n,... or A:a/a*,... or JSON"); };
  c = add(adm, "check", "predicates of a weight", cmd_adm_check);
  sig_opt(c);
  c->add_option("--weight", a.weight, "factors separated by ';'");
  c = add(adm, "constituents", "constituents of the e-th power of V^2", cmd_adm_constituents);
  sig_opt(c);
  c->add_option("--e", a.e);
  c->add_option("--mode", a.mode)->capture_default_str();
  c->add_option("--weight", a.weight);
  c = add(adm, "shift", "kappa + lambda + (p-1)|lambda|/2", cmd_adm_shift);
  sig_opt(c);
  c->add_option("--kappa", a.kappa);
  c->add_option("--lambda", a.lambda);
  c->add_option("--p", a.p);
  c = add(adm, "depth", "|lambda| / 2 of an admissible weight", cmd_adm_depth);
  sig_opt(c);
  c->add_option("--weight", a.weight);
  c = add(adm, "reconcile", "characterized predicate against both constituent modes", cmd_adm_reconcile);
  sig_opt(c);
  c->add_option("--lo", a.lo)->capture_default_str();
  c->add_option("--hi", a.hi)->capture_default_str();
  c->add_option("--max-abs", a.max_abs)->capture_default_str();

  CLI::App* mf = app.add_subcommand("mf", "mod-p modular forms of level one");
  mf->require_subcommand(1);
  const auto mf_opts = [&](CLI::App* s) {
    s->add_option("--p", a.p);
    s->add_option("--k", a.k)->capture_default_str();
    s->add_option("--N", a.N, "truncation")->capture_default_str();
    s->add_option("--form", a.form, "delta (default), e4, e6, hasse or basis:<i>");
    s->add_option("--input", a.input, "q-expansion JSON (file or inline)");
    s->add_option("--ring", a.ring, "Fp or Q")->capture_default_str();
  };
  mf_opts(add(mf, "basis", "E4^a E6^b Delta^c basis mod p", cmd_mf_basis));
  mf_opts(add(mf, "theta", "theta operator", cmd_mf_theta));
  c = add(mf, "hecke", "T_ell", cmd_mf_hecke);
  mf_opts(c);
  c->add_option("--ell", a.ell, "comma separated primes")->capture_default_str();
  mf_opts(add(mf, "filtration", "weight filtration", cmd_mf_filtration));
  c = add(mf, "cycle", "filtrations of theta iterates", cmd_mf_cycle);
  mf_opts(c);
  c->add_option("--iterations", a.iterations, "default p + 1");
  c = add(mf, "commcheck", "T_ell theta = ell theta T_ell on the weight-k basis or one form", cmd_mf_commcheck);
  mf_opts(c);
  c->add_option("--ell", a.ell)->capture_default_str();
  c = add(mf, "twistcheck", "eigenvalue twist of theta f", cmd_mf_twistcheck);
  mf_opts(c);
  c->add_option("--ell", a.ell)->capture_default_str();

  c = add(&app, "selftest", "run the acceptance suite", [](const Args& args) {
    acceptance::Options opts;
    opts.seed = args.seed;
    opts.fixture_dir = args.fixtures;
    json rows = json::array();
    int passed = 0;
    for (const auto& r : acceptance::run_all(opts, [](const auto& r) { std::cerr << acceptance::format_line(r) << '\n'; })) {
      passed += r.passed ? 1 : 0;
      json row = r.to_json();
      row.erase("seconds");
      rows.push_back(row);
    }
    return json{{"passed", passed}, {"failed", static_cast<int>(rows.size()) - passed}, {"criteria", rows}};
  });
  c->add_option("--fixtures", a.fixtures, "fixture directory");

  cli::attach_env(app);

  const auto usage_exit = [&](const CLI::ParseError& e) {
    if (app.exit(e) == 0) return kExitOk;
    std::cerr << app.help();
    return kExitUsage;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return usage_exit(e);
  }

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);
  int rc = kExitOk;
  json manifest;
  try {
    std::string config_path = a.config;
    if (!config_path.empty()) cli::apply_config(app, read_json_file(config_path));
    const Command* chosen = nullptr;
    for (const auto& cmd : commands)
      if (cmd.app->parsed()) chosen = &cmd;
    if (chosen == nullptr) {
      std::cerr << app.help();
      return kExitUsage;
    }
    manifest = {{"command", command_line}, {"config", cli::option_values(app)}, {"version", MODTHETA_VERSION},
                {"seed", a.seed}};
    json result = chosen->run(a);
    if (chosen->app->get_name() == "selftest" && result.at("failed").get<int>() > 0) rc = kExitFailed;
    std::cout << (a.format == "text" ? cli::render_text(result) : result.dump(2) + "\n");
  } catch (const ResourceError& e) {
    std::cerr << "error: resource: " << e.what() << '\n';
    rc = kExitResource;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    rc = kExitDomain;
  } catch (const CLI::ParseError& e) {
    rc = usage_exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: parse: invalid number (" << e.what() << ")\n";
    rc = kExitDomain;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: parse: number out of range (" << e.what() << ")\n";
    rc = kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    rc = kExitFailed;
  }
  if (manifest.is_null()) manifest = {{"command", command_line}, {"version", MODTHETA_VERSION}, {"seed", a.seed}};
  manifest["exit_code"] = rc;
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "manifest: " << manifest.dump() << '\n';
  return rc;
}
