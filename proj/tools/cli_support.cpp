#include "cli_support.hpp"

#include <cctype>
#include <sstream>

#include "modtheta/errors.hpp"

namespace modtheta::cli {

namespace {

std::string env_name(const std::string& lname) {
  std::string out = kEnvPrefix;
  for (char c : lname) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

// Config values arrive as JSON; options take strings. Weights are written
// either as "1,0,-1" or as [1,0,-1]; weight lists as [[1,0],[1,1]] -> "1,0;1,1".
std::string config_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_object()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += v[i].is_array() ? ";" : ",";
      out += config_string(v[i]);
    }
    return out;
  }
  return v.dump();
}

void visit_chain(const CLI::App& app, const std::function<void(const CLI::App&)>& fn) {
  fn(app);
  for (const CLI::App* sub : app.get_subcommands()) visit_chain(*sub, fn);
}

void visit_chain(CLI::App& app, const std::function<void(CLI::App&)>& fn) {
  fn(app);
  for (CLI::App* sub : app.get_subcommands()) visit_chain(*sub, fn);
}

std::string cell(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

bool is_table(const nlohmann::json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& row : v)
    if (!row.is_object()) return false;
  return true;
}

void render_table(std::ostringstream& out, const nlohmann::json& rows, const std::string& indent) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, _] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    width[c] = cols[c].size();
    for (const auto& row : rows)
      if (row.contains(cols[c])) width[c] = std::max(width[c], cell(row[cols[c]]).size());
  }
  const auto line = [&](const std::function<std::string(std::size_t)>& text) {
    out << indent;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string s = text(c);
      out << s;
      if (c + 1 < cols.size()) out << std::string(width[c] - s.size() + 2, ' ');
    }
    out << '\n';
  };
  line([&](std::size_t c) { return cols[c]; });
  for (const auto& row : rows) line([&](std::size_t c) { return row.contains(cols[c]) ? cell(row[cols[c]]) : ""; });
}

void render(std::ostringstream& out, const nlohmann::json& doc, const std::string& indent) {
  if (!doc.is_object()) {
    if (is_table(doc))
      render_table(out, doc, indent);
    else
      out << indent << cell(doc) << '\n';
    return;
  }
  std::size_t key_width = 0;
  for (const auto& [k, v] : doc.items())
    if (!v.is_object() && !is_table(v)) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : doc.items()) {
    if (v.is_object() || is_table(v)) {
      out << indent << k << ":\n";
      render(out, v, indent + "  ");
    } else {
      out << indent << k << std::string(key_width - k.size() + 2, ' ') << cell(v) << '\n';
    }
  }
}

}  // namespace

void attach_env(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" || !opt->get_envname().empty()) continue;
    opt->envname(env_name(opt->get_lnames().front()));
  }
  for (CLI::App* sub : app.get_subcommands({})) attach_env(*sub);
}

void apply_config(CLI::App& app, const nlohmann::json& config) {
  if (!config.is_object()) throw ParseError("config file must hold a JSON object");
  visit_chain(app, [&](CLI::App& a) {
    for (CLI::Option* opt : a.get_options()) {
      if (opt->count() > 0 || opt->get_lnames().empty()) continue;
      const auto it = config.find(opt->get_lnames().front());
      if (it == config.end()) continue;
      opt->add_result(config_string(*it));
      opt->run_callback();
    }
  });
}

nlohmann::json option_values(const CLI::App& app) {
  nlohmann::json out = nlohmann::json::object();
  visit_chain(app, [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
        out[name] = joined;
      } else if (!opt->get_default_str().empty()) {
        out[name] = opt->get_default_str();
      }
    }
  });
  return out;
}

std::string render_text(const nlohmann::json& doc) {
  std::ostringstream out;
  render(out, doc, "");
  return out.str();
}

}  // namespace modtheta::cli
