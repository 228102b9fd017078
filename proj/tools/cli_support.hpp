#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace modtheta::cli {

inline constexpr const char* kEnvPrefix = "MODTHETA_";

/// MODTHETA_<NAME> for every long option below app, dashes turned into
/// underscores (--sqrt-q -> MODTHETA_SQRT_Q).
void attach_env(CLI::App& app);

/// Fill options that were neither given on the command line nor through the
/// environment from a flat JSON object keyed by long option name.
void apply_config(CLI::App& app, const nlohmann::json& config);

/// Effective option values of the invoked subcommand chain.
nlohmann::json option_values(const CLI::App& app);

/// Aligned key/value text with arrays of objects rendered as tables.
std::string render_text(const nlohmann::json& doc);

/// Runs fn(i) for i in [0, n) on at most jobs threads. Results keep input order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += jobs) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace modtheta::cli
