/// @file config.hpp
/// Pipeline config parser. Flat `key = value` lines with [member] section
/// headers:
///
///   normalization = minmax        # or unify
///   combination = mean            # or maximum | max | median
///   outlier_fraction = 0.1
///
///   [member]
///   detector = knn
///   k = 5
///   reduction = mean
///
/// '#' starts a comment (full line or trailing), blank lines are skipped,
/// keys may not repeat within their scope. Member hyperparameters are
/// validated against the registry and defaults are filled.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "outlierkit/detail/text.hpp"
#include "outlierkit/ensemble.hpp"
#include "outlierkit/error.hpp"
#include "outlierkit/registry.hpp"

namespace outlierkit {

namespace detail {

inline Value config_value(std::string_view token) {
  if (auto i = parse_int64(token)) return Value{*i};
  if (auto d = parse_double(token)) return Value{*d};
  return Value{std::string(token)};
}

struct RawMember {
  std::size_t line = 0;
  std::optional<std::string> detector;
  Hyperparams params;
};

}  // namespace detail

inline EnsembleConfig parse_config(std::string_view text, const Registry& registry) {
  EnsembleConfig config;
  std::vector<detail::RawMember> members;
  std::set<std::string> top_keys;
  bool in_member = false;

  std::vector<std::string_view> lines = detail::split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;

    auto fail = [&](const std::string& what) -> Error {
      std::ostringstream msg;
      msg << "line " << ln + 1 << ": " << what;
      return Error(ErrorCode::parse_error, msg.str());
    };

    if (line == "[member]") {
      members.push_back(detail::RawMember{ln + 1, std::nullopt, {}});
      in_member = true;
      continue;
    }
    if (line.front() == '[') {
      throw fail("unknown section '" + std::string(line) + "'");
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw fail("expected 'key = value'");
    }
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw fail("empty key");
    if (value.empty()) throw fail("empty value for key '" + key + "'");

    if (in_member) {
      detail::RawMember& member = members.back();
      if (key == "detector") {
        if (member.detector) throw fail("duplicate 'detector' in member");
        member.detector = value;
      } else {
        if (member.params.contains(key)) throw fail("duplicate key '" + key + "' in member");
        member.params.emplace(key, detail::config_value(value));
      }
      continue;
    }

    if (!top_keys.insert(key).second) throw fail("duplicate key '" + key + "'");
    if (key == "normalization") {
      config.normalization = calibration_kind_from_string(value);
    } else if (key == "combination") {
      config.combination = combine_rule_from_string(value);
    } else if (key == "outlier_fraction") {
      std::optional<double> fraction = detail::parse_double(value);
      if (!fraction) throw fail("outlier_fraction must be a number, got '" + value + "'");
      if (!(*fraction > 0.0) || !(*fraction < 1.0)) {
        std::ostringstream msg;
        msg << "outlier_fraction must lie in (0, 1), got " << value;
        throw Error(ErrorCode::fraction_out_of_range, msg.str());
      }
      config.outlier_fraction = *fraction;
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }

  if (members.empty()) {
    throw Error(ErrorCode::parse_error, "config defines no [member] sections");
  }
  for (const detail::RawMember& raw : members) {
    if (!raw.detector) {
      std::ostringstream msg;
      msg << "member starting at line " << raw.line << " has no 'detector' key";
      throw Error(ErrorCode::parse_error, msg.str());
    }
    config.members.push_back(registry.validate_spec(*raw.detector, raw.params));
  }
  return config;
}

inline EnsembleConfig parse_config(std::string_view text) {
  return parse_config(text, builtin_registry());
}

}  // namespace outlierkit
