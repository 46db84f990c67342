/// @file registry.hpp
/// Detector discovery: metadata, hyperparameter validation with defaults,
/// and name-based fitting. Built-in detectors register once, lazily, so the
/// registry contents never depend on initialization order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/error.hpp"
#include "outlierkit/histogram.hpp"
#include "outlierkit/neighbors.hpp"

namespace outlierkit {

enum class Supervision { unsupervised };

inline std::string_view to_string(Supervision) { return "unsupervised"; }

enum class ParamType { integer, real, choice };

inline std::string_view to_string(ParamType type) {
  switch (type) {
    case ParamType::integer: return "integer";
    case ParamType::real: return "real";
    case ParamType::choice: return "choice";
  }
  return "integer";
}

/// Declared hyperparameter: type, human-readable constraint, machine check,
/// and either a default or a required flag.
struct ParamSchema {
  std::string name;
  ParamType type = ParamType::integer;
  std::string constraint;
  std::optional<Value> default_value;  // nullopt => required
  std::vector<std::string> choices;    // for ParamType::choice
  std::function<bool(const Value&)> check;

  bool required() const noexcept { return !default_value.has_value(); }
};

struct DetectorMetadata {
  std::string name;
  Supervision supervision = Supervision::unsupervised;
  std::vector<ParamSchema> hyperparameters;
  std::string package_tag;
};

/// A detector name plus canonical hyperparameters (defaults filled).
struct DetectorSpec {
  std::string name;
  Hyperparams params;
};

using DetectorConstructor = std::function<FitOutcome(const Hyperparams&, const Dataset&)>;

class Registry {
 public:
  void register_detector(DetectorMetadata meta, DetectorConstructor constructor) {
    if (entries_.contains(meta.name)) {
      throw Error(ErrorCode::duplicate_name, "detector '" + meta.name + "' is already registered");
    }
    std::string name = meta.name;
    entries_.emplace(std::move(name), Entry{std::move(meta), std::move(constructor)});
  }

  bool contains(const std::string& name) const { return entries_.contains(name); }

  const DetectorMetadata& metadata(const std::string& name) const {
    return entry(name).meta;
  }

  /// All registered detectors, sorted by name ascending.
  std::vector<DetectorMetadata> list_detectors(
      std::optional<Supervision> filter = std::nullopt) const {
    std::vector<DetectorMetadata> out;
    for (const auto& [name, entry] : entries_) {
      if (filter && entry.meta.supervision != *filter) continue;
      out.push_back(entry.meta);
    }
    return out;  // std::map iteration is already name-ascending
  }

  /// Rejects unknown parameters and constraint violations, canonicalizes
  /// value types, and fills defaults.
  DetectorSpec validate_spec(const std::string& name, const Hyperparams& params) const {
    const Entry& e = entry(name);
    DetectorSpec spec{name, {}};
    for (const auto& [key, value] : params) {
      const ParamSchema* schema = find_schema(e.meta, key);
      if (schema == nullptr) {
        throw Error(ErrorCode::unknown_parameter,
                    "detector '" + name + "' has no parameter '" + key + "'");
      }
      Value canonical = canonicalize(*schema, value);
      if (schema->check && !schema->check(canonical)) {
        throw Error(ErrorCode::constraint_violation,
                    key + ": constraint violated (" + schema->constraint + "), got " +
                        value_to_string(value));
      }
      spec.params.emplace(key, std::move(canonical));
    }
    for (const ParamSchema& schema : e.meta.hyperparameters) {
      if (spec.params.contains(schema.name)) continue;
      if (schema.required()) {
        throw Error(ErrorCode::constraint_violation,
                    schema.name + " is required (" + schema.constraint + ")");
      }
      spec.params.emplace(schema.name, *schema.default_value);
    }
    return spec;
  }

  /// Fits a validated spec. Use outlierkit::fit for the full
  /// validate-then-fit path.
  FitOutcome construct(const DetectorSpec& spec, const Dataset& train) const {
    return entry(spec.name).constructor(spec.params, train);
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    DetectorMetadata meta;
    DetectorConstructor constructor;
  };

  const Entry& entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
      throw Error(ErrorCode::unknown_detector, "no detector named '" + name + "'");
    }
    return it->second;
  }

  static const ParamSchema* find_schema(const DetectorMetadata& meta, const std::string& key) {
    for (const ParamSchema& schema : meta.hyperparameters) {
      if (schema.name == key) return &schema;
    }
    return nullptr;
  }

  static Value canonicalize(const ParamSchema& schema, const Value& value) {
    switch (schema.type) {
      case ParamType::integer: {
        if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
        if (const auto* d = std::get_if<double>(&value)) {
          if (*d == std::floor(*d) && std::abs(*d) < 9.2e18) {
            return static_cast<std::int64_t>(*d);
          }
        }
        throw Error(ErrorCode::constraint_violation,
                    schema.name + " must be an integer (" + schema.constraint + "), got " +
                        value_to_string(value));
      }
      case ParamType::real: {
        if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
        if (const auto* d = std::get_if<double>(&value)) return *d;
        throw Error(ErrorCode::constraint_violation,
                    schema.name + " must be a real number (" + schema.constraint + "), got " +
                        value_to_string(value));
      }
      case ParamType::choice: {
        if (const auto* s = std::get_if<std::string>(&value)) {
          if (std::find(schema.choices.begin(), schema.choices.end(), *s) !=
              schema.choices.end()) {
            return *s;
          }
        }
        throw Error(ErrorCode::constraint_violation,
                    schema.name + ": constraint violated (" + schema.constraint + "), got " +
                        value_to_string(value));
      }
    }
    throw Error(ErrorCode::constraint_violation, "unhandled parameter type");
  }

  std::map<std::string, Entry> entries_;
};

namespace detail {

inline std::int64_t int_param(const Hyperparams& params, const std::string& name) {
  return std::get<std::int64_t>(params.at(name));
}

inline double real_param(const Hyperparams& params, const std::string& name) {
  return std::get<double>(params.at(name));
}

inline std::string string_param(const Hyperparams& params, const std::string& name) {
  return std::get<std::string>(params.at(name));
}

inline Registry make_builtin_registry() {
  Registry registry;

  auto positive_int = [](const Value& v) { return std::get<std::int64_t>(v) >= 1; };

  registry.register_detector(
      DetectorMetadata{
          "knn",
          Supervision::unsupervised,
          {ParamSchema{"k", ParamType::integer, "k >= 1", Value{std::int64_t{5}}, {}, positive_int},
           ParamSchema{"reduction", ParamType::choice, "reduction in {maximum, mean, median}",
                       Value{std::string{"mean"}}, {"maximum", "mean", "median"}, nullptr}},
          "neighbors"},
      [](const Hyperparams& params, const Dataset& train) {
        KnnParams p;
        p.k = static_cast<std::size_t>(int_param(params, "k"));
        p.reduction = knn_reduction_from_string(string_param(params, "reduction"));
        return fit_knn(train, p);
      });

  registry.register_detector(
      DetectorMetadata{
          "lof",
          Supervision::unsupervised,
          {ParamSchema{"k", ParamType::integer, "k >= 1", Value{std::int64_t{5}}, {}, positive_int}},
          "neighbors"},
      [](const Hyperparams& params, const Dataset& train) {
        LofParams p;
        p.k = static_cast<std::size_t>(int_param(params, "k"));
        return fit_lof(train, p);
      });

  registry.register_detector(
      DetectorMetadata{
          "dnn",
          Supervision::unsupervised,
          {ParamSchema{"radius", ParamType::real, "radius > 0", std::nullopt, {},
                       [](const Value& v) { return std::get<double>(v) > 0.0; }}},
          "neighbors"},
      [](const Hyperparams& params, const Dataset& train) {
        DnnParams p;
        p.radius = real_param(params, "radius");
        return fit_dnn(train, p);
      });

  registry.register_detector(
      DetectorMetadata{
          "hbos",
          Supervision::unsupervised,
          {ParamSchema{"bins", ParamType::integer, "bins >= 1", Value{std::int64_t{10}}, {},
                       positive_int}},
          "histogram"},
      [](const Hyperparams& params, const Dataset& train) {
        HbosParams p;
        p.bins = static_cast<std::size_t>(int_param(params, "bins"));
        return fit_hbos(train, p);
      });

  return registry;
}

}  // namespace detail

/// Process-wide registry of the shipped detectors (dnn, hbos, knn, lof).
inline const Registry& builtin_registry() {
  static const Registry registry = detail::make_builtin_registry();
  return registry;
}

/// Validates the spec against the registry, then fits. Validation problems
/// surface as invalid_hyperparameter; an unknown name stays unknown_detector.
inline FitResult fit(const Registry& registry, const DetectorSpec& spec, const Dataset& train) {
  DetectorSpec canonical;
  try {
    canonical = registry.validate_spec(spec.name, spec.params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::unknown_parameter || e.code() == ErrorCode::constraint_violation) {
      throw Error(ErrorCode::invalid_hyperparameter, e.message());
    }
    throw;
  }
  if (train.size() == 0 || train.dimension() == 0) {
    throw Error(ErrorCode::insufficient_data, "training set is empty");
  }
  FitOutcome outcome = registry.construct(canonical, train);
  return FitResult{std::move(outcome.model), std::move(outcome.train_scores), canonical.name,
                   std::move(canonical.params)};
}

inline FitResult fit(const DetectorSpec& spec, const Dataset& train) {
  return fit(builtin_registry(), spec, train);
}

}  // namespace outlierkit
