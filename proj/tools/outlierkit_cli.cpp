// outlierkit command-line interface.
//
// Subcommands:
//   list      detector catalog (table or machine-readable)
//   score     write raw + probability scores for a test CSV
//   labels    write normal/outlier labels for a test CSV
//   evaluate  benchmark a pipeline on a manifest dataset with a seeded split
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error. All output is
// deterministic: identical inputs (files, flags, seed) produce byte-identical
// stdout and output files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "outlierkit/outlierkit.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS_SUPPRESSION_IN_HEADER 1
#include <httplib.h>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace outlierkit;

namespace {

std::string read_input_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::transport_error, "cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::transport_error, "cannot write '" + path + "'");
  }
  out << content;
}

/// Default transport: file:<path> reads the local filesystem (relative paths
/// resolve against the working directory); http://host[:port]/path goes over
/// the network.
std::string default_transport(const std::string& url) {
  if (url.rfind("file:", 0) == 0) {
    return read_input_file(url.substr(5));
  }
  if (url.rfind("http://", 0) == 0) {
    std::string rest = url.substr(7);
    std::size_t slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    httplib::Client client(host);
    auto response = client.Get(path);
    if (!response) {
      throw Error(ErrorCode::transport_error,
                  "GET " + url + " failed: " + httplib::to_string(response.error()));
    }
    if (response->status != 200) {
      throw Error(ErrorCode::transport_error,
                  "GET " + url + " returned status " + std::to_string(response->status));
    }
    return response->body;
  }
  throw Error(ErrorCode::transport_error,
              "unsupported url scheme in '" + url + "' (use file: or http://)");
}

EnsembleConfig load_config(const std::string& path) {
  return parse_config(read_input_file(path), builtin_registry());
}

Dataset load_feature_csv(const std::string& path) {
  return parse_csv(read_input_file(path), std::nullopt, "1");
}

ordered_json value_to_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

int cmd_list(const std::string& format, bool no_builtin) {
  Registry empty;
  const Registry& registry = no_builtin ? empty : builtin_registry();
  std::vector<DetectorMetadata> detectors = registry.list_detectors();

  if (format == "machine") {
    for (const DetectorMetadata& meta : detectors) {
      ordered_json j;
      j["name"] = meta.name;
      j["supervision"] = std::string(to_string(meta.supervision));
      j["package"] = meta.package_tag;
      ordered_json params = ordered_json::array();
      for (const ParamSchema& p : meta.hyperparameters) {
        ordered_json pj;
        pj["name"] = p.name;
        pj["type"] = std::string(to_string(p.type));
        pj["constraint"] = p.constraint;
        pj["required"] = p.required();
        if (p.default_value) pj["default"] = value_to_json(*p.default_value);
        if (!p.choices.empty()) pj["choices"] = p.choices;
        params.push_back(pj);
      }
      j["hyperparameters"] = params;
      std::cout << j.dump() << '\n';
    }
    return 0;
  }

  if (detectors.empty()) {
    std::cout << "no detectors registered\n";
    return 0;
  }
  std::cout << "name    package     supervision   hyperparameters\n";
  for (const DetectorMetadata& meta : detectors) {
    std::ostringstream params;
    for (std::size_t i = 0; i < meta.hyperparameters.size(); ++i) {
      const ParamSchema& p = meta.hyperparameters[i];
      if (i > 0) params << ", ";
      params << p.name << " (" << p.constraint;
      if (p.default_value) {
        params << ", default " << value_to_string(*p.default_value);
      } else {
        params << ", required";
      }
      params << ")";
    }
    std::ostringstream line;
    line.setf(std::ios::left);
    line.width(8);
    line << meta.name;
    line.width(12);
    line << meta.package_tag;
    line.width(14);
    line << to_string(meta.supervision);
    std::cout << line.str() << params.str() << '\n';
  }
  return 0;
}

int cmd_score(const std::string& config_path, const std::string& train_path,
              const std::string& test_path, const std::string& out_path) {
  EnsembleConfig config = load_config(config_path);
  Dataset train = load_feature_csv(train_path);
  Dataset test = load_feature_csv(test_path);

  FittedEnsemble fitted = fit_ensemble(builtin_registry(), config, train);
  ScoreVector probabilities = predict_proba(fitted, test);

  // single member: the raw column is that detector's raw scores; otherwise
  // raw scales are incomparable and the combined normalized score stands in
  ScoreVector raw;
  if (fitted.members.size() == 1) {
    raw = score(fitted.members[0], test);
  } else {
    raw = probabilities;
  }

  std::ostringstream out;
  out << "index,raw,probability\n";
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    out << i << ',' << outlierkit::detail::format_double(raw[i]) << ','
        << outlierkit::detail::format_double(probabilities[i]) << '\n';
  }
  write_output_file(out_path, out.str());
  return 0;
}

int cmd_labels(const std::string& config_path, const std::string& train_path,
               const std::string& test_path, const std::string& out_path) {
  EnsembleConfig config = load_config(config_path);
  Dataset train = load_feature_csv(train_path);
  Dataset test = load_feature_csv(test_path);

  FittedEnsemble fitted = fit_ensemble(builtin_registry(), config, train);
  std::vector<Label> labels = predict_labels(fitted, test);

  std::ostringstream out;
  out << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << ',' << to_string(labels[i]) << '\n';
  }
  write_output_file(out_path, out.str());
  return 0;
}

/// Fisher-Yates permutation driven by std::mt19937_64 (whose output sequence
/// the C++ standard pins down), so splits are portable across platforms:
///   for i = n-1 .. 1: j = next() % (i + 1); swap(perm[i], perm[j])
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

int cmd_evaluate(const std::string& config_path, const std::string& dataset_name,
                 const std::string& manifest_path, const std::string& cache_flag,
                 double split_fraction, std::uint64_t seed) {
  EnsembleConfig config = load_config(config_path);

  std::string cache_root = cache_flag;
  if (cache_root.empty()) {
    if (const char* env = std::getenv("OUTLIERKIT_CACHE")) cache_root = env;
  }
  if (cache_root.empty()) {
    throw Error(ErrorCode::transport_error,
                "no cache root: pass --cache or set OUTLIERKIT_CACHE");
  }

  std::vector<ManifestEntry> manifest = load_manifest(read_input_file(manifest_path));
  Dataset dataset = load_dataset(dataset_name, manifest, cache_root, default_transport);
  if (!dataset.labels) {
    throw Error(ErrorCode::missing_label_column,
                "dataset '" + dataset_name + "' has no ground-truth labels");
  }

  std::size_t n = dataset.size();
  auto n_train = static_cast<std::size_t>(
      std::floor(split_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    std::ostringstream msg;
    msg << "split " << split_fraction << " leaves an empty train or test set (n=" << n << ")";
    throw Error(ErrorCode::fraction_out_of_range, msg.str());
  }

  std::vector<std::size_t> perm = seeded_permutation(n, seed);
  std::size_t d = dataset.dimension();
  Matrix train_features(n_train, d);
  Matrix test_features(n - n_train, d);
  std::vector<Label> test_labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t row = perm[i];
    if (i < n_train) {
      for (std::size_t j = 0; j < d; ++j) train_features(i, j) = dataset.features(row, j);
    } else {
      for (std::size_t j = 0; j < d; ++j) {
        test_features(i - n_train, j) = dataset.features(row, j);
      }
      test_labels.push_back((*dataset.labels)[row]);
    }
  }

  std::size_t outliers_in_test = 0;
  for (Label l : test_labels) {
    if (l == Label::outlier) ++outliers_in_test;
  }
  if (outliers_in_test == 0 || outliers_in_test == test_labels.size()) {
    throw Error(ErrorCode::single_class,
                "test split contains a single class; try a different seed or split fraction");
  }

  Dataset train = validate_dataset(std::move(train_features));
  Dataset test = validate_dataset(std::move(test_features));

  FittedEnsemble fitted = fit_ensemble(builtin_registry(), config, train);
  ScoreVector probabilities = predict_proba(fitted, test);
  std::vector<Label> predicted = predict_labels(fitted, test);

  double auc = roc_auc(probabilities, test_labels);
  double precision = precision_at_n(probabilities, test_labels, outliers_in_test);
  ConfusionCounts counts = confusion_counts(predicted, test_labels);

  std::cout << "dataset = " << dataset_name << '\n'
            << "seed = " << seed << '\n'
            << "split_fraction = " << outlierkit::detail::format_double(split_fraction) << '\n'
            << "n_train = " << n_train << '\n'
            << "n_test = " << test_labels.size() << '\n'
            << "n_outliers_test = " << outliers_in_test << '\n'
            << "roc_auc = " << outlierkit::detail::format_double(auc) << '\n'
            << "precision_at_n = " << outlierkit::detail::format_double(precision) << '\n'
            << "tp = " << counts.tp << '\n'
            << "fp = " << counts.fp << '\n'
            << "tn = " << counts.tn << '\n'
            << "fn = " << counts.fn << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"outlierkit: outlier detection pipelines from the command line"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered detectors");
  std::string format = "table";
  list->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}));
  bool no_builtin = false;
  list->add_flag("--no-builtin", no_builtin)->group("");  // test hook, hidden

  std::string config_path;
  std::string train_path;
  std::string test_path;
  std::string out_path;
  auto add_pipeline_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline config file")->required();
    cmd->add_option("--train", train_path, "Training CSV (features only)")->required();
    cmd->add_option("--test", test_path, "Test CSV (features only)")->required();
    cmd->add_option("--out", out_path, "Output CSV path")->required();
  };
  auto* score_cmd = app.add_subcommand("score", "Write raw scores and probabilities");
  add_pipeline_options(score_cmd);
  auto* labels_cmd = app.add_subcommand("labels", "Write normal/outlier labels");
  add_pipeline_options(labels_cmd);

  auto* evaluate = app.add_subcommand("evaluate", "Benchmark a pipeline on a dataset");
  std::string dataset_name;
  std::string manifest_path;
  std::string cache_root;
  double split_fraction = 0.7;
  std::uint64_t seed = 0;
  evaluate->add_option("--config", config_path, "Pipeline config file")->required();
  evaluate->add_option("--dataset", dataset_name, "Dataset name from the manifest")->required();
  evaluate->add_option("--manifest", manifest_path, "Manifest file")->required();
  evaluate->add_option("--cache", cache_root, "Cache root (or env OUTLIERKIT_CACHE)");
  evaluate->add_option("--split", split_fraction, "Train fraction of the seeded shuffle");
  evaluate->add_option("--seed", seed, "Shuffle seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) return cmd_list(format, no_builtin);
    if (score_cmd->parsed()) return cmd_score(config_path, train_path, test_path, out_path);
    if (labels_cmd->parsed()) return cmd_labels(config_path, train_path, test_path, out_path);
    if (evaluate->parsed()) {
      return cmd_evaluate(config_path, dataset_name, manifest_path, cache_root, split_fraction,
                          seed);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
