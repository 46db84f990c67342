/// @file data.hpp
/// Benchmark dataset ingestion: CSV parsing, the dataset manifest, checksum
/// verified fetching with a local cache, and the unified load_dataset entry
/// point.
///
/// Transports are injected (url -> payload bytes), so everything here is
/// testable without a network. Cache files land at <cache_root>/<name>.csv
/// and are written via temp-file-plus-rename; a checksum mismatch never
/// leaves anything at the final path.

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/detail/sha256.hpp"
#include "outlierkit/detail/text.hpp"
#include "outlierkit/error.hpp"

namespace outlierkit {

/// Catalog entry for one benchmark dataset. A label_column of "-" means the
/// dataset ships without ground truth.
struct ManifestEntry {
  std::string name;
  std::string url;
  std::string sha256;
  std::string label_column;
  std::string positive_label;

  bool has_labels() const noexcept { return label_column != "-"; }
};

struct CacheEntry {
  std::string name;
  std::filesystem::path path;
  bool verified = false;
};

using Transport = std::function<std::string(const std::string& url)>;

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::transport_error, "cannot open file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::transport_error, "cannot write file '" + path.string() + "'");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::transport_error, "short write to '" + path.string() + "'");
  }
}

}  // namespace detail

/// Parses header-first CSV. With a label column, its values are compared
/// against positive_label (match -> outlier) and the column is removed from
/// the features; without one, every column must be numeric. Rows and
/// columns in error messages are 0-based file coordinates (header = row 0).
inline Dataset parse_csv(std::string_view text, const std::optional<std::string>& label_column,
                         std::string_view positive_label) {
  std::vector<std::string_view> lines = detail::split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::empty_data, "csv has no header row");
  }
  std::vector<std::string_view> header = detail::split(lines[0], ',');
  std::size_t total_cols = header.size();

  std::optional<std::size_t> label_idx;
  if (label_column) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == *label_column) {
        label_idx = j;
        break;
      }
    }
    if (!label_idx) {
      throw Error(ErrorCode::missing_label_column,
                  "csv header has no column named '" + *label_column + "'");
    }
  }

  std::size_t d = total_cols - (label_idx ? 1 : 0);
  if (d == 0) {
    throw Error(ErrorCode::empty_data, "csv has no feature columns");
  }
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t j = 0; j < total_cols; ++j) {
    if (label_idx && j == *label_idx) continue;
    names.emplace_back(header[j]);
  }

  std::size_t n = lines.size() - 1;
  Matrix features(n, d);
  std::vector<Label> labels;
  if (label_idx) labels.reserve(n);

  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string_view> fields = detail::split(lines[r + 1], ',');
    if (fields.size() != total_cols) {
      std::ostringstream msg;
      msg << "row " << r + 1 << ": expected " << total_cols << " fields, got " << fields.size();
      throw Error(ErrorCode::malformed_row, msg.str());
    }
    std::size_t out_col = 0;
    for (std::size_t j = 0; j < total_cols; ++j) {
      if (label_idx && j == *label_idx) {
        labels.push_back(fields[j] == positive_label ? Label::outlier : Label::normal);
        continue;
      }
      std::optional<double> value = detail::parse_double(fields[j]);
      if (!value || !std::isfinite(*value)) {
        std::ostringstream msg;
        msg << "row " << r + 1 << ", column " << j << ": '" << fields[j]
            << "' is not a finite number";
        throw Error(ErrorCode::non_numeric_feature, msg.str());
      }
      features(r, out_col++) = *value;
    }
  }

  if (n == 0) {
    // Header-only files are legal inputs for scoring commands; skip the
    // n >= 1 validation but keep the name checks.
    Dataset ds;
    ds.features = std::move(features);
    if (label_idx) ds.labels = std::move(labels);
    ds.feature_names = std::move(names);
    std::unordered_set<std::string> seen;
    for (const auto& name : *ds.feature_names) {
      if (name.empty() || !seen.insert(name).second) {
        throw Error(ErrorCode::duplicate_feature_name,
                    "duplicate or empty feature name '" + name + "'");
      }
    }
    return ds;
  }
  return validate_dataset(std::move(features),
                          label_idx ? std::optional(std::move(labels)) : std::nullopt,
                          std::move(names));
}

/// CSV writer matching parse_csv: feature columns (named x0.. if the
/// dataset has no names) plus a trailing "label" column when ground truth
/// is present. Doubles render shortest-round-trip, so parse(serialize(ds))
/// reproduces ds exactly.
inline std::string serialize_csv(const Dataset& dataset) {
  std::ostringstream out;
  std::size_t d = dataset.dimension();
  for (std::size_t j = 0; j < d; ++j) {
    if (j > 0) out << ',';
    if (dataset.feature_names) {
      out << (*dataset.feature_names)[j];
    } else {
      out << 'x' << j;
    }
  }
  if (dataset.labels) out << (d > 0 ? "," : "") << "label";
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (j > 0) out << ',';
      out << detail::format_double(dataset.features(i, j));
    }
    if (dataset.labels) out << ',' << to_string((*dataset.labels)[i]);
    out << '\n';
  }
  return out.str();
}

/// Manifest format: one entry per line,
///   name<TAB>url<TAB>sha256<TAB>label_column<TAB>positive_label
/// '#' comments and blank lines are skipped. Line numbers are 1-based.
inline std::vector<ManifestEntry> load_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::vector<std::string_view> lines = detail::split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = detail::split(line, '\t');
    if (fields.size() != 5) {
      std::ostringstream msg;
      msg << "line " << ln + 1 << ": expected 5 tab-separated fields, got " << fields.size();
      throw Error(ErrorCode::parse_error, msg.str());
    }
    ManifestEntry entry{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                        std::string(fields[3]), std::string(fields[4])};
    if (entry.name.empty()) {
      std::ostringstream msg;
      msg << "line " << ln + 1 << ": dataset name is empty";
      throw Error(ErrorCode::parse_error, msg.str());
    }
    for (char& c : entry.sha256) {
      if (c >= 'A' && c <= 'F') c = static_cast<char>(c - 'A' + 'a');
    }
    if (entry.sha256.size() != 64 ||
        entry.sha256.find_first_not_of("0123456789abcdef") != std::string::npos) {
      std::ostringstream msg;
      msg << "line " << ln + 1 << ": sha256 must be 64 hex characters";
      throw Error(ErrorCode::malformed_checksum, msg.str());
    }
    for (const ManifestEntry& existing : entries) {
      if (existing.name == entry.name) {
        throw Error(ErrorCode::duplicate_dataset_name,
                    "dataset '" + entry.name + "' appears more than once");
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

/// Verified-cache-or-download. A warm verified cache returns without
/// touching the transport; downloads are verified in memory and then
/// written atomically (temp file + rename).
inline CacheEntry fetch(const ManifestEntry& entry, const std::filesystem::path& cache_root,
                        const Transport& transport) {
  std::filesystem::path target = cache_root / (entry.name + ".csv");
  if (std::filesystem::exists(target)) {
    std::string cached = detail::read_file(target);
    if (detail::sha256_hex(cached) == entry.sha256) {
      return CacheEntry{entry.name, target, true};
    }
  }

  std::string payload;
  try {
    payload = transport(entry.url);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::transport_error,
                "fetching '" + entry.url + "' failed: " + e.what());
  }

  std::string actual = detail::sha256_hex(payload);
  if (actual != entry.sha256) {
    throw Error(ErrorCode::checksum_mismatch,
                "dataset '" + entry.name + "': expected sha256 " + entry.sha256 + ", got " + actual);
  }

  std::filesystem::create_directories(cache_root);
  std::filesystem::path temp = target;
  temp += ".tmp";
  detail::write_file(temp, payload);
  std::filesystem::rename(temp, target);
  return CacheEntry{entry.name, target, true};
}

inline const ManifestEntry& find_entry(const std::vector<ManifestEntry>& manifest,
                                       const std::string& name) {
  for (const ManifestEntry& entry : manifest) {
    if (entry.name == name) return entry;
  }
  throw Error(ErrorCode::unknown_dataset, "no dataset named '" + name + "' in manifest");
}

/// Fetch (cache-aware) then parse with the entry's label conventions.
inline Dataset load_dataset(const std::string& name, const std::vector<ManifestEntry>& manifest,
                            const std::filesystem::path& cache_root, const Transport& transport) {
  const ManifestEntry& entry = find_entry(manifest, name);
  CacheEntry cached = fetch(entry, cache_root, transport);
  std::string text = detail::read_file(cached.path);
  return parse_csv(text,
                   entry.has_labels() ? std::optional(entry.label_column) : std::nullopt,
                   entry.positive_label);
}

}  // namespace outlierkit
