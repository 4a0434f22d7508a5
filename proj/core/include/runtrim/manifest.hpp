#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace runtrim {

enum class ColumnKind { numeric, categorical };

std::string_view to_string(ColumnKind kind);

struct FeatureColumn {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;

  friend bool operator==(const FeatureColumn&, const FeatureColumn&) = default;
};

/// Declares the CSV schema of one job type: ordered feature columns, which of
/// them carry the scale-out and input-size roles, and the runtime column.
///
/// Text grammar (one directive per line, `#` starts a comment):
///
///     job_type = sort
///     scaleout = machines
///     datasize = data_size_mb
///     target   = runtime_s
///     feature  = machines numeric
///     feature  = node_type categorical
struct DatasetManifest {
  std::string job_type;
  std::vector<FeatureColumn> features;
  std::string scaleout_column;
  std::string datasize_column;
  std::string target_column;

  /// Throws SchemaError when a manifest invariant does not hold.
  void validate() const;

  /// Index into `features`; throws SchemaError for unknown names.
  std::size_t feature_index(std::string_view name) const;
  std::size_t scaleout_index() const { return feature_index(scaleout_column); }
  std::size_t datasize_index() const { return feature_index(datasize_column); }

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

DatasetManifest parse_manifest(std::string_view text);
DatasetManifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const DatasetManifest& manifest);

}  // namespace runtrim
