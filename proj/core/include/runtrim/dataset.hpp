#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "runtrim/manifest.hpp"

namespace runtrim {

/// A cell value: numbers for numeric columns, strings for categorical ones.
using FieldValue = std::variant<double, std::string>;

/// One executed job. `features` is aligned with `DatasetManifest::features`.
struct JobRunRecord {
  std::vector<FieldValue> features;
  double runtime_s = 0.0;

  double numeric(std::size_t feature) const { return std::get<double>(features[feature]); }
  const std::string& category(std::size_t feature) const {
    return std::get<std::string>(features[feature]);
  }
};

/// Exact equality in every column: doubles compare by bit pattern.
bool identical(const JobRunRecord& a, const JobRunRecord& b);

struct Dataset {
  DatasetManifest manifest;
  std::vector<JobRunRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }

  std::vector<double> runtimes() const;
  /// Copy holding only the records at `indices`, in that order.
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

/// Throws RowError (row = `row_number`) if `record` breaks a record invariant
/// under `manifest`: arity, value kinds, finite numerics, scale-out >= 1,
/// data size >= 0, runtime > 0.
void check_record(const DatasetManifest& manifest, const JobRunRecord& record,
                  std::size_t row_number);

/// Reads a CSV with a header row. Extra columns are ignored; row order kept.
Dataset load_dataset(const DatasetManifest& manifest, std::istream& csv);
Dataset load_dataset_file(const DatasetManifest& manifest, const std::string& path);

/// Writes manifest features followed by the target column. Numbers use the
/// shortest representation that parses back to the same double.
void write_csv(const Dataset& dataset, std::ostream& out);

/// Drops records identical to an earlier one; keeps first-occurrence order.
Dataset deduplicate(const Dataset& dataset);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace runtrim
