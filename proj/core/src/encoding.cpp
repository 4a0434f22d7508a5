#include "runtrim/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "runtrim/error.hpp"

namespace runtrim {

std::vector<double> EncodedMatrix::standardize(std::span<const double> raw_row) const {
  std::vector<double> out(raw_row.size());
  for (std::size_t c = 0; c < raw_row.size(); ++c) {
    const auto& s = scaling[c];
    out[c] = s.stddev > 0.0 ? (raw_row[c] - s.mean) / s.stddev : 0.0;
  }
  return out;
}

std::vector<double> EncodedMatrix::destandardize(std::span<const double> standardized_row) const {
  std::vector<double> out(standardized_row.size());
  for (std::size_t c = 0; c < standardized_row.size(); ++c) {
    const auto& s = scaling[c];
    out[c] = s.stddev > 0.0 ? standardized_row[c] * s.stddev + s.mean : s.mean;
  }
  return out;
}

EncodedMatrix encode(const Dataset& dataset, bool include_target) {
  if (dataset.empty()) throw ContractError("cannot encode an empty dataset");
  const auto& manifest = dataset.manifest;

  EncodedMatrix encoded;
  encoded.includes_target = include_target;

  // Column layout: each feature in manifest order, categoricals expanded.
  std::vector<std::vector<std::string>> categories(manifest.features.size());
  for (std::size_t f = 0; f < manifest.features.size(); ++f) {
    if (manifest.features[f].kind != ColumnKind::categorical) continue;
    for (const auto& record : dataset.records) {
      const auto& value = record.category(f);
      if (std::find(categories[f].begin(), categories[f].end(), value) == categories[f].end()) {
        categories[f].push_back(value);
      }
    }
  }
  for (std::size_t f = 0; f < manifest.features.size(); ++f) {
    if (manifest.features[f].kind == ColumnKind::numeric) {
      encoded.columns.push_back({f, std::nullopt});
    } else {
      for (const auto& category : categories[f]) encoded.columns.push_back({f, category});
    }
  }
  if (include_target) encoded.columns.push_back({EncodedColumn::kTarget, std::nullopt});

  const std::size_t cols = encoded.columns.size();
  encoded.raw = Matrix(dataset.size(), cols);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const auto& record = dataset.records[r];
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& column = encoded.columns[c];
      if (column.is_target()) {
        encoded.raw(r, c) = record.runtime_s;
      } else if (column.category) {
        encoded.raw(r, c) = record.category(column.source) == *column.category ? 1.0 : 0.0;
      } else {
        encoded.raw(r, c) = record.numeric(column.source);
      }
    }
  }

  const auto n = static_cast<double>(dataset.size());
  encoded.scaling.resize(cols);
  encoded.standardized = Matrix(dataset.size(), cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const double first = encoded.raw(0, c);
    bool constant = true;
    double sum = 0.0;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      sum += encoded.raw(r, c);
      constant = constant && encoded.raw(r, c) == first;
    }
    auto& s = encoded.scaling[c];
    if (constant) {
      s = {first, 0.0};
      continue;
    }
    s.mean = sum / n;
    double squares = 0.0;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      const double d = encoded.raw(r, c) - s.mean;
      squares += d * d;
    }
    s.stddev = std::sqrt(squares / n);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      encoded.standardized(r, c) = (encoded.raw(r, c) - s.mean) / s.stddev;
    }
  }
  return encoded;
}

}  // namespace runtrim
