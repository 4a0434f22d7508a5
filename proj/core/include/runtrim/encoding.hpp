#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "runtrim/dataset.hpp"
#include "runtrim/matrix.hpp"

namespace runtrim {

/// Where an encoded column came from: a numeric feature, one category of a
/// categorical feature, or the runtime target.
struct EncodedColumn {
  static constexpr std::size_t kTarget = static_cast<std::size_t>(-1);

  std::size_t source = 0;
  std::optional<std::string> category;

  bool is_target() const noexcept { return source == kTarget; }
};

struct ColumnScaling {
  double mean = 0.0;
  double stddev = 0.0;  // 0 marks a constant column
  friend bool operator==(const ColumnScaling&, const ColumnScaling&) = default;
};

/// Row-major encoding of a dataset. `raw` holds the one-hot expanded values,
/// `standardized` the per-column z-scores used for clustering.
struct EncodedMatrix {
  Matrix raw;
  Matrix standardized;
  std::vector<EncodedColumn> columns;
  std::vector<ColumnScaling> scaling;
  bool includes_target = false;

  std::size_t rows() const noexcept { return raw.rows(); }
  std::size_t cols() const noexcept { return raw.cols(); }

  std::vector<double> standardize(std::span<const double> raw_row) const;
  std::vector<double> destandardize(std::span<const double> standardized_row) const;
};

/// One-hot expands categoricals (first-appearance category order), copies
/// numeric columns, optionally appends runtime, then z-scores every column
/// with population statistics. Throws ContractError on an empty dataset.
EncodedMatrix encode(const Dataset& dataset, bool include_target);

}  // namespace runtrim
