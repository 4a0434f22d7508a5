#include <algorithm>
#include <cmath>
#include <limits>

#include "runtrim/clustering.hpp"
#include "runtrim/error.hpp"

namespace runtrim {

Dataset representatives_to_dataset(const ClusteringResult& result, const EncodedMatrix& encoded,
                                   const DatasetManifest& manifest) {
  if (!encoded.includes_target) {
    throw ContractError("representatives can only be decoded from an encoding with the target");
  }
  if (result.representatives.cols() != encoded.cols() && !result.representatives.empty()) {
    throw ContractError("representatives do not match the encoding width");
  }

  // Encoded columns belonging to each feature, and the target column.
  std::vector<std::vector<std::size_t>> blocks(manifest.features.size());
  std::size_t target = 0;
  for (std::size_t c = 0; c < encoded.columns.size(); ++c) {
    if (encoded.columns[c].is_target()) {
      target = c;
    } else {
      blocks[encoded.columns[c].source].push_back(c);
    }
  }
  double runtime_floor = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < encoded.rows(); ++r) {
    runtime_floor = std::min(runtime_floor, encoded.raw(r, target));
  }
  const std::size_t scaleout = manifest.scaleout_index();
  const std::size_t datasize = manifest.datasize_index();

  Dataset out{manifest, {}};
  out.records.reserve(result.representatives.rows());
  for (std::size_t r = 0; r < result.representatives.rows(); ++r) {
    const auto& source = result.source_rows.at(r);
    const std::vector<double> values =
        source ? std::vector<double>(encoded.raw.row(*source).begin(), encoded.raw.row(*source).end())
               : encoded.destandardize(result.representatives.row(r));

    JobRunRecord record;
    record.features.reserve(manifest.features.size());
    for (std::size_t f = 0; f < manifest.features.size(); ++f) {
      const auto& block = blocks[f];
      if (manifest.features[f].kind == ColumnKind::categorical) {
        std::size_t best = block.front();
        for (const auto c : block) {
          if (values[c] > values[best]) best = c;
        }
        record.features.emplace_back(*encoded.columns[best].category);
      } else {
        double value = values[block.front()];
        if (!source) {
          if (f == scaleout) value = std::max(1.0, std::round(value));
          if (f == datasize) value = std::max(0.0, value);
        }
        record.features.emplace_back(value);
      }
    }
    record.runtime_s = source ? values[target] : std::max(values[target], runtime_floor);
    out.records.push_back(std::move(record));
  }
  return out;
}

}  // namespace runtrim
