#include "runtrim/features.hpp"

#include <algorithm>

namespace runtrim {

FeatureEncoder::FeatureEncoder(std::vector<Slot> slots) : slots_(std::move(slots)) {
  for (const auto& slot : slots_) {
    width_ += slot.kind == ColumnKind::numeric ? 1 : slot.categories.size();
  }
}

FeatureEncoder FeatureEncoder::fit(const Dataset& train, std::optional<std::size_t> exclude) {
  std::vector<Slot> slots;
  const auto& features = train.manifest.features;
  for (std::size_t f = 0; f < features.size(); ++f) {
    if (exclude && *exclude == f) continue;
    Slot slot{f, features[f].kind, {}};
    if (slot.kind == ColumnKind::categorical) {
      for (const auto& record : train.records) {
        const auto& value = record.category(f);
        if (std::find(slot.categories.begin(), slot.categories.end(), value) ==
            slot.categories.end()) {
          slot.categories.push_back(value);
        }
      }
    }
    slots.push_back(std::move(slot));
  }
  return FeatureEncoder(std::move(slots));
}

std::vector<double> FeatureEncoder::encode(const JobRunRecord& record) const {
  std::vector<double> out;
  out.reserve(width_);
  for (const auto& slot : slots_) {
    if (slot.kind == ColumnKind::numeric) {
      out.push_back(record.numeric(slot.feature));
      continue;
    }
    const auto& value = record.category(slot.feature);
    for (const auto& category : slot.categories) out.push_back(value == category ? 1.0 : 0.0);
  }
  return out;
}

Matrix FeatureEncoder::encode_all(const Dataset& dataset) const {
  Matrix out(0, width_);
  for (const auto& record : dataset.records) out.append_row(encode(record));
  return out;
}

}  // namespace runtrim
