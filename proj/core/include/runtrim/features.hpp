#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "runtrim/dataset.hpp"
#include "runtrim/matrix.hpp"

namespace runtrim {

/// Turns records into numeric feature vectors for the tree and context
/// models: numeric features as-is, categoricals one-hot over the categories
/// seen at fit time (unseen categories encode as all zeros).
class FeatureEncoder {
 public:
  struct Slot {
    std::size_t feature = 0;
    ColumnKind kind = ColumnKind::numeric;
    std::vector<std::string> categories;

    friend bool operator==(const Slot&, const Slot&) = default;
  };

  FeatureEncoder() = default;
  explicit FeatureEncoder(std::vector<Slot> slots);

  /// `exclude` drops one manifest feature, e.g. scale-out for context features.
  static FeatureEncoder fit(const Dataset& train, std::optional<std::size_t> exclude = {});

  std::vector<double> encode(const JobRunRecord& record) const;
  Matrix encode_all(const Dataset& dataset) const;

  std::size_t width() const noexcept { return width_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  friend bool operator==(const FeatureEncoder& a, const FeatureEncoder& b) {
    return a.slots_ == b.slots_;
  }

 private:
  std::vector<Slot> slots_;
  std::size_t width_ = 0;
};

}  // namespace runtrim
