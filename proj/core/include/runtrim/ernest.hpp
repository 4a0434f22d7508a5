#pragma once

#include <array>
#include <cstddef>

#include "runtrim/dataset.hpp"

namespace runtrim {

/// Parametric scale-out model: runtime = theta . [1, s/m, log2(m), m] with
/// theta >= 0, where m is the machine count and s the input size.
struct ErnestModel {
  std::size_t scaleout_feature = 0;
  std::size_t datasize_feature = 0;
  std::array<double, 4> theta{};

  friend bool operator==(const ErnestModel&, const ErnestModel&) = default;
};

std::array<double, 4> ernest_features(double machines, double datasize);

/// NNLS fit on the scale-out and data-size columns only.
ErnestModel fit_ernest(const Dataset& train);

/// theta . f(m, s), floored at 0.
double predict_ernest(const ErnestModel& model, double machines, double datasize);
double predict_ernest(const ErnestModel& model, const JobRunRecord& record);

}  // namespace runtrim
