#include "runtrim/ernest.hpp"

#include <algorithm>
#include <cmath>

#include "runtrim/error.hpp"
#include "runtrim/nnls.hpp"

namespace runtrim {

std::array<double, 4> ernest_features(double machines, double datasize) {
  return {1.0, datasize / machines, std::log2(machines), machines};
}

ErnestModel fit_ernest(const Dataset& train) {
  if (train.empty()) throw ContractError("cannot fit Ernest on an empty dataset");
  ErnestModel model;
  model.scaleout_feature = train.manifest.scaleout_index();
  model.datasize_feature = train.manifest.datasize_index();

  Matrix design(train.size(), 4);
  for (std::size_t r = 0; r < train.size(); ++r) {
    const auto& record = train.records[r];
    const auto f = ernest_features(record.numeric(model.scaleout_feature),
                                   record.numeric(model.datasize_feature));
    for (std::size_t c = 0; c < 4; ++c) design(r, c) = f[c];
  }
  // Column scaling keeps the active-set solves well conditioned; positive
  // scales leave the non-negativity constraint unchanged.
  std::array<double, 4> scale{};
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < design.rows(); ++r) scale[c] = std::max(scale[c], std::abs(design(r, c)));
    if (scale[c] == 0.0) scale[c] = 1.0;
    for (std::size_t r = 0; r < design.rows(); ++r) design(r, c) /= scale[c];
  }
  const auto runtimes = train.runtimes();
  const auto solution = nnls_solve(design, runtimes);
  for (std::size_t c = 0; c < 4; ++c) model.theta[c] = solution[c] / scale[c];
  return model;
}

double predict_ernest(const ErnestModel& model, double machines, double datasize) {
  const auto f = ernest_features(machines, datasize);
  double sum = 0.0;
  for (std::size_t c = 0; c < 4; ++c) sum += model.theta[c] * f[c];
  return std::max(sum, 0.0);
}

double predict_ernest(const ErnestModel& model, const JobRunRecord& record) {
  return predict_ernest(model, record.numeric(model.scaleout_feature),
                        record.numeric(model.datasize_feature));
}

}  // namespace runtrim
