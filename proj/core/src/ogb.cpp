#include <algorithm>

#include "runtrim/error.hpp"
#include "runtrim/optimistic.hpp"

namespace runtrim {

OgbModel fit_ogb(const Dataset& train, const GbmParams& params) {
  OgbModel model;
  model.curve = fit_scaleout_curve(train);
  model.scaleout_feature = train.manifest.scaleout_index();
  model.context_encoder = FeatureEncoder::fit(train, model.scaleout_feature);

  std::vector<double> factors;
  factors.reserve(train.size());
  for (const auto& record : train.records) {
    factors.push_back(record.runtime_s / model.curve(record.numeric(model.scaleout_feature)));
  }
  model.factor = fit_boosted_trees(model.context_encoder.encode_all(train), factors, params);
  return model;
}

double predict_ogb(const OgbModel& model, const JobRunRecord& record) {
  const double factor = model.factor.predict(model.context_encoder.encode(record));
  return std::max(factor * model.curve(record.numeric(model.scaleout_feature)), 0.0);
}

}  // namespace runtrim
