#include <algorithm>
#include <limits>
#include <sstream>

#include "runtrim/error.hpp"
#include "runtrim/reduction.hpp"
#include "runtrim/selector.hpp"

namespace runtrim {
namespace {

constexpr double kAbsoluteSlack = 0.5;  // percentage points
constexpr double kRelativeSlack = 0.05;

double selected_cv_mape(const Dataset& data, std::size_t folds, std::uint64_t seed) {
  const ModelScores scores = cross_validate(data, folds, seed);
  return scores[static_cast<std::size_t>(choose_model(scores))];
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::accepted ? "accepted" : "deferred";
}

ContributionDecision validate_contribution(const Dataset& current, const Dataset& batch,
                                           std::uint64_t seed, std::size_t folds) {
  if (!(current.manifest == batch.manifest)) {
    throw SchemaError("batch manifest does not match the current dataset");
  }
  if (batch.empty()) throw ContractError("contribution batch is empty");
  if (current.empty()) throw ContractError("current dataset is empty");
  const auto& manifest = current.manifest;

  std::vector<double> lo(manifest.features.size(), 0.0);
  std::vector<double> hi(manifest.features.size(), 0.0);
  for (std::size_t f = 0; f < manifest.features.size(); ++f) {
    if (manifest.features[f].kind != ColumnKind::numeric) continue;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    for (const auto& record : current.records) {
      min = std::min(min, record.numeric(f));
      max = std::max(max, record.numeric(f));
    }
    lo[f] = min >= 0.0 ? min / 2.0 : min * 2.0;
    hi[f] = max >= 0.0 ? max * 2.0 : max / 2.0;
  }

  ContributionDecision decision;
  Dataset combined = current;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& record = batch.records[r];
    bool plausible = true;
    try {
      check_record(manifest, record, r + 1);
    } catch (const RowError&) {
      plausible = false;
    }
    for (std::size_t f = 0; plausible && f < manifest.features.size(); ++f) {
      if (manifest.features[f].kind != ColumnKind::numeric) continue;
      const double v = record.numeric(f);
      plausible = v >= lo[f] && v <= hi[f];
    }
    if (plausible) {
      combined.records.push_back(record);
      ++decision.evaluated_rows;
    } else {
      decision.flagged_rows.push_back(r + 1);
    }
  }

  decision.mape_before = selected_cv_mape(current, folds, seed);
  decision.threshold = std::max(kAbsoluteSlack, kRelativeSlack * decision.mape_before);
  if (decision.evaluated_rows == 0) {
    decision.mape_after = decision.mape_before;
    decision.verdict = Verdict::deferred;
    return decision;
  }
  decision.mape_after = selected_cv_mape(combined, folds, seed);
  decision.verdict = decision.mape_after > decision.mape_before + decision.threshold
                         ? Verdict::deferred
                         : Verdict::accepted;
  return decision;
}

std::string format_decision(const ContributionDecision& decision) {
  std::ostringstream out;
  out << "verdict = " << to_string(decision.verdict) << '\n'
      << "mape_before = " << format_double(decision.mape_before) << '\n'
      << "mape_after = " << format_double(decision.mape_after) << '\n'
      << "threshold = " << format_double(decision.threshold) << '\n'
      << "evaluated_rows = " << decision.evaluated_rows << '\n'
      << "flagged_rows =";
  for (const auto row : decision.flagged_rows) out << ' ' << row;
  out << '\n';
  return out.str();
}

std::string decision_csv_header() {
  return "verdict,mape_before,mape_after,threshold,evaluated_rows,flagged_rows";
}

std::string decision_csv_row(const ContributionDecision& decision) {
  std::ostringstream out;
  out << to_string(decision.verdict) << ',' << format_double(decision.mape_before) << ','
      << format_double(decision.mape_after) << ',' << format_double(decision.threshold) << ','
      << decision.evaluated_rows << ',';
  for (std::size_t i = 0; i < decision.flagged_rows.size(); ++i) {
    if (i > 0) out << ' ';
    out << decision.flagged_rows[i];
  }
  return out.str();
}

}  // namespace runtrim
