#pragma once

#include <filesystem>
#include <iosfwd>

#include "runtrim/selector.hpp"

namespace runtrim {

/// Versioned line-oriented text form of a TrainedPredictor (see
/// docs/formats.md). Doubles are written in shortest round-trip form, so
/// read_predictor(write_predictor(p)) predicts bit-identically to p.
void write_predictor(const TrainedPredictor& predictor, std::ostream& out);
/// Throws ParseError on malformed input or an unsupported version.
TrainedPredictor read_predictor(std::istream& in);

void save_predictor(const TrainedPredictor& predictor, const std::filesystem::path& path);
TrainedPredictor load_predictor(const std::filesystem::path& path);

}  // namespace runtrim
