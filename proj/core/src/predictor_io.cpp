#include "runtrim/predictor_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "runtrim/error.hpp"

namespace runtrim {
namespace {

constexpr int kFormatVersion = 1;

std::string num(double value) { return format_double(value); }

void write_encoder(const FeatureEncoder& encoder, std::ostream& out) {
  out << "encoder " << encoder.slots().size() << '\n';
  for (const auto& slot : encoder.slots()) {
    out << "slot " << slot.feature << ' ' << to_string(slot.kind);
    if (slot.kind == ColumnKind::categorical) out << ' ' << slot.categories.size();
    out << '\n';
    for (const auto& category : slot.categories) out << "category " << category << '\n';
  }
}

void write_ensemble(const BoostedTrees& ensemble, std::ostream& out) {
  out << "ensemble " << num(ensemble.initial_prediction) << ' ' << num(ensemble.learning_rate)
      << ' ' << ensemble.trees.size() << '\n';
  for (const auto& tree : ensemble.trees) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& node : tree.nodes) {
      if (node.feature == TreeNode::kLeaf) {
        out << "leaf " << num(node.value) << '\n';
      } else {
        out << "split " << node.feature << ' ' << num(node.threshold) << ' ' << node.left << ' '
            << node.right << '\n';
      }
    }
  }
}

void write_curve(const ScaleoutCurve& curve, std::ostream& out) {
  out << "curve " << curve.machines.size() << '\n';
  for (std::size_t i = 0; i < curve.machines.size(); ++i) {
    out << "point " << num(curve.machines[i]) << ' ' << num(curve.values[i]) << '\n';
  }
}

struct ModelWriter {
  std::ostream& out;
  void operator()(const ErnestModel& m) const {
    out << "scaleout " << m.scaleout_feature << '\n'
        << "datasize " << m.datasize_feature << '\n'
        << "theta";
    for (const double t : m.theta) out << ' ' << num(t);
    out << '\n';
  }
  void operator()(const GbmModel& m) const {
    write_encoder(m.encoder, out);
    write_ensemble(m.ensemble, out);
  }
  void operator()(const BomModel& m) const {
    out << "scaleout " << m.scaleout_feature << '\n';
    write_curve(m.curve, out);
    write_encoder(m.context_encoder, out);
    out << "scaling " << m.context_scaling.size() << '\n';
    for (const auto& s : m.context_scaling) out << "column " << num(s.mean) << ' ' << num(s.stddev) << '\n';
    out << "groups " << m.groups.size() << '\n';
    for (const auto& g : m.groups) {
      out << "group " << num(g.mean_runtime) << ' ' << num(g.mean_curve);
      for (const double v : g.context) out << ' ' << num(v);
      out << '\n';
    }
  }
  void operator()(const OgbModel& m) const {
    out << "scaleout " << m.scaleout_feature << '\n';
    write_curve(m.curve, out);
    write_encoder(m.context_encoder, out);
    write_ensemble(m.factor, out);
  }
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into a keyword and the remainder.
  std::pair<std::string, std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto space = line.find(' ');
      if (space == std::string::npos) return {line, {}};
      return {line.substr(0, space), line.substr(space + 1)};
    }
    fail("unexpected end of input");
  }

  std::istringstream expect(const std::string& keyword) {
    auto [key, rest] = next();
    if (key != keyword) fail("expected '" + keyword + "', found '" + key + "'");
    return std::istringstream(rest);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("predictor line " + std::to_string(line_number_) + ": " + what);
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

double parse_double(LineReader& reader, std::istream& fields) {
  std::string token;
  if (!(fields >> token)) reader.fail("missing number");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) reader.fail("bad number '" + token + "'");
  return value;
}

template <class Int>
Int parse_int(LineReader& reader, std::istream& fields) {
  long long value = 0;
  if (!(fields >> value)) reader.fail("missing integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (value < 0) reader.fail("negative count");
  }
  return static_cast<Int>(value);
}

FeatureEncoder read_encoder(LineReader& reader) {
  auto header = reader.expect("encoder");
  const auto slots = parse_int<std::size_t>(reader, header);
  std::vector<FeatureEncoder::Slot> out;
  for (std::size_t s = 0; s < slots; ++s) {
    auto fields = reader.expect("slot");
    FeatureEncoder::Slot slot;
    slot.feature = parse_int<std::size_t>(reader, fields);
    std::string kind;
    fields >> kind;
    if (kind == "numeric") {
      slot.kind = ColumnKind::numeric;
    } else if (kind == "categorical") {
      slot.kind = ColumnKind::categorical;
      const auto count = parse_int<std::size_t>(reader, fields);
      for (std::size_t c = 0; c < count; ++c) {
        auto [key, rest] = reader.next();
        if (key != "category") reader.fail("expected 'category'");
        slot.categories.push_back(rest);
      }
    } else {
      reader.fail("unknown slot kind '" + kind + "'");
    }
    out.push_back(std::move(slot));
  }
  return FeatureEncoder(std::move(out));
}

BoostedTrees read_ensemble(LineReader& reader) {
  auto header = reader.expect("ensemble");
  BoostedTrees ensemble;
  ensemble.initial_prediction = parse_double(reader, header);
  ensemble.learning_rate = parse_double(reader, header);
  const auto trees = parse_int<std::size_t>(reader, header);
  for (std::size_t t = 0; t < trees; ++t) {
    auto tree_header = reader.expect("tree");
    const auto nodes = parse_int<std::size_t>(reader, tree_header);
    RegressionTree tree;
    for (std::size_t i = 0; i < nodes; ++i) {
      auto [key, rest] = reader.next();
      std::istringstream fields(rest);
      TreeNode node;
      if (key == "leaf") {
        node.value = parse_double(reader, fields);
      } else if (key == "split") {
        node.feature = parse_int<int>(reader, fields);
        node.threshold = parse_double(reader, fields);
        node.left = parse_int<int>(reader, fields);
        node.right = parse_int<int>(reader, fields);
        const auto limit = static_cast<int>(nodes);
        if (node.feature < 0 || node.left <= 0 || node.right <= 0 || node.left >= limit ||
            node.right >= limit) {
          reader.fail("split references an invalid node");
        }
      } else {
        reader.fail("expected 'leaf' or 'split'");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) reader.fail("empty tree");
    ensemble.trees.push_back(std::move(tree));
  }
  return ensemble;
}

ScaleoutCurve read_curve(LineReader& reader) {
  auto header = reader.expect("curve");
  const auto points = parse_int<std::size_t>(reader, header);
  if (points == 0) reader.fail("empty scale-out curve");
  ScaleoutCurve curve;
  for (std::size_t i = 0; i < points; ++i) {
    auto fields = reader.expect("point");
    curve.machines.push_back(parse_double(reader, fields));
    curve.values.push_back(parse_double(reader, fields));
  }
  return curve;
}

AnyModel read_model(LineReader& reader, ModelKind kind) {
  switch (kind) {
    case ModelKind::ernest: {
      ErnestModel m;
      auto s = reader.expect("scaleout");
      m.scaleout_feature = parse_int<std::size_t>(reader, s);
      auto d = reader.expect("datasize");
      m.datasize_feature = parse_int<std::size_t>(reader, d);
      auto t = reader.expect("theta");
      for (auto& v : m.theta) v = parse_double(reader, t);
      return m;
    }
    case ModelKind::gbm: {
      GbmModel m;
      m.encoder = read_encoder(reader);
      m.ensemble = read_ensemble(reader);
      return m;
    }
    case ModelKind::bom: {
      BomModel m;
      auto s = reader.expect("scaleout");
      m.scaleout_feature = parse_int<std::size_t>(reader, s);
      m.curve = read_curve(reader);
      m.context_encoder = read_encoder(reader);
      auto sc = reader.expect("scaling");
      const auto columns = parse_int<std::size_t>(reader, sc);
      for (std::size_t c = 0; c < columns; ++c) {
        auto fields = reader.expect("column");
        ColumnScaling scaling;
        scaling.mean = parse_double(reader, fields);
        scaling.stddev = parse_double(reader, fields);
        m.context_scaling.push_back(scaling);
      }
      auto gs = reader.expect("groups");
      const auto groups = parse_int<std::size_t>(reader, gs);
      for (std::size_t g = 0; g < groups; ++g) {
        auto fields = reader.expect("group");
        ContextGroup group;
        group.mean_runtime = parse_double(reader, fields);
        group.mean_curve = parse_double(reader, fields);
        for (std::size_t c = 0; c < columns; ++c) group.context.push_back(parse_double(reader, fields));
        m.groups.push_back(std::move(group));
      }
      return m;
    }
    case ModelKind::ogb: {
      OgbModel m;
      auto s = reader.expect("scaleout");
      m.scaleout_feature = parse_int<std::size_t>(reader, s);
      m.curve = read_curve(reader);
      m.context_encoder = read_encoder(reader);
      m.factor = read_ensemble(reader);
      return m;
    }
  }
  reader.fail("unknown model kind");
}

}  // namespace

void write_predictor(const TrainedPredictor& predictor, std::ostream& out) {
  out << "runtrim-predictor " << kFormatVersion << '\n';
  const std::string manifest = format_manifest(predictor.manifest);
  out << "manifest " << std::count(manifest.begin(), manifest.end(), '\n') << '\n' << manifest;
  out << "chosen " << to_string(predictor.chosen) << '\n';
  for (const auto kind : kAllModels) {
    out << "cv " << to_string(kind) << ' ' << num(predictor.cv_scores[static_cast<std::size_t>(kind)])
        << '\n';
  }
  for (const auto kind : kAllModels) {
    const auto& model = predictor.models[static_cast<std::size_t>(kind)];
    if (!model) {
      out << "unavailable " << to_string(kind) << '\n';
      continue;
    }
    out << "model " << to_string(kind) << '\n';
    std::visit(ModelWriter{out}, *model);
    out << "end\n";
  }
}

TrainedPredictor read_predictor(std::istream& in) {
  LineReader reader(in);
  auto version_fields = reader.expect("runtrim-predictor");
  const int version = parse_int<int>(reader, version_fields);
  if (version != kFormatVersion) reader.fail("unsupported format version " + std::to_string(version));

  TrainedPredictor predictor;
  auto manifest_header = reader.expect("manifest");
  const auto manifest_lines = parse_int<std::size_t>(reader, manifest_header);
  std::string manifest_text;
  for (std::size_t i = 0; i < manifest_lines; ++i) {
    auto [key, rest] = reader.next();
    manifest_text += key + ' ' + rest + '\n';
  }
  try {
    predictor.manifest = parse_manifest(manifest_text);
  } catch (const Error& e) {
    reader.fail(std::string("embedded manifest: ") + e.what());
  }

  auto chosen_fields = reader.expect("chosen");
  std::string chosen;
  chosen_fields >> chosen;
  try {
    predictor.chosen = parse_model_kind(chosen);
  } catch (const ParameterError&) {
    reader.fail("unknown chosen model '" + chosen + "'");
  }
  for (std::size_t i = 0; i < kModelCount; ++i) {
    auto fields = reader.expect("cv");
    std::string name;
    fields >> name;
    try {
      predictor.cv_scores[static_cast<std::size_t>(parse_model_kind(name))] =
          parse_double(reader, fields);
    } catch (const ParameterError&) {
      reader.fail("unknown model '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < kModelCount; ++i) {
    auto [key, rest] = reader.next();
    ModelKind kind{};
    try {
      kind = parse_model_kind(rest);
    } catch (const ParameterError&) {
      reader.fail("unknown model '" + rest + "'");
    }
    if (key == "unavailable") continue;
    if (key != "model") reader.fail("expected 'model' or 'unavailable'");
    predictor.models[static_cast<std::size_t>(kind)] = read_model(reader, kind);
    reader.expect("end");
  }
  if (!predictor.available(predictor.chosen)) reader.fail("chosen model is unavailable");
  return predictor;
}

void save_predictor(const TrainedPredictor& predictor, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_predictor(predictor, out);
  if (!out) throw Error("failed writing " + path.string());
}

TrainedPredictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_predictor(in);
}

}  // namespace runtrim
