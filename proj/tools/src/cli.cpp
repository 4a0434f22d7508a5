#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "runtrim/dataset.hpp"
#include "runtrim/error.hpp"
#include "runtrim/evaluation.hpp"
#include "runtrim/predictor_io.hpp"
#include "runtrim/reduction.hpp"
#include "runtrim/rng.hpp"
#include "runtrim/selector.hpp"
#include "runtrim/synthetic.hpp"

namespace runtrim::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::optional<std::uint64_t> seed;
  std::string manifest;
  std::string output;
  std::string format = "text";

  std::string input;
  std::string method = "kmeans";
  std::optional<double> fraction;
  std::optional<double> eps;
  std::size_t min_pts = 2;
  std::string report;
  bool no_estimate = false;
  std::size_t folds = 5;

  std::string model;
  std::vector<std::string> record;
  std::string using_model;

  std::string current;
  std::string batch;
  std::string batch_manifest;

  std::string config;
  bool no_timing = false;

  std::string spec;

  std::vector<double> levels = {0.1, 0.25, 0.5, 1.0};
  std::size_t repetitions = 5;
  std::size_t rows = 2000;
};

// Written next to the target and renamed into place, so a failed command
// never leaves a partial file behind.
void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_atomic(path, text);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Explicit --manifest, else a sibling file with the .manifest extension.
DatasetManifest manifest_for(const std::string& explicit_path, const std::string& csv) {
  fs::path path = explicit_path;
  if (path.empty()) {
    path = fs::path(csv).replace_extension(".manifest");
    if (!fs::exists(path)) throw SchemaError("no --manifest given and " + path.string() + " does not exist");
  }
  return load_manifest(path);
}

Dataset load_input(const std::string& manifest_path, const std::string& csv) {
  if (csv.empty()) throw ParameterError("an input CSV is required");
  return load_dataset_file(manifest_for(manifest_path, csv), csv);
}

std::string csv_text(const Dataset& dataset) {
  std::ostringstream out;
  write_csv(dataset, out);
  return out.str();
}

int cmd_reduce(const Options& o, std::ostream& out, std::ostream& err) {
  const Dataset dataset = load_input(o.manifest, o.input);
  ReductionRequest request;
  request.method = parse_method(o.method);
  request.retained_fraction = o.fraction;
  request.eps = o.eps;
  request.min_pts = o.min_pts;
  request.seed = o.seed.value_or(0);
  request.validate();

  Dataset reduced;
  ReductionReport report;
  if (o.no_estimate) {
    Reduction r = reduce_dataset(dataset, request);
    reduced = std::move(r.dataset);
    report = r.report;
  } else {
    EstimateOptions options;
    options.folds = o.folds;
    std::tie(reduced, report) = reduce(dataset, request, options);
  }

  const std::string report_text =
      o.format == "csv" ? report_csv_header() + "\n" + report_csv_row(report) + "\n" : format_report(report);
  emit(o.output, csv_text(reduced), out);
  // The reduced CSV keeps the input schema; a sidecar makes it loadable as is.
  if (!o.output.empty() && o.output != "-") {
    write_atomic(fs::path(o.output).replace_extension(".manifest"), format_manifest(reduced.manifest));
  }
  if (!o.report.empty()) {
    write_atomic(o.report, report_text);
  } else if (!o.output.empty() && o.output != "-") {
    out << report_text;
  } else {
    err << report_text;
  }
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream&) {
  const Dataset dataset = load_input(o.manifest, o.input);
  const TrainedPredictor predictor = c3o_select(dataset, o.folds, o.seed.value_or(0));
  std::ostringstream model;
  write_predictor(predictor, model);
  if (o.output.empty()) throw ParameterError("fit needs --output for the model file");
  write_atomic(o.output, model.str());
  out << "chosen = " << to_string(predictor.chosen) << '\n';
  for (const ModelKind kind : kAllModels) {
    const double score = predictor.cv_scores[static_cast<std::size_t>(kind)];
    out << "cv_mape." << to_string(kind) << " = " << (std::isfinite(score) ? format_double(score) : "unavailable")
        << '\n';
  }
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream&) {
  if (o.model.empty()) throw ParameterError("predict needs --model");
  const TrainedPredictor predictor = load_predictor(o.model);
  const DatasetManifest& manifest = predictor.manifest;

  std::map<std::string, std::string> values;
  for (const auto& item : o.record) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("--record expects key=value, got '" + item + "'");
    values[item.substr(0, eq)] = item.substr(eq + 1);
  }
  std::vector<std::string> missing;
  for (const auto& column : manifest.features) {
    if (!values.count(column.name)) missing.push_back(column.name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& name : missing) list += (list.empty() ? "" : ", ") + name;
    throw ParameterError("missing record values: " + list);
  }
  // Parse through the CSV reader so values follow the same rules as training data.
  std::ostringstream csv;
  for (const auto& column : manifest.features) csv << column.name << ',';
  csv << manifest.target_column << '\n';
  for (const auto& column : manifest.features) {
    std::string v = values[column.name];
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (const char c : v) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = quoted + "\"";
    }
    csv << v << ',';
  }
  csv << "1\n";
  std::istringstream in(csv.str());
  const Dataset parsed = load_dataset(manifest, in);

  const ModelKind kind = o.using_model.empty() ? predictor.chosen : parse_model_kind(o.using_model);
  const double runtime = predictor.predict(kind, parsed.records.front());
  out << "predicted_runtime_s = " << format_double(runtime) << '\n' << "model = " << to_string(kind) << '\n';
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  const Dataset current = load_input(o.manifest, o.current);
  const std::string batch_manifest = o.batch_manifest.empty() ? o.manifest : o.batch_manifest;
  const Dataset batch = load_input(batch_manifest, o.batch);
  const ContributionDecision decision = validate_contribution(current, batch, o.seed.value_or(0), o.folds);
  const std::string text = o.format == "csv" ? decision_csv_header() + "\n" + decision_csv_row(decision) + "\n"
                                             : format_decision(decision);
  emit(o.output, text, out);
  return decision.verdict == Verdict::accepted ? kExitOk : kExitDeferred;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) throw ParameterError("evaluate needs --config");
  ExperimentConfig config = load_experiment_config(o.config);
  if (o.seed) config.base_seed = *o.seed;
  config.validate();
  const EvaluationReport report = run_experiment(config);

  std::ostringstream csv;
  write_report_csv(report, csv, !o.no_timing);
  if (o.format == "svg") {
    if (o.output.empty()) throw ParameterError("--format svg needs --output DIR");
    const fs::path dir = o.output;
    write_atomic(dir / "report.csv", csv.str());
    write_report_svgs(report, dir);
    err << "wrote " << (dir / "report.csv").string() << " and charts\n";
  } else {
    emit(o.output, csv.str(), out);
  }
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  SyntheticSuite suite = o.spec.empty() || o.spec == "default" ? default_suite() : parse_suite_json(read_text(o.spec));
  if (o.seed) suite.seed = *o.seed;
  if (o.output.empty()) throw ParameterError("synth needs --out");
  const auto datasets = generate_suite(suite);

  auto write_job = [&](const fs::path& csv, std::size_t i) {
    write_atomic(csv, csv_text(datasets[i]));
    write_atomic(fs::path(csv).replace_extension(".manifest"), format_manifest(datasets[i].manifest));
    write_atomic(fs::path(csv).replace_extension(".truth.json"),
                 spec_to_json(suite.jobs[i], derive_seed(suite.seed, i)));
    out << csv.string() << ": " << datasets[i].size() << " rows\n";
  };
  if (suite.jobs.size() == 1 && fs::path(o.output).extension() == ".csv") {
    write_job(o.output, 0);
  } else {
    for (std::size_t i = 0; i < datasets.size(); ++i) write_job(fs::path(o.output) / (suite.jobs[i].job_type + ".csv"), i);
  }
  return kExitOk;
}

int cmd_timing(const Options& o, std::ostream& out, std::ostream& err) {
  Dataset dataset;
  if (o.input.empty()) {
    SyntheticSpec spec = default_suite().jobs.front();
    spec.rows = o.rows;
    dataset = generate_synthetic(spec, o.seed.value_or(0));
  } else {
    dataset = load_input(o.manifest, o.input);
  }
  const TimingStudy study =
      measure_training_time(dataset, o.levels, o.repetitions, o.seed.value_or(0), parse_method(o.method), o.folds);
  std::ostringstream csv;
  write_timing_csv(study, csv);
  emit(o.output, csv.str(), out);
  err << "spearman = " << (study.spearman ? format_double(*study.spearman) : "undefined") << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Training-data reduction and runtime prediction for dataflow jobs", "runtrim"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--manifest", o.manifest, "Dataset manifest (default: the input path with a .manifest extension)");
  app.add_option("--output,-o", o.output, "Output file or directory (default: stdout)");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "text", "svg"}));

  auto* reduce = app.add_subcommand("reduce", "Cluster a dataset down to representatives");
  reduce->add_option("--input", o.input, "Input CSV")->required();
  reduce->add_option("--method", o.method, "kmeans, kmedoids or dbscan");
  auto* fraction = reduce->add_option("--fraction", o.fraction, "Retained fraction in (0, 1]");
  auto* eps = reduce->add_option("--eps", o.eps, "DBSCAN radius in standardized units");
  fraction->excludes(eps);
  reduce->add_option("--min-pts", o.min_pts, "DBSCAN core threshold");
  reduce->add_option("--report", o.report, "Where to write the reduction report");
  reduce->add_flag("--no-estimate", o.no_estimate, "Skip the holdout MAPE estimates");
  reduce->add_option("--folds", o.folds, "Cross-validation folds");

  auto* fit = app.add_subcommand("fit", "Train the model ensemble and save it");
  fit->add_option("--input", o.input, "Training CSV")->required();
  fit->add_option("--folds", o.folds, "Cross-validation folds");

  auto* predict = app.add_subcommand("predict", "Predict the runtime of one configuration");
  predict->add_option("--model", o.model, "Saved predictor")->required();
  predict->add_option("--record", o.record, "Feature values as key=value");
  predict->add_option("--using", o.using_model, "Use this model instead of the selected one");

  auto* validate = app.add_subcommand("validate", "Check a contributed batch against current data");
  validate->add_option("--current", o.current, "Current training CSV")->required();
  validate->add_option("--batch", o.batch, "Contributed CSV")->required();
  validate->add_option("--batch-manifest", o.batch_manifest, "Manifest of the batch (default: --manifest)");
  validate->add_option("--folds", o.folds, "Cross-validation folds");

  auto* evaluate = app.add_subcommand("evaluate", "Run a reduction experiment");
  evaluate->add_option("--config", o.config, "Experiment JSON")->required();
  evaluate->add_flag("--no-timing", o.no_timing, "Omit the timing column");

  auto* synth = app.add_subcommand("synth", "Generate synthetic job datasets");
  synth->add_option("--spec", o.spec, "Suite or job JSON (default: built-in suite)");
  synth->add_option("--out", o.output, "CSV file for one job, otherwise a directory");

  auto* timing = app.add_subcommand("timing", "Measure training time against retained fraction");
  timing->add_option("--input", o.input, "Input CSV (default: synthetic)");
  timing->add_option("--levels", o.levels, "Retained fractions")->delimiter(',');
  timing->add_option("--repetitions", o.repetitions, "Timed fits per level");
  timing->add_option("--rows", o.rows, "Synthetic rows when no input is given");
  timing->add_option("--method", o.method, "Reduction method");
  timing->add_option("--folds", o.folds, "Cross-validation folds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*reduce) return cmd_reduce(o, out, err);
    if (*fit) return cmd_fit(o, out, err);
    if (*predict) return cmd_predict(o, out, err);
    if (*validate) return cmd_validate(o, out, err);
    if (*evaluate) return cmd_evaluate(o, out, err);
    if (*synth) return cmd_synth(o, out, err);
    if (*timing) return cmd_timing(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace runtrim::cli
