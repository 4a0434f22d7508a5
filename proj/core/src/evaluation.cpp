#include "runtrim/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "runtrim/error.hpp"
#include "runtrim/reduction.hpp"
#include "runtrim/rng.hpp"
#include "runtrim/selector.hpp"
#include "runtrim/svg.hpp"
#include "runtrim/synthetic.hpp"

namespace runtrim {
namespace {

using Clock = std::chrono::steady_clock;
constexpr std::string_view kSelector = "c3o";

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::optional<double> stddev_of(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  const double mean = mean_of(values);
  double sum = 0.0;
  for (const double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

struct Cell {
  std::vector<double> mapes;
  std::vector<double> times;
  std::vector<double> sizes;
};

double test_mape(const Dataset& test, auto&& predict_one) {
  std::vector<double> predictions;
  predictions.reserve(test.size());
  for (const auto& record : test.records) predictions.push_back(predict_one(record));
  return mape(predictions, test.runtimes());
}

std::string optional_field(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string{};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Mean of `value` over job types, keyed by level, for rows matching `keep`.
template <typename Keep, typename Value>
std::vector<std::pair<double, double>> averaged(const EvaluationReport& report, Keep keep, Value value) {
  std::map<double, std::pair<double, std::size_t>> sums;
  for (const auto& row : report.rows) {
    if (row.runs == 0 || !keep(row)) continue;
    auto& [sum, count] = sums[row.level];
    sum += value(row);
    ++count;
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [level, acc] : sums) points.emplace_back(level, acc.first / static_cast<double>(acc.second));
  return points;
}

std::vector<double> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) out[order[t]] = rank;
    i = j + 1;
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ParameterError("experiment has no datasets");
  if (methods.empty()) throw ParameterError("experiment has no clustering methods");
  if (levels.empty()) throw ParameterError("experiment has no reduction levels");
  for (const double level : levels) {
    if (!(level > 0.0 && level <= 1.0)) throw ParameterError("reduction levels must lie in (0, 1]");
  }
  if (dbscan_eps) {
    if (dbscan_eps->empty()) throw ParameterError("dbscan_eps is empty");
    for (const double eps : *dbscan_eps) {
      if (!(eps > 0.0 && std::isfinite(eps))) throw ParameterError("dbscan_eps values must be positive");
    }
  }
  if (repetitions == 0) throw ParameterError("repetitions must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ParameterError("test_fraction must lie in (0, 1)");
  if (folds < 2) throw ParameterError("folds must be >= 2");
  if (models.empty()) throw ParameterError("experiment has no models");
  for (const auto& model : models) {
    if (model != kSelector) parse_model_kind(model);
  }
  for (const auto& job : datasets) {
    if (job.data.size() < 3) throw ParameterError(job.job_type + ": at least three records are required");
  }
}

EvaluationReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool want_selector = std::find(config.models.begin(), config.models.end(), kSelector) != config.models.end();

  EvaluationReport report;
  for (std::size_t job_index = 0; job_index < config.datasets.size(); ++job_index) {
    const JobDataset& job = config.datasets[job_index];
    const std::uint64_t job_seed = derive_seed(config.base_seed, job_index);

    struct Setting {
      Method method;
      double level;
      bool is_eps;
    };
    std::vector<Setting> settings;
    for (const Method method : config.methods) {
      if (method == Method::dbscan && config.dbscan_eps) {
        for (const double eps : *config.dbscan_eps) settings.push_back({method, eps, true});
      } else {
        for (const double level : config.levels) settings.push_back({method, level, false});
      }
    }

    std::vector<std::vector<Cell>> cells(settings.size(), std::vector<Cell>(config.models.size()));
    std::size_t test_rows = 0;
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t rep_seed = derive_seed(job_seed, rep);
      const HoldoutSplit split = holdout_split(job.data, config.test_fraction, rep_seed);
      test_rows = split.test.size();

      for (std::size_t s = 0; s < settings.size(); ++s) {
        ReductionRequest request;
        request.method = settings[s].method;
        if (settings[s].is_eps) request.eps = settings[s].level;
        else request.retained_fraction = settings[s].level;
        request.seed = rep_seed;

        Dataset train;
        try {
          train = reduce_dataset(split.train, request).dataset;
        } catch (const ParameterError&) {
          continue;
        }
        const auto reduced_size = static_cast<double>(train.size());

        std::optional<TrainedPredictor> selector;
        double selector_ms = 0.0;
        if (want_selector && train.size() >= 2) {
          const auto start = Clock::now();
          try {
            selector = c3o_select(train, config.folds, rep_seed);
          } catch (const ModelUnavailable&) {
          }
          selector_ms = elapsed_ms(start);
        }

        for (std::size_t m = 0; m < config.models.size(); ++m) {
          Cell& cell = cells[s][m];
          const std::string& name = config.models[m];
          if (name == kSelector) {
            if (!selector) continue;
            cell.mapes.push_back(test_mape(split.test, [&](const JobRunRecord& r) { return selector->predict(r); }));
            cell.times.push_back(selector_ms);
          } else {
            const ModelKind kind = parse_model_kind(name);
            std::optional<AnyModel> model;
            double ms = 0.0;
            if (selector) {
              if (selector->available(kind)) {
                model = selector->models[static_cast<std::size_t>(kind)];
                ms = selector->fit_time_ms[static_cast<std::size_t>(kind)];
              }
            } else {
              const auto start = Clock::now();
              try {
                model = fit_model(kind, train);
              } catch (const ModelUnavailable&) {
              }
              ms = elapsed_ms(start);
            }
            if (!model) continue;
            cell.mapes.push_back(test_mape(split.test, [&](const JobRunRecord& r) { return predict(*model, r); }));
            cell.times.push_back(ms);
          }
          cell.sizes.push_back(reduced_size);
        }
      }
    }

    for (std::size_t s = 0; s < settings.size(); ++s) {
      for (std::size_t m = 0; m < config.models.size(); ++m) {
        const Cell& cell = cells[s][m];
        EvaluationRow row;
        row.job_type = job.job_type;
        row.method = settings[s].method;
        row.level = settings[s].level;
        row.test_rows = test_rows;
        row.model = config.models[m];
        row.runs = cell.mapes.size();
        if (row.runs > 0) {
          row.achieved_size = mean_of(cell.sizes);
          row.mean_mape = mean_of(cell.mapes);
          row.stddev_mape = stddev_of(cell.mapes);
          row.mean_train_time_ms = mean_of(cell.times);
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

void write_report_csv(const EvaluationReport& report, std::ostream& out, bool include_timing) {
  out << "job_type,method,level,achieved_size,test_rows,model,runs,mean_mape,stddev_mape";
  if (include_timing) out << ",mean_train_time_ms";
  out << '\n';
  for (const auto& row : report.rows) {
    const bool present = row.runs > 0;
    out << row.job_type << ',' << to_string(row.method) << ',' << format_double(row.level) << ','
        << (present ? format_double(row.achieved_size) : "") << ',' << row.test_rows << ',' << row.model << ','
        << row.runs << ',' << (present ? format_double(row.mean_mape) : "") << ','
        << optional_field(row.stddev_mape);
    if (include_timing) out << ',' << (present ? format_double(row.mean_train_time_ms) : "");
    out << '\n';
  }
}

void write_report_svgs(const EvaluationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<Method> methods;
  std::vector<std::string> models;
  for (const auto& row : report.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) methods.push_back(row.method);
    if (std::find(models.begin(), models.end(), row.model) == models.end()) models.push_back(row.model);
  }
  const std::string headline =
      std::find(models.begin(), models.end(), kSelector) != models.end() ? std::string(kSelector) : models.front();

  for (const Method method : methods) {
    LineChart chart{"Test MAPE vs retained data (" + std::string(to_string(method)) + ")", "level",
                    "MAPE (%)", {}};
    for (const auto& model : models) {
      chart.series.push_back({model, averaged(
                                         report,
                                         [&](const EvaluationRow& r) { return r.method == method && r.model == model; },
                                         [](const EvaluationRow& r) { return r.mean_mape; })});
    }
    write_file(dir / ("mape_" + std::string(to_string(method)) + ".svg"), render_line_chart(chart));
  }

  LineChart comparison{"Clustering methods (" + headline + ")", "level", "MAPE (%)", {}};
  LineChart timing{"Training time vs retained data (" + headline + ")", "level", "time (ms)", {}};
  for (const Method method : methods) {
    auto keep = [&](const EvaluationRow& r) { return r.method == method && r.model == headline; };
    comparison.series.push_back(
        {std::string(to_string(method)), averaged(report, keep, [](const EvaluationRow& r) { return r.mean_mape; })});
    timing.series.push_back({std::string(to_string(method)),
                             averaged(report, keep, [](const EvaluationRow& r) { return r.mean_train_time_ms; })});
  }
  write_file(dir / "comparison.svg", render_line_chart(comparison));
  write_file(dir / "training_time.svg", render_line_chart(timing));
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    const json j = json::parse(text);
    ExperimentConfig config;
    config.repetitions = j.value("repetitions", config.repetitions);
    config.test_fraction = j.value("test_fraction", config.test_fraction);
    config.base_seed = j.value("base_seed", config.base_seed);
    config.folds = j.value("folds", config.folds);
    if (j.contains("models")) config.models = j.at("models").get<std::vector<std::string>>();
    config.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("dbscan_eps")) config.dbscan_eps = j.at("dbscan_eps").get<std::vector<double>>();
    for (const auto& name : j.at("methods")) config.methods.push_back(parse_method(name.get<std::string>()));

    if (j.contains("suite")) {
      const auto source = j.at("suite").get<std::string>();
      SyntheticSuite suite;
      if (source == "default") {
        suite = default_suite();
      } else {
        std::ifstream in(resolve(source), std::ios::binary);
        if (!in) throw ParseError("cannot open suite " + resolve(source).string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        suite = parse_suite_json(buffer.str());
      }
      if (j.contains("suite_seed")) suite.seed = j.at("suite_seed").get<std::uint64_t>();
      auto data = generate_suite(suite);
      for (std::size_t i = 0; i < data.size(); ++i) config.datasets.push_back({suite.jobs[i].job_type, std::move(data[i])});
    }
    for (const auto& entry : j.value("datasets", json::array())) {
      const DatasetManifest manifest = load_manifest(resolve(entry.at("manifest").get<std::string>()));
      Dataset data = load_dataset_file(manifest, resolve(entry.at("csv").get<std::string>()).string());
      const std::string job_type = entry.value("job_type", manifest.job_type);
      config.datasets.push_back({job_type, std::move(data)});
    }
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), path.parent_path());
}

TimingStudy measure_training_time(const Dataset& dataset, std::span<const double> levels, std::size_t repetitions,
                                  std::uint64_t seed, Method method, std::size_t folds) {
  if (repetitions == 0) throw ParameterError("repetitions must be >= 1");
  TimingStudy study;
  for (const double level : levels) {
    ReductionRequest request;
    request.method = method;
    request.retained_fraction = level;
    request.seed = seed;
    const Dataset reduced = reduce_dataset(dataset, request).dataset;

    c3o_select(reduced, folds, seed);  // warm-up, discarded
    std::vector<double> times;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = Clock::now();
      c3o_select(reduced, folds, derive_seed(seed, rep));
      times.push_back(elapsed_ms(start));
    }
    study.rows.push_back({level, reduced.size(), repetitions, mean_of(times), stddev_of(times)});
  }
  std::vector<double> x, y;
  for (const auto& row : study.rows) {
    x.push_back(row.level);
    y.push_back(row.mean_ms);
  }
  study.spearman = spearman_correlation(x, y);
  return study;
}

std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("spearman inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean_of(rx);
  const double my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

void write_timing_csv(const TimingStudy& study, std::ostream& out) {
  out << "level,training_size,repetitions,mean_ms,stddev_ms\n";
  for (const auto& row : study.rows) {
    out << format_double(row.level) << ',' << row.training_size << ',' << row.repetitions << ','
        << format_double(row.mean_ms) << ',' << optional_field(row.stddev_ms) << '\n';
  }
}

}  // namespace runtrim
