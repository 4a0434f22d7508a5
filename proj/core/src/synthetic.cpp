#include "runtrim/synthetic.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "runtrim/error.hpp"
#include "runtrim/rng.hpp"

namespace runtrim {
namespace {

using nlohmann::json;

constexpr const char* kMachines = "machines";
constexpr const char* kDataSize = "data_size_mb";
constexpr const char* kNodeType = "node_type";
constexpr const char* kRuntime = "runtime_s";
constexpr std::size_t kFirstParameter = 3;

SyntheticSpec job(std::string type, std::array<double, 4> theta, std::vector<double> sizes,
                  std::vector<SyntheticParameter> parameters) {
  SyntheticSpec spec;
  spec.job_type = std::move(type);
  spec.theta = theta;
  spec.machines = {2, 4, 8, 12};
  spec.datasizes = std::move(sizes);
  spec.parameters = std::move(parameters);
  spec.node_types = {{"m5.xlarge", 1.0}, {"c5.xlarge", 0.88}};
  spec.noise_sigma = 0.05;
  spec.rows = 186;
  spec.duplicate_fraction = 0.1;
  return spec;
}

SyntheticSpec spec_from_json(const json& j) {
  SyntheticSpec spec;
  spec.job_type = j.at("job_type").get<std::string>();
  const auto theta = j.at("theta").get<std::vector<double>>();
  if (theta.size() != 4) throw ParseError("theta must have four coefficients");
  std::copy(theta.begin(), theta.end(), spec.theta.begin());
  spec.machines = j.at("machines").get<std::vector<double>>();
  spec.datasizes = j.at("datasizes").get<std::vector<double>>();
  for (const auto& p : j.value("parameters", json::array())) {
    spec.parameters.push_back({p.at("name").get<std::string>(), p.at("levels").get<std::vector<double>>(),
                               p.value("exponent", 0.0), p.value("reference", 1.0)});
  }
  for (const auto& n : j.at("node_types")) {
    spec.node_types.push_back({n.at("name").get<std::string>(), n.value("factor", 1.0)});
  }
  spec.noise_sigma = j.value("noise_sigma", 0.05);
  spec.rows = j.value("rows", std::size_t{100});
  spec.duplicate_fraction = j.value("duplicate_fraction", 0.1);
  return spec;
}

json spec_json(const SyntheticSpec& spec) {
  json parameters = json::array();
  for (const auto& p : spec.parameters) {
    parameters.push_back({{"name", p.name}, {"levels", p.levels}, {"exponent", p.exponent},
                          {"reference", p.reference}});
  }
  json nodes = json::array();
  for (const auto& n : spec.node_types) nodes.push_back({{"name", n.name}, {"factor", n.factor}});
  return {{"job_type", spec.job_type},
          {"theta", std::vector<double>(spec.theta.begin(), spec.theta.end())},
          {"machines", spec.machines},
          {"datasizes", spec.datasizes},
          {"parameters", parameters},
          {"node_types", nodes},
          {"noise_sigma", spec.noise_sigma},
          {"rows", spec.rows},
          {"duplicate_fraction", spec.duplicate_fraction}};
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [&](const std::string& what) { throw ParameterError(job_type + ": " + what); };
  if (machines.empty()) fail("machine counts are empty");
  if (datasizes.empty()) fail("data sizes are empty");
  if (node_types.empty()) fail("node types are empty");
  for (const double m : machines) {
    if (!(m >= 1.0)) fail("machine counts must be >= 1");
  }
  for (const double s : datasizes) {
    if (!(s >= 0.0)) fail("data sizes must be >= 0");
  }
  for (const double t : theta) {
    if (!(t >= 0.0)) fail("theta must be non-negative");
  }
  std::set<std::string> names{kMachines, kDataSize, kNodeType, kRuntime};
  for (const auto& p : parameters) {
    if (p.levels.empty()) fail("parameter '" + p.name + "' has no levels");
    if (!names.insert(p.name).second) fail("duplicate column name '" + p.name + "'");
    if (!(p.reference > 0.0)) fail("parameter reference must be positive");
    for (const double v : p.levels) {
      if (!(v > 0.0)) fail("parameter levels must be positive");
    }
  }
  for (const auto& n : node_types) {
    if (!(n.factor > 0.0)) fail("node type factors must be positive");
  }
  if (rows < 10) fail("at least 10 rows are required");
  if (!(duplicate_fraction >= 0.0 && duplicate_fraction < 1.0)) fail("duplicate fraction must lie in [0, 1)");
  if (!(noise_sigma >= 0.0)) fail("noise sigma must be >= 0");
}

DatasetManifest synthetic_manifest(const SyntheticSpec& spec) {
  DatasetManifest manifest;
  manifest.job_type = spec.job_type;
  manifest.features = {{kMachines, ColumnKind::numeric},
                       {kDataSize, ColumnKind::numeric},
                       {kNodeType, ColumnKind::categorical}};
  for (const auto& p : spec.parameters) manifest.features.push_back({p.name, ColumnKind::numeric});
  manifest.scaleout_column = kMachines;
  manifest.datasize_column = kDataSize;
  manifest.target_column = kRuntime;
  return manifest;
}

double context_factor(const SyntheticSpec& spec, const JobRunRecord& record) {
  double factor = 1.0;
  const auto& node = record.category(2);
  for (const auto& n : spec.node_types) {
    if (n.name == node) factor *= n.factor;
  }
  for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
    const auto& p = spec.parameters[i];
    factor *= std::pow(record.numeric(kFirstParameter + i) / p.reference, p.exponent);
  }
  return factor;
}

double ground_truth_runtime(const SyntheticSpec& spec, const JobRunRecord& record) {
  const double m = record.numeric(0);
  const double s = record.numeric(1);
  const double ernest = spec.theta[0] + spec.theta[1] * s / m + spec.theta[2] * std::log2(m) +
                        spec.theta[3] * m;
  return context_factor(spec, record) * ernest;
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Dataset dataset{synthetic_manifest(spec), {}};

  const auto duplicates = static_cast<std::size_t>(
      std::llround(spec.duplicate_fraction * static_cast<double>(spec.rows)));
  const std::size_t unique = spec.rows - duplicates;
  auto pick = [&](const std::vector<double>& levels) { return levels[rng.index(levels.size())]; };

  for (std::size_t i = 0; i < unique; ++i) {
    JobRunRecord record;
    record.features.emplace_back(pick(spec.machines));
    record.features.emplace_back(pick(spec.datasizes));
    record.features.emplace_back(spec.node_types[rng.index(spec.node_types.size())].name);
    for (const auto& p : spec.parameters) record.features.emplace_back(pick(p.levels));
    const double noise = std::exp(spec.noise_sigma * rng.normal());
    record.runtime_s = ground_truth_runtime(spec, record) * noise;
    if (!(record.runtime_s > 0.0)) {
      throw ParameterError(spec.job_type + ": generator produced a non-positive runtime");
    }
    dataset.records.push_back(std::move(record));
  }
  // Recurring jobs: verbatim copies placed somewhere after their source row.
  for (std::size_t d = 0; d < duplicates; ++d) {
    const std::size_t size = dataset.records.size();
    const std::size_t source = rng.index(size);
    const std::size_t position = source + 1 + rng.index(size - source);
    JobRunRecord copy = dataset.records[source];
    dataset.records.insert(dataset.records.begin() + static_cast<std::ptrdiff_t>(position),
                           std::move(copy));
  }
  return dataset;
}

SyntheticSuite default_suite() {
  SyntheticSuite suite;
  suite.seed = 2021;
  suite.jobs = {
      job("sort", {25.0, 0.012, 10.0, 0.6}, {10000, 15000}, {{"line_length", {10, 100}, 0.1, 10}}),
      job("grep", {15.0, 0.006, 6.0, 0.4}, {10000, 20000}, {{"keyword_share", {0.01, 0.1}, 0.08, 0.01}}),
      job("sgd", {40.0, 0.02, 15.0, 1.0}, {5000, 10000}, {{"iterations", {50, 100}, 0.7, 50}}),
      job("kmeans", {35.0, 0.015, 12.0, 0.9}, {5000, 10000}, {{"k", {3, 9}, 0.35, 3}}),
      job("pagerank", {30.0, 0.03, 20.0, 1.2}, {2000, 4000}, {{"convergence", {0.001, 0.0001}, -0.12, 0.001}}),
  };
  return suite;
}

std::vector<Dataset> generate_suite(const SyntheticSuite& suite) {
  std::vector<Dataset> out;
  for (std::size_t i = 0; i < suite.jobs.size(); ++i) {
    out.push_back(generate_synthetic(suite.jobs[i], derive_seed(suite.seed, i)));
  }
  return out;
}

SyntheticSuite parse_suite_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    SyntheticSuite suite;
    suite.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("jobs")) {
      for (const auto& spec : j.at("jobs")) suite.jobs.push_back(spec_from_json(spec));
    } else {
      suite.jobs.push_back(spec_from_json(j));
    }
    for (const auto& spec : suite.jobs) spec.validate();
    return suite;
  } catch (const json::exception& e) {
    throw ParseError(std::string("synthetic spec: ") + e.what());
  }
}

std::string suite_to_json(const SyntheticSuite& suite) {
  json jobs = json::array();
  for (const auto& spec : suite.jobs) jobs.push_back(spec_json(spec));
  return json{{"seed", suite.seed}, {"jobs", jobs}}.dump(2) + "\n";
}

std::string spec_to_json(const SyntheticSpec& spec, std::uint64_t seed) {
  json j = spec_json(spec);
  j["seed"] = seed;
  j["runtime_model"] =
      "runtime = node_factor * prod((param/reference)^exponent) * "
      "(theta0 + theta1*s/m + theta2*log2(m) + theta3*m) * exp(noise_sigma * N(0,1))";
  return j.dump(2) + "\n";
}

}  // namespace runtrim
