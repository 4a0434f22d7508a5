#include "runtrim/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "runtrim/error.hpp"

namespace runtrim {
namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

void DatasetManifest::validate() const {
  if (features.empty()) throw SchemaError("manifest declares no feature columns");
  if (target_column.empty()) throw SchemaError("manifest declares no target column");
  if (scaleout_column.empty()) throw SchemaError("manifest declares no scaleout column");
  if (datasize_column.empty()) throw SchemaError("manifest declares no datasize column");

  std::set<std::string> seen;
  for (const auto& column : features) {
    if (column.name.empty()) throw SchemaError("manifest has an unnamed feature column");
    if (!seen.insert(column.name).second) {
      throw SchemaError("duplicate column name '" + column.name + "'");
    }
  }
  if (seen.count(target_column) != 0) {
    throw SchemaError("target column '" + target_column + "' is also declared as a feature");
  }
  if (scaleout_column == datasize_column) {
    throw SchemaError("scaleout and datasize columns must differ");
  }
  for (const auto* role : {&scaleout_column, &datasize_column}) {
    const auto& column = features[feature_index(*role)];
    if (column.kind != ColumnKind::numeric) {
      throw SchemaError("column '" + *role + "' must be numeric");
    }
  }
}

std::size_t DatasetManifest::feature_index(std::string_view name) const {
  const auto it = std::find_if(features.begin(), features.end(),
                               [&](const FeatureColumn& c) { return c.name == name; });
  if (it == features.end()) {
    throw SchemaError("column '" + std::string(name) + "' is not a declared feature");
  }
  return static_cast<std::size_t>(it - features.begin());
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest manifest;
  std::size_t line_number = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_number;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("manifest line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto where = "manifest line " + std::to_string(line_number) + ": ";

    if (key == "job_type") {
      manifest.job_type = value;
    } else if (key == "scaleout") {
      manifest.scaleout_column = value;
    } else if (key == "datasize") {
      manifest.datasize_column = value;
    } else if (key == "target") {
      manifest.target_column = value;
    } else if (key == "feature") {
      std::istringstream fields(value);
      std::string name, kind, extra;
      fields >> name >> kind;
      if (name.empty() || kind.empty() || (fields >> extra)) {
        throw ParseError(where + "expected 'feature = <name> <numeric|categorical>'");
      }
      if (kind == "numeric") {
        manifest.features.push_back({name, ColumnKind::numeric});
      } else if (kind == "categorical") {
        manifest.features.push_back({name, ColumnKind::categorical});
      } else {
        throw ParseError(where + "unknown column kind '" + kind + "'");
      }
    } else {
      throw ParseError(where + "unknown key '" + key + "'");
    }
  }
  manifest.validate();
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str());
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::ostringstream out;
  out << "job_type = " << manifest.job_type << '\n'
      << "scaleout = " << manifest.scaleout_column << '\n'
      << "datasize = " << manifest.datasize_column << '\n'
      << "target = " << manifest.target_column << '\n';
  for (const auto& column : manifest.features) {
    out << "feature = " << column.name << ' ' << to_string(column.kind) << '\n';
  }
  return out.str();
}

}  // namespace runtrim
