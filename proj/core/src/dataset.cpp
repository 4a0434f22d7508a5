#include "runtrim/dataset.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "runtrim/error.hpp"

namespace runtrim {
namespace {

// RFC 4180 style splitter: quoted fields may contain commas, doubled quotes
// and line breaks.
class CsvReader {
 public:
  explicit CsvReader(std::string text) : text_(std::move(text)) {}

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool quoted = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field += '"';
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n') {
        break;
      } else if (c != '\r') {
        field += c;
      }
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
};

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].find_first_not_of(" \t") == std::string::npos;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& value) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string quote_if_needed(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::uint64_t bits(double value) { return std::bit_cast<std::uint64_t>(value); }

struct RecordHash {
  const std::vector<JobRunRecord>* records;
  std::size_t operator()(std::size_t index) const {
    const auto& record = (*records)[index];
    std::size_t h = std::hash<std::uint64_t>{}(bits(record.runtime_s));
    for (const auto& value : record.features) {
      const std::size_t v = std::holds_alternative<double>(value)
                                ? std::hash<std::uint64_t>{}(bits(std::get<double>(value)))
                                : std::hash<std::string>{}(std::get<std::string>(value));
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

bool identical(const JobRunRecord& a, const JobRunRecord& b) {
  if (bits(a.runtime_s) != bits(b.runtime_s)) return false;
  if (a.features.size() != b.features.size()) return false;
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    const auto& x = a.features[i];
    const auto& y = b.features[i];
    if (x.index() != y.index()) return false;
    if (std::holds_alternative<double>(x)) {
      if (bits(std::get<double>(x)) != bits(std::get<double>(y))) return false;
    } else if (std::get<std::string>(x) != std::get<std::string>(y)) {
      return false;
    }
  }
  return true;
}

std::vector<double> Dataset::runtimes() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& record : records) out.push_back(record.runtime_s);
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out{manifest, {}};
  out.records.reserve(indices.size());
  for (const auto i : indices) out.records.push_back(records.at(i));
  return out;
}

void check_record(const DatasetManifest& manifest, const JobRunRecord& record,
                  std::size_t row_number) {
  if (record.features.size() != manifest.features.size()) {
    throw RowError(row_number, "expected " + std::to_string(manifest.features.size()) +
                                   " feature values, got " +
                                   std::to_string(record.features.size()));
  }
  for (std::size_t i = 0; i < manifest.features.size(); ++i) {
    const auto& column = manifest.features[i];
    const auto& value = record.features[i];
    if (column.kind == ColumnKind::numeric) {
      if (!std::holds_alternative<double>(value)) {
        throw RowError(row_number, "column '" + column.name + "' must be numeric");
      }
      if (!std::isfinite(std::get<double>(value))) {
        throw RowError(row_number, "column '" + column.name + "' is not finite");
      }
    } else if (!std::holds_alternative<std::string>(value)) {
      throw RowError(row_number, "column '" + column.name + "' must be categorical");
    }
  }
  if (record.numeric(manifest.scaleout_index()) < 1.0) {
    throw RowError(row_number, "scale-out '" + manifest.scaleout_column + "' must be >= 1");
  }
  if (record.numeric(manifest.datasize_index()) < 0.0) {
    throw RowError(row_number, "data size '" + manifest.datasize_column + "' must be >= 0");
  }
  if (!std::isfinite(record.runtime_s) || record.runtime_s <= 0.0) {
    throw RowError(row_number, "runtime '" + manifest.target_column + "' must be > 0");
  }
}

Dataset load_dataset(const DatasetManifest& manifest, std::istream& csv) {
  manifest.validate();
  std::string text{std::istreambuf_iterator<char>(csv), std::istreambuf_iterator<char>()};
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw SchemaError("CSV input is empty");
  }

  CsvReader reader(std::move(text));
  std::vector<std::string> fields;
  do {
    reader.next(fields);
  } while (blank(fields));

  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < fields.size(); ++i) header.emplace(std::string(trim(fields[i])), i);
  auto position = [&](const std::string& name) {
    const auto it = header.find(name);
    if (it == header.end()) throw SchemaError("CSV is missing column '" + name + "'");
    return it->second;
  };
  std::vector<std::size_t> feature_pos;
  for (const auto& column : manifest.features) feature_pos.push_back(position(column.name));
  const std::size_t target_pos = position(manifest.target_column);

  Dataset dataset{manifest, {}};
  std::size_t row = 0;
  while (reader.next(fields)) {
    if (blank(fields)) continue;
    ++row;
    if (fields.size() < header.size()) {
      throw RowError(row, "expected " + std::to_string(header.size()) + " cells, got " +
                              std::to_string(fields.size()));
    }
    JobRunRecord record;
    record.features.reserve(manifest.features.size());
    for (std::size_t i = 0; i < manifest.features.size(); ++i) {
      const auto& cell = fields[feature_pos[i]];
      if (manifest.features[i].kind == ColumnKind::numeric) {
        double value = 0.0;
        if (!parse_number(cell, value)) {
          throw RowError(row, "cannot parse '" + cell + "' in numeric column '" +
                                  manifest.features[i].name + "'");
        }
        record.features.emplace_back(value);
      } else {
        record.features.emplace_back(std::string(trim(cell)));
      }
    }
    if (!parse_number(fields[target_pos], record.runtime_s)) {
      throw RowError(row, "cannot parse runtime '" + fields[target_pos] + "'");
    }
    check_record(manifest, record, row);
    dataset.records.push_back(std::move(record));
  }
  return dataset;
}

Dataset load_dataset_file(const DatasetManifest& manifest, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_dataset(manifest, in);
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  const auto& manifest = dataset.manifest;
  for (const auto& column : manifest.features) out << quote_if_needed(column.name) << ',';
  out << quote_if_needed(manifest.target_column) << '\n';
  for (const auto& record : dataset.records) {
    for (const auto& value : record.features) {
      if (std::holds_alternative<double>(value)) {
        out << format_double(std::get<double>(value));
      } else {
        out << quote_if_needed(std::get<std::string>(value));
      }
      out << ',';
    }
    out << format_double(record.runtime_s) << '\n';
  }
}

Dataset deduplicate(const Dataset& dataset) {
  Dataset out{dataset.manifest, {}};
  const auto& records = dataset.records;
  auto equal = [&](std::size_t a, std::size_t b) { return identical(records[a], records[b]); };
  std::unordered_set<std::size_t, RecordHash, decltype(equal)> seen(
      records.size() * 2 + 1, RecordHash{&records}, equal);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (seen.insert(i).second) out.records.push_back(records[i]);
  }
  return out;
}

}  // namespace runtrim
