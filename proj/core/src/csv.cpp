#include "driftguard/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace driftguard {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strict numeric parse: the whole token must be consumed and the value finite.
bool parse_value(const std::string& token, double& out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return false;
  return std::isfinite(out);
}

CsvDataset load_rows(const std::string& path, const FeatureSchema& schema,
                     std::ifstream& file, const std::string& header_line) {
  const auto header = split_line(header_line);
  const std::size_t expected = static_cast<std::size_t>(schema.dim) + 1;
  if (header.size() != expected) {
    raise(ErrorCode::kMissingColumn,
          path + ": header has " + std::to_string(header.size()) +
              " columns, expected " + std::to_string(expected));
  }
  for (int i = 0; i < schema.dim; ++i) {
    if (trim(header[static_cast<std::size_t>(i)]) != schema.feature_names[static_cast<std::size_t>(i)]) {
      raise(ErrorCode::kMissingColumn,
            path + ": column " + std::to_string(i) + " is '" +
                header[static_cast<std::size_t>(i)] + "', expected '" +
                schema.feature_names[static_cast<std::size_t>(i)] + "'");
    }
  }
  if (trim(header.back()) != "label") {
    raise(ErrorCode::kMissingColumn, path + ": trailing column must be 'label'");
  }

  CsvDataset out;
  out.schema = schema;
  std::string line;
  std::size_t row = 0;
  while (std::getline(file, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != expected) {
      raise(ErrorCode::kMissingColumn,
            path + ": row " + std::to_string(row) + " has " +
                std::to_string(fields.size()) + " columns");
    }
    FeatureRecord rec;
    rec.x.resize(schema.dim);
    for (int i = 0; i < schema.dim; ++i) {
      double v = 0.0;
      if (!parse_value(fields[static_cast<std::size_t>(i)], v)) {
        raise(ErrorCode::kNonNumericCell,
              path + ": row " + std::to_string(row) + ", column '" +
                  schema.feature_names[static_cast<std::size_t>(i)] + "' = '" +
                  fields[static_cast<std::size_t>(i)] + "'");
      }
      rec.x[i] = v;
    }
    rec.label = out.labels.intern(trim(fields.back()));
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty()) {
    raise(ErrorCode::kEmptyFile, path + ": no data rows");
  }
  return out;
}

}  // namespace

CsvDataset load_csv(const std::string& path, const FeatureSchema& schema) {
  schema.validate();
  std::ifstream file(path);
  if (!file) {
    raise(ErrorCode::kIoError, "cannot open " + path);
  }
  std::string header_line;
  if (!std::getline(file, header_line) || trim(header_line).empty()) {
    raise(ErrorCode::kEmptyFile, path);
  }
  return load_rows(path, schema, file, header_line);
}

CsvDataset load_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    raise(ErrorCode::kIoError, "cannot open " + path);
  }
  std::string header_line;
  if (!std::getline(file, header_line) || trim(header_line).empty()) {
    raise(ErrorCode::kEmptyFile, path);
  }
  auto header = split_line(header_line);
  if (header.size() < 2 || trim(header.back()) != "label") {
    raise(ErrorCode::kMissingColumn, path + ": trailing column must be 'label'");
  }
  FeatureSchema schema;
  schema.name = path;
  schema.dim = static_cast<int>(header.size()) - 1;
  for (std::size_t i = 0; i + 1 < header.size(); ++i) {
    schema.feature_names.push_back(trim(header[i]));
  }
  schema.validate();
  return load_rows(path, schema, file, header_line);
}

namespace {

void write_header(std::ofstream& file, const FeatureSchema& schema) {
  for (const auto& name : schema.feature_names) {
    file << name << ',';
  }
  file << "label\n";
}

void write_record(std::ofstream& file, const FeatureRecord& rec,
                  const LabelMap& labels) {
  char buf[64];
  for (Eigen::Index i = 0; i < rec.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", rec.x[i]);
    file << buf << ',';
  }
  file << (rec.has_label() ? labels.name(rec.label) : std::string("?")) << '\n';
}

}  // namespace

void write_csv(const std::string& path, const FeatureSchema& schema,
               const Dataset& records, const LabelMap& labels) {
  std::ofstream file(path);
  if (!file) {
    raise(ErrorCode::kIoError, "cannot write " + path);
  }
  write_header(file, schema);
  for (const auto& rec : records) {
    write_record(file, rec, labels);
  }
}

void write_stream_csv(const std::string& path, const WindowedStream& stream,
                      const LabelMap& labels) {
  std::ofstream file(path);
  if (!file) {
    raise(ErrorCode::kIoError, "cannot write " + path);
  }
  write_header(file, stream.schema);
  for (const auto& window : stream.windows) {
    for (const auto& rec : window) {
      write_record(file, rec, labels);
    }
  }
}

}  // namespace driftguard
