#pragma once

#include <string>

#include "driftguard/schema.hpp"

namespace driftguard {

struct CsvDataset {
  Dataset records;
  LabelMap labels;
  FeatureSchema schema;
};

// Loads a feature CSV: UTF-8, comma separated, header row of feature names
// followed by a trailing "label" column. The header must match the schema
// exactly. Label strings are interned to dense ids in first-appearance order.
CsvDataset load_csv(const std::string& path, const FeatureSchema& schema);

// Same, deriving the schema from the header (all columns but "label").
CsvDataset load_csv(const std::string& path);

// Writes records in the load_csv format. Records must be labeled and the
// label map must cover every id.
void write_csv(const std::string& path, const FeatureSchema& schema,
               const Dataset& records, const LabelMap& labels);

// Stream CSV is the dataset format in window order; the companion truth
// sidecar carries (window, sample_index, concept_id, is_drifted) rows.
void write_stream_csv(const std::string& path, const WindowedStream& stream,
                      const LabelMap& labels);

}  // namespace driftguard
