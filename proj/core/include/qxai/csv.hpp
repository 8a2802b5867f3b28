#pragma once

#include <filesystem>
#include <string>

#include "qxai/types.hpp"

namespace qxai {

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

/// Parses a UTF-8 CSV with a header row into a Dataset. Columns are bound by
/// name against the schema (order-insensitive); rows with unparseable or
/// non-finite values are a hard error naming the row and column.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const CsvOptions& options = {});

/// Reads the schema sidecar:
/// {"features":[...], "target":{"kind":..., "columns":[...]}, "groups":{...}}
FeatureSchema load_schema(const std::filesystem::path& path);

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

void save_csv(const Dataset& data, const std::filesystem::path& path,
              const CsvOptions& options = {});

}  // namespace qxai
