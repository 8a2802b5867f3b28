#include "qxai/csv.hpp"

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace qxai {

void FeatureSchema::validate() const {
  if (names.empty()) throw ConfigError("schema: no feature columns");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw ConfigError("schema: empty feature name");
    if (!seen.insert(n).second) throw ConfigError("schema: duplicate feature name '" + n + "'");
  }
  if (target.columns.empty()) throw ConfigError("schema: no target columns");
  for (const auto& c : target.columns) {
    if (seen.count(c)) throw ConfigError("schema: target column '" + c + "' is also a feature");
  }
  if (target.kind == TargetKind::regression && target.columns.size() != 1)
    throw ConfigError("schema: regression target must be a single column");
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, delim)) out.push_back(cur);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
  std::string s = trim(raw);
  double v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw IoError("csv: unparseable value '" + s + "' at row " + std::to_string(row) +
                  ", column '" + col + "'");
  if (!std::isfinite(v))
    throw IoError("csv: non-finite value at row " + std::to_string(row) + ", column '" + col +
                  "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const CsvOptions& options) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty file '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_line(line, options.delimiter);
  for (auto& h : header) h = trim(h);

  std::unordered_map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < header.size(); ++i) col_index[header[i]] = i;

  auto require = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw IoError("csv: missing column '" + name + "'");
    return it->second;
  };

  std::vector<std::size_t> feat_cols;
  for (const auto& n : schema.names) feat_cols.push_back(require(n));
  std::vector<std::size_t> target_cols;
  for (const auto& c : schema.target.columns) target_cols.push_back(require(c));
  std::optional<std::size_t> subj_col, act_col;
  if (schema.groups.subject) subj_col = require(*schema.groups.subject);
  if (schema.groups.activity) act_col = require(*schema.groups.activity);

  Dataset ds;
  ds.schema = schema;
  std::size_t row_no = 1;  // file line number; the header is line 1
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row_no;
    auto cells = split_line(line, options.delimiter);
    if (cells.size() != header.size())
      throw IoError("csv: row " + std::to_string(row_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(header.size()));
    std::vector<double> feats(feat_cols.size());
    for (std::size_t j = 0; j < feat_cols.size(); ++j)
      feats[j] = parse_cell(cells[feat_cols[j]], row_no, schema.names[j]);
    std::vector<double> tgt(target_cols.size());
    for (std::size_t j = 0; j < target_cols.size(); ++j) {
      tgt[j] = parse_cell(cells[target_cols[j]], row_no, schema.target.columns[j]);
      if (schema.target.kind == TargetKind::multilabel && tgt[j] != 0.0 && tgt[j] != 1.0)
        throw IoError("csv: multi-label target must be 0/1 at row " + std::to_string(row_no) +
                      ", column '" + schema.target.columns[j] + "'");
    }
    GroupKey gk;
    if (subj_col) gk.subject = trim(cells[*subj_col]);
    if (act_col) gk.activity = trim(cells[*act_col]);
    ds.rows.push_back(std::move(feats));
    ds.targets.push_back(std::move(tgt));
    if (subj_col || act_col) ds.groups.push_back(std::move(gk));
    ds.orig_index.push_back(ds.rows.size() - 1);
  }
  if (ds.rows.empty()) throw IoError("csv: no data rows in '" + path.string() + "'");
  return ds;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("schema: cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("schema: invalid JSON in '" + path.string() + "': " + e.what());
  }
  FeatureSchema s;
  try {
    s.names = j.at("features").get<std::vector<std::string>>();
    const auto& t = j.at("target");
    std::string kind = t.at("kind").get<std::string>();
    if (kind == "regression")
      s.target.kind = TargetKind::regression;
    else if (kind == "multilabel")
      s.target.kind = TargetKind::multilabel;
    else
      throw ConfigError("schema: unknown target kind '" + kind + "'");
    s.target.columns = t.at("columns").get<std::vector<std::string>>();
    if (j.contains("groups")) {
      const auto& g = j["groups"];
      if (g.contains("subject") && !g["subject"].is_null())
        s.groups.subject = g["subject"].get<std::string>();
      if (g.contains("activity") && !g["activity"].is_null())
        s.groups.activity = g["activity"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("schema: malformed sidecar '" + path.string() + "': " + e.what());
  }
  s.validate();
  return s;
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
  nlohmann::json j;
  j["features"] = schema.names;
  j["target"]["kind"] =
      schema.target.kind == TargetKind::regression ? "regression" : "multilabel";
  j["target"]["columns"] = schema.target.columns;
  if (schema.groups.subject) j["groups"]["subject"] = *schema.groups.subject;
  if (schema.groups.activity) j["groups"]["activity"] = *schema.groups.activity;
  std::ofstream out(path);
  if (!out) throw IoError("schema: cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

void save_csv(const Dataset& data, const std::filesystem::path& path,
              const CsvOptions& options) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot write '" + path.string() + "'");
  const char d = options.delimiter;
  for (std::size_t j = 0; j < data.schema.names.size(); ++j)
    out << (j ? std::string(1, d) : "") << data.schema.names[j];
  for (const auto& c : data.schema.target.columns) out << d << c;
  if (data.schema.groups.subject) out << d << *data.schema.groups.subject;
  if (data.schema.groups.activity) out << d << *data.schema.groups.activity;
  out << "\n";
  out.precision(DBL_DECIMAL_DIG);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    for (std::size_t j = 0; j < data.rows[i].size(); ++j)
      out << (j ? std::string(1, d) : "") << data.rows[i][j];
    for (double t : data.targets[i]) out << d << t;
    if (data.schema.groups.subject) out << d << data.groups[i].subject;
    if (data.schema.groups.activity) out << d << data.groups[i].activity;
    out << "\n";
  }
}

}  // namespace qxai
