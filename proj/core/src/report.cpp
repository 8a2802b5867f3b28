#include "qxai/explain/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qxai::explain {

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "svg") return ReportFormat::svg;
  if (name == "html") return ReportFormat::html;
  throw ConfigError("report: unknown format '" + name + "'");
}

namespace {

constexpr int kSchemaVersion = 1;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("report: cannot write '" + path.string() + "'");
  out << text;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Horizontal bar chart; signed values extend left (red) or right (blue)
// of a center axis.
std::string render_bars(const std::string& title,
                        const std::vector<std::string>& labels,
                        const std::vector<double>& values, bool signed_values) {
  const int bar_h = 18, gap = 6, left = 150, width = 640, top = 30;
  const int n = int(labels.size());
  const int height = top + n * (bar_h + gap) + 10;
  double maxabs = 1e-300;
  for (double v : values) maxabs = std::max(maxabs, std::abs(v));
  const double plot_w = double(width - left - 20);
  const double cx = signed_values ? left + plot_w / 2.0 : double(left);
  const double scale = (signed_values ? plot_w / 2.0 : plot_w) / maxabs;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<text x=\"10\" y=\"18\" font-size=\"14\" font-family=\"sans-serif\">"
      << escape(title) << "</text>\n";
  svg << "<line x1=\"" << cx << "\" y1=\"" << top << "\" x2=\"" << cx << "\" y2=\""
      << height - 6 << "\" stroke=\"#999\"/>\n";
  for (int i = 0; i < n; ++i) {
    const double v = values[i];
    const int y = top + i * (bar_h + gap);
    const double w = std::abs(v) * scale;
    const double x = v >= 0 ? cx : cx - w;
    const char* color = (signed_values && v < 0) ? "#d62728" : "#1f77b4";
    svg << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
        << "\" height=\"" << bar_h << "\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"5\" y=\"" << y + bar_h - 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(labels[i])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string wrap_html(const std::string& title, const std::string& svg,
                      const std::vector<std::string>& labels,
                      const std::vector<double>& values) {
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << escape(title)
       << "</title></head><body>\n<h2>" << escape(title) << "</h2>\n"
       << svg << "<table border=\"1\" cellpadding=\"4\">\n<tr><th>feature</th>"
       << "<th>value</th></tr>\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    html << "<tr><td>" << escape(labels[i]) << "</td><td>" << values[i] << "</td></tr>\n";
  html << "</table>\n</body></html>\n";
  return html.str();
}

// Non-zero forces only, |force| descending, for bar rendering.
void force_bars(const ForceDecomposition& fd, std::vector<std::string>& labels,
                std::vector<double>& values) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < fd.forces.size(); ++j)
    if (fd.forces[j] != 0.0) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(fd.forces[a]) > std::abs(fd.forces[b]);
  });
  for (std::size_t j : idx) {
    labels.push_back(fd.feature_names[j]);
    values.push_back(fd.forces[j]);
  }
}

}  // namespace

nlohmann::json to_json(const GlobalImportance& gi) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "global_importance"},
          {"method", gi.method},
          {"n_instances", gi.n_instances},
          {"feature_names", gi.feature_names},
          {"importance", gi.importance},
          {"ranking", gi.ranking}};
}

GlobalImportance global_importance_from_json(const nlohmann::json& j) {
  GlobalImportance gi;
  gi.method = j.at("method").get<std::string>();
  gi.n_instances = j.at("n_instances").get<std::size_t>();
  gi.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  gi.importance = j.at("importance").get<std::vector<double>>();
  gi.ranking = j.at("ranking").get<std::vector<std::size_t>>();
  return gi;
}

nlohmann::json to_json(const ForceDecomposition& fd) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "force_decomposition"},
          {"method", fd.method},
          {"base_value", fd.base_value},
          {"prediction", fd.prediction},
          {"feature_names", fd.feature_names},
          {"forces", fd.forces},
          {"positive", fd.positive},
          {"negative", fd.negative}};
}

ForceDecomposition force_from_json(const nlohmann::json& j) {
  ForceDecomposition fd;
  fd.method = j.at("method").get<std::string>();
  fd.base_value = j.at("base_value").get<double>();
  fd.prediction = j.at("prediction").get<double>();
  fd.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  fd.forces = j.at("forces").get<std::vector<double>>();
  fd.positive = j.at("positive").get<std::vector<std::size_t>>();
  fd.negative = j.at("negative").get<std::vector<std::size_t>>();
  return fd;
}

nlohmann::json to_json(const GroupExplanation& ge) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : ge.members) members.push_back(to_json(m));
  return {{"schema_version", kSchemaVersion},
          {"kind", "group_explanation"},
          {"group_key", ge.group_key},
          {"method", ge.method},
          {"feature_names", ge.feature_names},
          {"mean_phi", ge.mean_phi},
          {"min_phi", ge.min_phi},
          {"max_phi", ge.max_phi},
          {"members", members}};
}

GroupExplanation group_from_json(const nlohmann::json& j) {
  GroupExplanation ge;
  ge.group_key = j.at("group_key").get<std::string>();
  ge.method = j.at("method").get<std::string>();
  ge.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  ge.mean_phi = j.at("mean_phi").get<std::vector<double>>();
  ge.min_phi = j.at("min_phi").get<std::vector<double>>();
  ge.max_phi = j.at("max_phi").get<std::vector<double>>();
  for (const auto& m : j.at("members")) ge.members.push_back(force_from_json(m));
  return ge;
}

nlohmann::json to_json(const AttentionGlobal& ag) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "attention_global"},
          {"n_instances", ag.n_instances},
          {"feature_names", ag.feature_names},
          {"mean_scores", ag.mean_scores},
          {"mean_weights", ag.mean_weights}};
}

AttentionGlobal attention_from_json(const nlohmann::json& j) {
  AttentionGlobal ag;
  ag.n_instances = j.at("n_instances").get<std::size_t>();
  ag.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  ag.mean_scores = j.at("mean_scores").get<std::vector<double>>();
  ag.mean_weights = j.at("mean_weights").get<std::vector<double>>();
  return ag;
}

void write_report(const GlobalImportance& gi, ReportFormat format,
                  const std::filesystem::path& path) {
  // Ranked order for rendering.
  std::vector<std::string> labels;
  std::vector<double> values;
  for (std::size_t j : gi.ranking) {
    labels.push_back(gi.feature_names[j]);
    values.push_back(gi.importance[j]);
  }
  const std::string title = "Global feature importance (" + gi.method + ")";
  switch (format) {
    case ReportFormat::json: write_text(path, to_json(gi).dump(2) + "\n"); break;
    case ReportFormat::svg: write_text(path, render_bars(title, labels, values, false)); break;
    case ReportFormat::html:
      write_text(path, wrap_html(title, render_bars(title, labels, values, false), labels,
                                 values));
      break;
  }
}

void write_report(const ForceDecomposition& fd, ReportFormat format,
                  const std::filesystem::path& path) {
  std::vector<std::string> labels;
  std::vector<double> values;
  force_bars(fd, labels, values);
  const std::string title = "Local forces (" + fd.method + ")";
  switch (format) {
    case ReportFormat::json: write_text(path, to_json(fd).dump(2) + "\n"); break;
    case ReportFormat::svg: write_text(path, render_bars(title, labels, values, true)); break;
    case ReportFormat::html:
      write_text(path,
                 wrap_html(title, render_bars(title, labels, values, true), labels, values));
      break;
  }
}

void write_report(const GroupExplanation& ge, ReportFormat format,
                  const std::filesystem::path& path) {
  const std::string title = "Group explanation: " + ge.group_key + " (" + ge.method + ")";
  switch (format) {
    case ReportFormat::json: write_text(path, to_json(ge).dump(2) + "\n"); break;
    case ReportFormat::svg:
      write_text(path, render_bars(title, ge.feature_names, ge.mean_phi, true));
      break;
    case ReportFormat::html: {
      // One panel per member under the mean-force chart.
      std::ostringstream html;
      html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>"
           << escape(title) << "</title></head><body>\n<h2>" << escape(title) << "</h2>\n"
           << render_bars("Mean forces", ge.feature_names, ge.mean_phi, true);
      for (std::size_t i = 0; i < ge.members.size(); ++i) {
        std::vector<std::string> labels;
        std::vector<double> values;
        force_bars(ge.members[i], labels, values);
        html << "<h3>Instance " << i << " (prediction "
             << ge.members[i].prediction << ")</h3>\n"
             << render_bars("", labels, values, true);
      }
      html << "</body></html>\n";
      write_text(path, html.str());
      break;
    }
  }
}

void write_report(const AttentionGlobal& ag, ReportFormat format,
                  const std::filesystem::path& path) {
  const std::string title = "Attention summary";
  switch (format) {
    case ReportFormat::json: write_text(path, to_json(ag).dump(2) + "\n"); break;
    case ReportFormat::svg:
      write_text(path, render_bars(title + " (mean signed scores)", ag.feature_names,
                                   ag.mean_scores, true));
      break;
    case ReportFormat::html: {
      std::ostringstream html;
      html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>"
           << escape(title) << "</title></head><body>\n<h2>" << escape(title) << "</h2>\n"
           << render_bars("Mean signed scores", ag.feature_names, ag.mean_scores, true)
           << render_bars("Mean softmax weights", ag.feature_names, ag.mean_weights, false)
           << "</body></html>\n";
      write_text(path, html.str());
      break;
    }
  }
}

}  // namespace qxai::explain
