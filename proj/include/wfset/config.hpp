#ifndef WFSET_CONFIG_HPP
#define WFSET_CONFIG_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfset/atoms.hpp"
#include "wfset/wavefront.hpp"

namespace wfset {

struct OutputPaths {
  std::string json = "report.json";
  std::string csv = "report.csv";
  std::string svg = "rose.svg";  // empty: no plot
};

/// A validated analysis request. Construction never leaves a partially
/// checked config behind: every key is known and every value in range.
struct AnalysisConfig {
  Atom atom;
  std::vector<Point> points;
  AnalysisParams params;
  OutputPaths outputs;
  nlohmann::json source;
};

/// Parses and validates. Errors are Error(Config) with messages of the form
/// "<origin>:<line>: <what>".
AnalysisConfig parse_config(const std::string& text, const std::string& origin = "config");
AnalysisConfig load_config(const std::string& path);

/// 1-based line of the first occurrence of "key" in the text (0 if absent).
int line_of_key(const std::string& text, const std::string& key);

}  // namespace wfset

#endif  // WFSET_CONFIG_HPP
