#pragma once
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace degen {

// One sampled comparison lhs vs rhs.
struct ComparisonSample {
  std::vector<double> input;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// Carrier for every "comparable up to constants" claim.
struct ComparabilityReport {
  std::string name;
  std::vector<ComparisonSample> samples;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  bool pass = true;
  std::string detail;

  void add(std::vector<double> input, double lhs, double rhs);
  double spread() const { return ratio_max / ratio_min; }
  // pass iff all ratios in [lo, hi] and spread <= max_spread
  bool within(double lo, double hi, double max_spread = std::numeric_limits<double>::infinity()) const;
};

struct Check {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  double wall_time = 0.0;

  void param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
  void param(const std::string& k, double v);
  Check& check(const std::string& name, const std::string& anchor, double lhs, double rhs, bool pass,
               const std::string& note = {});
  void absorb(const ComparabilityReport& r, const std::string& anchor);
  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

// 17 significant digits, round-trippable.
std::string fmt_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

nlohmann::ordered_json comparability_json(const ComparabilityReport& r);

}  // namespace degen
