#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "degen/report.hpp"

namespace degen {

// Flat key/value run configuration. Keys use the flag spelling without "--".
struct RunConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values[key] = value; }
  std::string str(const std::string& key, const std::string& def) const;
  // DomainError when the value does not parse completely
  double num(const std::string& key, double def) const;
  long long integer(const std::string& key, long long def) const;
  bool flag(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;  // comma separated
};

const std::set<std::string>& known_config_keys();

// `key = value` lines, '#' comments; ParseError carries the line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

struct Table {
  std::string file;  // CSV file name inside the output directory
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CommandResult {
  Report report;
  std::vector<Table> tables;
};

const std::vector<std::string>& command_names();
CommandResult run_command(const std::string& name, const RunConfig& cfg);

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 7;
  double sigma = 0.0;  // extra geometry for the geometry-generic criteria; 0 for none
  std::string cache_dir;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  std::vector<Check> checks;
  std::vector<Table> tables;
};

constexpr int kCriteriaCount = 12;
CriterionResult run_criterion(int id, const VerifyOptions& opt);
CommandResult run_verify_all(const VerifyOptions& opt, const std::vector<int>& ids);

// Full front end: returns the process exit code.
// 0 all checks pass, 2 usage error, 3 failed check, 4 non-convergence.
int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace degen
