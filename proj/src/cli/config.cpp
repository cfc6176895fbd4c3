#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "degen/cli.hpp"
#include "degen/errors.hpp"

namespace degen {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "geometry", "sigma", "R",     "lambda",  "samples",  "p",     "q",       "x1",          "r",
      "dim",      "oracle", "N",    "check",   "trials",   "seed",  "variant", "y1",          "b0",
      "eps",      "ratio",  "steps", "C",      "c",        "tau",   "phi-norm", "delta0",     "alpha-prime",
      "M",        "t",      "x",    "m",       "quick",    "out",   "cache",   "criteria"};
  return keys;
}

std::string RunConfig::str(const std::string& key, const std::string& def) const {
  auto it = values.find(key);
  return it == values.end() ? def : it->second;
}

double RunConfig::num(const std::string& key, double def) const {
  auto it = values.find(key);
  if (it == values.end()) return def;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) throw DomainError("'" + key + "' expects a number, got '" + it->second + "'");
  return v;
}

long long RunConfig::integer(const std::string& key, long long def) const {
  auto it = values.find(key);
  if (it == values.end()) return def;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size())
    throw DomainError("'" + key + "' expects an integer, got '" + it->second + "'");
  return v;
}

bool RunConfig::flag(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return false;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw DomainError("'" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::list(const std::string& key) const {
  std::vector<double> out;
  auto it = values.find(key);
  if (it == values.end()) return out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    RunConfig one;
    one.set(key, trim(item));
    out.push_back(one.num(key, 0.0));
  }
  return out;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ParseError("empty key", line_no);
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no);
    if (!known_config_keys().count(key)) throw ParseError("unknown key '" + key + "'", line_no);
    if (cfg.has(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    cfg.set(key, value);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

}  // namespace degen
