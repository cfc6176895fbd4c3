#include "degen/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "degen/errors.hpp"

namespace degen {

void ComparabilityReport::add(std::vector<double> input, double lhs, double rhs) {
  double ratio = lhs / rhs;
  samples.push_back({std::move(input), lhs, rhs, ratio});
  if (std::isfinite(ratio)) {
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  } else {
    pass = false;
  }
}

bool ComparabilityReport::within(double lo, double hi, double max_spread) const {
  if (samples.empty()) return false;
  return ratio_min >= lo && ratio_max <= hi && spread() <= max_spread;
}

void Report::param(const std::string& k, double v) { params.emplace_back(k, fmt_double(v)); }

Check& Report::check(const std::string& name, const std::string& anchor, double lhs, double rhs, bool pass,
                     const std::string& note) {
  Check c;
  c.name = name;
  c.anchor = anchor;
  c.lhs = lhs;
  c.rhs = rhs;
  c.ratio = rhs != 0.0 ? lhs / rhs : 0.0;
  c.pass = pass;
  c.note = note;
  checks.push_back(c);
  return checks.back();
}

void Report::absorb(const ComparabilityReport& r, const std::string& anchor) {
  Check c;
  c.name = r.name;
  c.anchor = anchor;
  c.lhs = r.ratio_min;
  c.rhs = r.ratio_max;
  c.ratio = r.samples.empty() ? 0.0 : r.spread();
  c.pass = r.pass;
  c.note = r.detail;
  checks.push_back(c);
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {
nlohmann::ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}
}  // namespace

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = command;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["lhs"] = num(c.lhs);
    cj["rhs"] = num(c.rhs);
    cj["ratio"] = num(c.ratio);
    cj["pass"] = c.pass;
    if (!c.note.empty()) cj["note"] = c.note;
    cs.push_back(cj);
  }
  j["checks"] = cs;
  j["artifacts"] = artifacts;
  j["all_pass"] = all_pass();
  j["wall_time"] = wall_time;
  return j;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt_double(r[i]);
    os << "\n";
  }
  return os.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open for writing: " + path);
  out << csv_string(header, rows);
}

nlohmann::ordered_json comparability_json(const ComparabilityReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["ratio_min"] = num(r.ratio_min);
  j["ratio_max"] = num(r.ratio_max);
  j["samples"] = r.samples.size();
  j["pass"] = r.pass;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

}  // namespace degen
