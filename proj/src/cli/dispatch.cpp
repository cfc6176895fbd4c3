#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "degen/cli.hpp"
#include "degen/errors.hpp"

namespace degen {

namespace {

struct CommandSpec {
  std::string name, help;
  std::vector<std::string> keys;   // options taking a value
  std::vector<std::string> flags;  // boolean switches
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<std::string> geo = {"geometry", "sigma", "R"};
  auto with_geo = [](std::vector<std::string> k) {
    k.insert(k.begin(), geo.begin(), geo.end());
    return k;
  };
  static const std::vector<CommandSpec> specs = {
      {"geodesic", "geodesic from the origin with turning parameter lambda", with_geo({"lambda", "samples"}), {}},
      {"distance", "control distance between two points", with_geo({"p", "q"}), {}},
      {"ball-volume", "ball volume by formula and optional oracle", with_geo({"x1", "r", "dim"}), {"oracle"}},
      {"orlicz", "Young function algebra checks", {"N", "check", "trials", "seed"}, {}},
      {"kernel-check", "kernel row integral at y = (r, 0)", with_geo({"r", "dim", "variant"}), {}},
      {"sobolev-endpoint", "endpoint Orlicz-Sobolev integral", with_geo({"N", "r", "y1", "dim"}), {}},
      {"poincare", "Poincare and (1,1)-Sobolev checks", with_geo({"r", "seed"}), {}},
      {"degiorgi", "De Giorgi recursion in log form", {"N", "eps", "ratio", "b0", "steps", "C", "tau", "phi-norm"}, {}},
      {"maxprinciple", "maximum principle recursion", {"N", "b0", "C", "c", "steps"}, {}},
      {"counterexample", "L4 partial sums of the series solution", {"delta0", "alpha-prime", "M", "t", "x", "m", "cache"}, {}},
      {"verify-all", "acceptance suite", {"sigma", "seed", "cache", "criteria"}, {"quick"}},
  };
  return specs;
}

void write_outputs(const std::string& dir, const std::string& command, CommandResult& res) {
  std::filesystem::create_directories(dir);
  for (const Table& t : res.tables) {
    std::string path = (std::filesystem::path(dir) / t.file).string();
    write_csv(path, t.header, t.rows);
    res.report.artifacts.push_back(path);
  }
  std::string jpath = (std::filesystem::path(dir) / (command + ".json")).string();
  res.report.artifacts.push_back(jpath);
  std::ofstream out(jpath, std::ios::binary);
  if (!out) throw DomainError("cannot open for writing: " + jpath);
  out << res.report.to_json().dump(2) << "\n";
}

}  // namespace

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"degen: numerical checks for degenerate elliptic geometry", "degen"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> switches;
  std::map<std::string, std::string> config_path, out_dir;
  std::map<std::string, CLI::App*> subs;
  for (const CommandSpec& s : command_specs()) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    subs[s.name] = sub;
    for (const std::string& k : s.keys) sub->add_option("--" + k, values[s.name][k]);
    for (const std::string& f : s.flags) sub->add_flag("--" + f, switches[s.name][f]);
    sub->add_option("--config", config_path[s.name], "flat key = value file; flags override it");
    sub->add_option("--out", out_dir[s.name], "directory for the JSON report and CSV tables");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::string name;
  for (auto& [n, sub] : subs)
    if (sub->parsed()) name = n;
  CLI::App* sub = subs[name];
  auto start = std::chrono::steady_clock::now();
  try {
    RunConfig cfg;
    if (!config_path[name].empty()) cfg = load_config(config_path[name]);
    for (auto& [k, v] : values[name])
      if (sub->count("--" + k) > 0) cfg.set(k, v);
    for (auto& [k, v] : switches[name])
      if (sub->count("--" + k) > 0) cfg.set(k, v ? "true" : "false");
    if (!out_dir[name].empty()) cfg.set("out", out_dir[name]);

    CommandResult res = run_command(name, cfg);
    res.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.has("out")) write_outputs(cfg.str("out", "."), name, res);
    out << res.report.to_json().dump(2) << "\n";
    return res.report.all_pass() ? 0 : 3;
  } catch (const ParseError& e) {
    err << "degen: config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "degen: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergence& e) {
    err << "degen: non-convergence: " << e.what() << "\n";
    return 4;
  } catch (const BracketError& e) {
    err << "degen: non-convergence: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "degen: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace degen
