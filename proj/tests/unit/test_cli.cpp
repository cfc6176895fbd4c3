#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "degen/cli.hpp"
#include "degen/errors.hpp"
#include "degen/report.hpp"

using namespace degen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "degen");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Outcome r;
  r.code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

int parse_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("degen_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Config, ParsesCommentsAndWhitespace) {
  std::istringstream in("# header\n\n  sigma = 0.5   # trailing\nR=0.9\nphi_norm = 2\n");
  RunConfig c = parse_config(in);
  EXPECT_DOUBLE_EQ(c.num("sigma", 0.0), 0.5);
  EXPECT_DOUBLE_EQ(c.num("R", 0.0), 0.9);
  EXPECT_DOUBLE_EQ(c.num("phi-norm", 0.0), 2.0);
}

TEST(Config, EmptyFileGivesDefaults) {
  std::istringstream in("");
  RunConfig c = parse_config(in);
  EXPECT_TRUE(c.values.empty());
  EXPECT_DOUBLE_EQ(c.num("sigma", 1.25), 1.25);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_line("sigma = 1\nsigma = 2\n"), 2);
  EXPECT_EQ(parse_line("# c\nsigma = 1\nbogus = 3\n"), 3);
  EXPECT_EQ(parse_line("sigma 1\n"), 1);
  EXPECT_EQ(parse_line("sigma =\n"), 1);
  EXPECT_EQ(parse_line("= 3\n"), 1);
  EXPECT_EQ(parse_line("sigma = 1\nphi_norm = 1\nphi-norm = 2\n"), 3);
}

TEST(Config, MissingFileIsParseError) {
  EXPECT_THROW(load_config("/nonexistent/degen.cfg"), ParseError);
}

TEST(Config, TypedAccessors) {
  RunConfig c;
  c.set("M", "12");
  c.set("sigma", "abc");
  c.set("criteria", "1, 2,5");
  c.set("quick", "true");
  EXPECT_EQ(c.integer("M", 0), 12);
  EXPECT_THROW(c.num("sigma", 0.0), DomainError);
  EXPECT_EQ(c.list("criteria"), (std::vector<double>{1.0, 2.0, 5.0}));
  EXPECT_TRUE(c.flag("quick"));
  EXPECT_FALSE(c.flag("oracle"));
}

TEST(Csv, SeventeenDigitsAndHeader) {
  std::string s = csv_string({"a", "b"}, {{0.1, 1.0 / 3.0}});
  std::istringstream in(s);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "a,b");
  EXPECT_EQ(row, fmt_double(0.1) + "," + fmt_double(1.0 / 3.0));
  EXPECT_EQ(std::stod(fmt_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(fmt_double(0.1), "0.10000000000000001");
}

TEST(Dispatch, SuccessPrintsSchemaOne) {
  Outcome r = run({"orlicz", "--N", "2", "--trials", "2000"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "orlicz");
  EXPECT_TRUE(j.contains("wall_time"));
}

TEST(Dispatch, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"orlicz", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"geodesic", "--sigma", "-1"}).code, 2);
  EXPECT_EQ(run({"geodesic", "--lambda", "abc"}).code, 2);
  EXPECT_EQ(run({"orlicz", "--check", "nonsense"}).code, 2);
  EXPECT_EQ(run({"counterexample", "--M", "16"}).code, 2);
}

TEST(Dispatch, FailedCheckExitsThree) {
  Outcome r = run({"maxprinciple", "--b0", "1", "--steps", "50"});
  EXPECT_EQ(r.code, 3) << r.err;
  auto j = nlohmann::json::parse(r.out);
  bool any_fail = false;
  for (const auto& c : j["checks"]) any_fail |= !c["pass"].get<bool>();
  EXPECT_TRUE(any_fail);
}

TEST(Dispatch, ConfigFileAndOverride) {
  fs::path dir = temp_dir("config");
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# maxprinciple run\nb0 = 1\nsteps = 20\n";
  EXPECT_EQ(run({"maxprinciple", "--config", cfg.string()}).code, 3);
  Outcome r = run({"maxprinciple", "--config", cfg.string(), "--b0", "auto"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ofstream(dir / "bad.cfg") << "b0 = 1\nwhat = 2\n";
  Outcome bad = run({"maxprinciple", "--config", (dir / "bad.cfg").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
}

TEST(Dispatch, OutDirectoryArtifacts) {
  fs::path dir = temp_dir("out");
  Outcome r = run({"degiorgi", "--steps", "200", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "degiorgi.json"));
  ASSERT_TRUE(fs::exists(dir / "degiorgi.csv"));
  std::ifstream in(dir / "degiorgi.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "k,U,b");
  auto j = nlohmann::json::parse(slurp(dir / "degiorgi.json"));
  EXPECT_EQ(j["artifacts"].size(), 2u);
}

TEST(Dispatch, DeterministicApartFromWallTime) {
  auto strip = [](const std::string& s) {
    auto j = nlohmann::json::parse(s);
    j.erase("wall_time");
    return j;
  };
  Outcome a = run({"orlicz", "--seed", "3", "--trials", "3000"});
  Outcome b = run({"orlicz", "--seed", "3", "--trials", "3000"});
  EXPECT_EQ(strip(a.out), strip(b.out));
}

TEST(Binary, ExitCodesFromProcess) {
  auto code = [](const std::string& args) {
    std::string cmd = std::string(DEGEN_BINARY) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  EXPECT_EQ(code("geodesic --sigma 1 --lambda 0.001"), 0);
  EXPECT_EQ(code("geodesic --lambda"), 2);
  EXPECT_EQ(code("maxprinciple --b0 1 --steps 10"), 3);
  EXPECT_EQ(code("--help"), 0);
}

TEST(Verify, CriterionIdsValidated) {
  VerifyOptions opt;
  EXPECT_THROW(run_criterion(0, opt), DomainError);
  EXPECT_THROW(run_criterion(kCriteriaCount + 1, opt), DomainError);
  EXPECT_EQ(run({"verify-all", "--criteria", "99"}).code, 2);
}

TEST(Verify, FastCriteriaPass) {
  VerifyOptions opt;
  opt.quick = true;
  for (int id : {1, 3, 5}) {
    CriterionResult r = run_criterion(id, opt);
    EXPECT_TRUE(r.pass) << id << " " << r.summary;
    EXPECT_FALSE(r.title.empty());
  }
}
