#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kstree/tree_model.hpp"

using namespace kstree;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

fs::path scratch_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("kstree_cli_test_" + std::to_string(++counter));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "stdout.txt";
  const std::string cmd = std::string(KSTREE_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

const char* kModelI = R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0})";

}  // namespace

TEST_CASE("config parsing") {
  const StarTreeConfig cfg = parse_config(kModelI);
  CHECK(cfg.num_edges == 3);
  CHECK(cfg.model == Model::I);
  CHECK(parse_config(to_json(cfg)).lambda == cfg.lambda);

  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I"})"),
      std::invalid_argument);  // missing horizon
  CHECK_THROWS_AS(
      parse_config(
          R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0,"x":0})"),
      std::invalid_argument);  // unknown key
  CHECK_THROWS_AS(
      parse_config(
          R"({"edges":3,"length":1.0,"lambda":1.0,"model":"III","horizon":1.0})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(
          R"({"edges":2.5,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(
          R"({"edges":3,"length":-1.0,"lambda":1.0,"model":"I","horizon":1.0})"),
      std::invalid_argument);
}

TEST_CASE("critical subcommand reports N0 membership with its witness") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json",
        R"({"edges":3,"length":1.0,"lambda":98.69604401089358,"model":"I","horizon":1.0})");
  const RunResult r = run_cli("critical --config " + (dir / "cfg.json").string() +
                                  " --out " + dir.string(),
                              dir);
  CHECK(r.exit_code == 0);
  const json report = json::parse(slurp(dir / "critical.json"));
  bool n0_checked = false;
  for (const auto& entry : report) {
    if (entry["set"] == "N0") {
      n0_checked = true;
      CHECK(entry["member"] == true);
      CHECK(entry["witness"][0] == 1);
      CHECK(entry["witness"][1] == 3);
    }
  }
  CHECK(n0_checked);
}

TEST_CASE("simulate with zero data and zero control emits all-zero trajectories") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json", kModelI);
  const RunResult r = run_cli(
      "simulate --config " + (dir / "cfg.json").string() + " --modes 3 --y0 [] " +
          "--uncontrolled --steps 4 --out " + dir.string(),
      dir);
  CHECK(r.exit_code == 0);
  std::istringstream traj(slurp(dir / "trajectory.csv"));
  std::string line;
  std::getline(traj, line);
  CHECK(line == "t,mode,coefficient");
  while (std::getline(traj, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) == 0.0);
  }
}

TEST_CASE("verify runs the model I preset end to end") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json", kModelI);
  const RunResult r = run_cli("verify --config " + (dir / "cfg.json").string() +
                                  " --modes 8 --channels 110 --out " + dir.string(),
                              dir);
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["controlled"]["pass"] == true);
  for (const auto& v : report["controlled"]["modal_residuals"]) {
    CHECK(v.get<double>() < 1e-6);
  }
}

TEST_CASE("obstruct exits with the structured refusal payload") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json",
        R"({"edges":3,"length":1.0,"lambda":24.674011002723397,"model":"II","horizon":1.0})");
  const RunResult r = run_cli("obstruct --config " + (dir / "cfg.json").string() +
                                  " --modes 5 --channels 100110 --out " + dir.string(),
                              dir);
  CHECK(r.exit_code == 2);
  const json payload = json::parse(slurp(dir / "obstruction.json"));
  CHECK(payload["refusal"] == "uncontrollable");
  CHECK(payload["null_direction"].size() == 4);
}

TEST_CASE("invalid configs exit with code 1") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json",
        R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0,"bogus":1})");
  const RunResult r = run_cli("critical --config " + (dir / "cfg.json").string() +
                                  " --out " + dir.string(),
                              dir);
  CHECK(r.exit_code == 1);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
  const fs::path dir_a = scratch_dir();
  const fs::path dir_b = scratch_dir();
  for (const fs::path& dir : {dir_a, dir_b}) {
    write(dir / "cfg.json", kModelI);
    const RunResult r = run_cli("synthesize --config " + (dir / "cfg.json").string() +
                                    " --modes 6 --channels 011 --out " + dir.string(),
                                dir);
    CHECK(r.exit_code == 0);
  }
  CHECK(slurp(dir_a / "synthesize.json") == slurp(dir_b / "synthesize.json"));
  CHECK(slurp(dir_a / "controls.csv") == slurp(dir_b / "controls.csv"));
}

TEST_CASE("dump-state emits the reconstructed state grid") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json", kModelI);
  const RunResult r = run_cli("simulate --config " + (dir / "cfg.json").string() +
                                  " --modes 3 --channels 110 --steps 4 " +
                                  "--dump-state 5 --out " + dir.string(),
                              dir);
  CHECK(r.exit_code == 0);
  std::istringstream state(slurp(dir / "state.csv"));
  std::string header;
  std::getline(state, header);
  CHECK(header == "t,edge,x,y");
  int rows = 0;
  std::string line;
  while (std::getline(state, line)) ++rows;
  CHECK(rows == 5 * 3 * 5);  // (steps+1) x edges x grid
}

TEST_CASE("spectrum emits the fixed CSV columns") {
  const fs::path dir = scratch_dir();
  const RunResult r = run_cli("spectrum --preset model1-null --modes 4 --out " +
                                  dir.string(),
                              dir);
  CHECK(r.exit_code == 0);
  std::istringstream csv(slurp(dir / "spectrum.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "problem,index,branch,sigma,alpha,beta,gamma,value_at_L,dxx_at_L");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 8);  // four positive modes for each of P1 and P2
}

TEST_CASE("interval demo covers both variants") {
  const fs::path dir = scratch_dir();
  write(dir / "cfg.json",
        R"({"edges":1,"length":1.0,"lambda":1.0,"model":"II","horizon":1.0})");
  for (const std::string variant : {"neumann", "dirichlet"}) {
    const RunResult r = run_cli("interval-demo --config " +
                                    (dir / "cfg.json").string() + " --variant " +
                                    variant + " --modes 6 --out " + dir.string(),
                                dir);
    CHECK(r.exit_code == 0);
    const json report = json::parse(slurp(dir / "interval.json"));
    CHECK(report["controlled"]["pass"] == true);
  }
}
