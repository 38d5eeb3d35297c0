#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string tmp_path(const std::string& name) { return std::string(GSF_TMP_DIR) + "/" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  REQUIRE(bool(f));
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(bool(f));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(GSF_CLI_PATH) + " " + args + " 2> " + tmp_path("stderr.txt");
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("reruns with identical config and seed are byte-identical") {
  write_file(tmp_path("sc.cfg"), "np_max=6\ntrials=500\n");
  std::string out1 = tmp_path("sc1.csv"), out2 = tmp_path("sc2.csv");
  REQUIRE(run_cli("scaling --config " + tmp_path("sc.cfg") + " --seed 42 --out " + out1) == 0);
  REQUIRE(run_cli("scaling --config " + tmp_path("sc.cfg") + " --seed 42 --out " + out2) == 0);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(read_file(out1).find("# command=scaling") != std::string::npos);
  CHECK(read_file(out1).find("# seed=42") != std::string::npos);

  // A different seed changes the Monte Carlo columns.
  std::string out3 = tmp_path("sc3.csv");
  REQUIRE(run_cli("scaling --config " + tmp_path("sc.cfg") + " --seed 43 --out " + out3) == 0);
  CHECK(read_file(out1) != read_file(out3));
}

TEST_CASE("cutoffs command reports the closed-form sizes") {
  std::string out = tmp_path("cut.csv");
  REQUIRE(run_cli("cutoffs --out " + out) == 0);
  auto text = read_file(out);
  CHECK(text.find("0.98999999999999999,68,") != std::string::npos);
  CHECK(text.find("0.999,692,") != std::string::npos);
  CHECK(text.find("0.99990000000000001,6931,") != std::string::npos);
}

TEST_CASE("malformed configs fail with a diagnostic and write nothing") {
  write_file(tmp_path("bad.cfg"), "np_max\n");
  std::string out = tmp_path("never.csv");
  std::remove(out.c_str());
  CHECK(run_cli("scaling --config " + tmp_path("bad.cfg") + " --out " + out) != 0);
  std::ifstream f(out);
  CHECK(!f);  // partial results never written
  auto err = read_file(tmp_path("stderr.txt"));
  CHECK(err.find("line 1") != std::string::npos);

  write_file(tmp_path("bad2.cfg"), "eta_q=0.3\n");
  CHECK(run_cli("scaling --config " + tmp_path("bad2.cfg") + " --out " + out) != 0);
}

TEST_CASE("mpc-run computes the expected output and transcript") {
  write_file(tmp_path("and.fn"), "parties 2\nbits 1 1\nand x0_0 x1_0\n");
  write_file(tmp_path("mpc.cfg"),
             "function_file=" + tmp_path("and.fn") + "\ninputs=1;1\n");
  std::string out = tmp_path("mpc.csv");
  REQUIRE(run_cli("mpc-run --config " + tmp_path("mpc.cfg") + " --seed 9 --out " + out) == 0);
  auto text = read_file(out);
  CHECK(text.find("-,output,1") != std::string::npos);
  CHECK(text.find("-,expected,1") != std::string::npos);
  CHECK(text.find("0,m12,") != std::string::npos);

  // Noiseless zero input.
  write_file(tmp_path("mpc0.cfg"),
             "function_file=" + tmp_path("and.fn") + "\ninputs=0;1\n");
  REQUIRE(run_cli("mpc-run --config " + tmp_path("mpc0.cfg") + " --seed 9 --out " + out) == 0);
  CHECK(read_file(out).find("-,output,0") != std::string::npos);
}

TEST_CASE("build-graph emits the protocol adjacency") {
  std::string out = tmp_path("build.csv");
  REQUIRE(run_cli("build-graph --seed 7 --out " + out) == 0);
  auto text = read_file(out);
  for (const char* edge : {"edge,1 2", "edge,2 3", "edge,3 4", "edge,4 12", "edge,5 6",
                           "edge,6 7", "edge,7 8", "edge,8 12", "edge,9 10", "edge,10 11",
                           "edge,11 12"})
    CHECK(text.find(edge) != std::string::npos);
  CHECK(text.find("log,summary attempts=12") != std::string::npos);
  CHECK(text.find("cz=17 pass=13 patch=4") != std::string::npos);
}

TEST_CASE("rate command emits monotone curves for both error budgets") {
  std::string out = tmp_path("rate.csv");
  REQUIRE(run_cli("rate --out " + out) == 0);
  auto text = read_file(out);
  std::istringstream is(text);
  std::string line;
  double prev = 1e9;
  int rows = 0;
  bool saw_second = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
    std::stringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    REQUIRE(cols.size() == 8);
    double rate = std::stod(cols[6]);
    double eps_f = std::stod(cols[0]);
    if (eps_f < 1e-6 && !saw_second) {
      saw_second = true;
      prev = 1e9;
    }
    CHECK(rate <= prev + 1e-18);
    prev = rate;
    ++rows;
  }
  CHECK(rows >= 70);
  CHECK(saw_second);
}

TEST_CASE("swap-model with the oracle column stays within tolerance") {
  write_file(tmp_path("swap.cfg"),
             "eta_e_list=0.1,1.0\neta_s_list=0.55\neta_i_list=0.775\nxi_list=0.02\n"
             "rdtexp_list=0,0.001\noracle=1\n");
  std::string out = tmp_path("swap.csv");
  REQUIRE(run_cli("swap-model --config " + tmp_path("swap.cfg") + " --out " + out) == 0);
  std::istringstream is(read_file(out));
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("eta_e", 0) == 0) continue;
    std::stringstream ls(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    REQUIRE(cols.size() == 12);
    CHECK(std::stod(cols[10]) <= 1e-6);
    CHECK(std::stod(cols[11]) <= 1e-6);
    ++rows;
  }
  CHECK(rows == 4);
}
