#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "graphon/cumulants.hpp"

using namespace graphon;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(GRAPHON_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "graphon_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli enumerate") {
  auto r = run_cli("enumerate --n 3 --d 2");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(std::string(GRAPHON_SOURCE_DIR) + "/tests/golden/enumerate_n3_d2.txt"));
  CHECK(run_cli("enumerate --n 9 --d 2").code == 3);
}

TEST_CASE("cli cumulant dump matches golden file and oracle") {
  auto r = run_cli("cumulants dump --n 4 --k 2 --dmax 2");
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(std::string(GRAPHON_SOURCE_DIR) + "/tests/golden/cumulants_n4_k2_d2.csv"));
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  auto oracle = MomentOracle::sbm(2);
  int rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.push_back("");
    REQUIRE(f.size() == 6u);
    auto alpha = Multigraph::parse(4, f[0]);
    CHECK(Rational(Integer(f[3]), Integer(f[4])) == kappa_by_enumeration(alpha, oracle, 4));
    CHECK(std::stoi(f[5]) == alpha.size() + 1);
    ++rows;
  }
  CHECK(rows > 10);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("no-such-command").code == 2);
  CHECK(run_cli("mc-rate --config /nonexistent/config.json").code == 2);
  auto dir = temp_dir();
  std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "model": "sbm", "grid": {"n": [10]}, "typo": 1})";
  CHECK(run_cli("mc-rate --config " + (dir / "bad.json").string()).code == 2);
  CHECK(run_cli("oracle mmse --n 8 --k 2 --p 0.6 --q 0.5 --D 1").code == 3);
}

TEST_CASE("cli oracle and sampling") {
  auto r = run_cli("oracle mmse --n 4 --k 2 --p 0.6 --q 0.5 --D 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("599/1980") != std::string::npos);
  CHECK(r.out.find("49/19800") != std::string::npos);

  auto dir = temp_dir();
  std::ofstream(dir / "prior.json") << R"({"type": "sbm", "n": 8, "k": 2, "p": 0.8, "q": 0.2})";
  const auto a = dir / "a.csv", truth = dir / "m.csv", est = dir / "mhat.csv";
  CHECK(run_cli("sample --config " + (dir / "prior.json").string() + " --seed 3 --out " + a.string() +
                " --truth-out " + truth.string()).code == 0);
  const std::string first = slurp(a);
  CHECK(first.rfind("n=8\n", 0) == 0);
  CHECK(run_cli("sample --config " + (dir / "prior.json").string() + " --seed 3 --out " + a.string()).code == 0);
  CHECK(slurp(a) == first);
  CHECK(run_cli("estimate --estimator usvt --in " + a.string() + " --out " + est.string()).code == 0);
  CHECK(slurp(est).rfind("n=8\n", 0) == 0);
  CHECK(run_cli("estimate --estimator usvt --params bogus=1 --in " + a.string()).code == 2);
}

TEST_CASE("cli mc-rate is byte reproducible") {
  auto dir = temp_dir();
  std::ofstream(dir / "exp.json") << R"({
    "schema_version": 1, "model": "sbm",
    "grid": {"n": [20, 40, 80], "k": [2], "p": [0.7], "q": [0.3]},
    "estimators": [{"name": "usvt"}], "replicates": 3, "seed": 9, "workers": 2})";
  const auto o1 = dir / "r1.csv", o2 = dir / "r2.csv";
  CHECK(run_cli("mc-rate --config " + (dir / "exp.json").string() + " --out " + o1.string()).code == 0);
  CHECK(run_cli("mc-rate --config " + (dir / "exp.json").string() + " --workers 1 --out " + o2.string()).code == 0);
  CHECK(slurp(o1) == slurp(o2));
  CHECK(std::filesystem::exists(o1.string() + ".timing.csv"));
}
