// Drives the installed command-line binary end to end: exit-code contract
// (0 pass, 1 violation, 2 usage), artifact writing, and byte-identical
// reports for identical invocations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli = CURV4LAB_CLI_PATH;

int run(const std::string& args) {
  std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("curv4lab_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("audit --help") == 0);
  CHECK(run("") == 2);                       // missing subcommand
  CHECK(run("audit") == 2);                  // missing --campaign
  CHECK(run("audit --campaign thm31_rearrangement --format yaml") == 2);
  CHECK(run("frobnicate") == 2);             // unknown subcommand
  CHECK(run("catalog --metric no_such_chart") == 2);
  CHECK(run("audit --campaign no_such_campaign --samples 10") == 2);
  // constraint set missing the campaign requirement
  CHECK(run("audit --campaign rm_leq_r --samples 10 --constraints bianchi") ==
        2);
}

TEST_CASE("audit subcommand passes and writes both artifacts") {
  TempDir tmp;
  fs::path prefix = tmp.path / "thm31";
  CHECK(run("audit --campaign thm31_rearrangement --samples 2000 --seed 7 "
            "--format both --out " +
            prefix.string()) == 0);
  std::string json_text = slurp(prefix.string() + ".json");
  std::string csv_text = slurp(prefix.string() + ".csv");
  CHECK(json_text.find("\"passes\": 2000") != std::string::npos);
  CHECK(json_text.find("\"verdict\"") != std::string::npos);
  CHECK(json_text.find("\"certificate\"") != std::string::npos);
  CHECK(csv_text.rfind("campaign,", 0) == 0);

  // identical argv + seed => identical bytes
  fs::path again = tmp.path / "thm31_again";
  CHECK(run("audit --campaign thm31_rearrangement --samples 2000 --seed 7 "
            "--format both --out " +
            again.string()) == 0);
  CHECK(slurp(again.string() + ".json") == json_text);

  // falsification campaign reports findings but exits 0
  fs::path fals = tmp.path / "fals.json";
  CHECK(run("audit --campaign prop64_max_equivalence --samples 64 --seed 7 "
            "--out " +
            fals.string()) == 0);
  std::string fals_text = slurp(fals);
  CHECK(fals_text.find("\"counterexample_count\": 8") != std::string::npos);
}

TEST_CASE("flow subcommand verdicts") {
  TempDir tmp;
  fs::path out = tmp.path / "sphere.json";
  CHECK(run("flow --init sphere --a0 1.0 --t-max 1.0 --out " + out.string()) ==
        0);
  std::string text = slurp(out);
  CHECK(text.find("\"status\": \"blow_up\"") != std::string::npos);
  CHECK(text.find("blow_up_time_rel_err") != std::string::npos);

  CHECK(run("flow --init zero --t-max 0.5") == 0);
  CHECK(run("flow --init random-wpic --count 5 --t-max 0.02 --seed 3") == 0);
  CHECK(run("flow --system 3d --m0 -1,1,1 --t-max 0.1") == 0);
  CHECK(run("flow --system 3d --count 5 --t-max 0.05") == 0);
  CHECK(run("flow --init sphere --a0 -2.0") == 2);
  CHECK(run("flow --system 3d --m0 1,2 --t-max 0.1") == 2);
}

TEST_CASE("catalog subcommand") {
  TempDir tmp;
  fs::path out = tmp.path / "cigar";
  CHECK(run("catalog --metric cigar --probes 16 --format both --out " +
            out.string()) == 0);
  std::string text = slurp(out.string() + ".json");
  CHECK(text.find("\"ham3_constancy\"") != std::string::npos);
  CHECK(slurp(out.string() + ".csv").rfind("metric,", 0) == 0);

  CHECK(run("catalog --metric cigar --normalize --probes 8 "
            "--scheme closed_form") == 0);
  CHECK(run("catalog --metric gaussian_shrinker --normalize --probes 4") == 1);
  CHECK(run("catalog --metric s4_round --probes 4 --param bogus=1") == 2);
}

TEST_CASE("frames subcommand") {
  CHECK(run("frames --count 4 --restarts 4 --seed 11") == 0);
}

TEST_CASE("default output directory from the environment") {
  TempDir tmp;
  std::string cmd = "CURV4LAB_OUT=" + tmp.path.string() + " " +
                    std::string(cli) +
                    " audit --campaign lemma22_correspondence --samples 200 "
                    "--seed 5 > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(fs::exists(tmp.path / "audit_report.json"));
}
