// End-to-end checks of the installed command-line interface. The binary
// path arrives via TURNSIG_BIN and the lexicon directory via
// TURNSIG_LEXICONS (both set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* binary() {
  const char* bin = std::getenv("TURNSIG_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

RunResult run(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "turnsig-cli-out.txt";
  fs::path err = fs::temp_directory_path() / "turnsig-cli-err.txt";
  std::string cmd = std::string(binary()) + " " + args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  int code = status == -1 ? -1 : WEXITSTATUS(status);
  return {code, slurp(out), slurp(err)};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("usage errors exit 1 with usage text") {
  auto r = run("--definitely-not-a-flag");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);

  auto sub = run("experiment --no-such-flag");
  CHECK(sub.exit_code == 1);
}

TEST_CASE("help exits 0") {
  auto r = run("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("signature") != std::string::npos);
}

TEST_CASE("data errors exit 2") {
  auto r = run("experiment --data /no/such/dir --task bd-vs-bpd");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("signature subcommand reproduces the L-path coefficients") {
  TempDir dir("turnsig-cli-sig");
  std::ofstream(dir.path / "lpath.csv") << "0,0\n1,0\n1,1\n";
  auto r = run("signature " + (dir.path / "lpath.csv").string() + " --level 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("(1,2)\t1.000000") != std::string::npos);
  CHECK(r.out.find("(2,1)\t0.000000") != std::string::npos);

  SUBCASE("ragged rows are a data error") {
    std::ofstream(dir.path / "ragged.csv") << "0,0\n1\n";
    auto bad = run("signature " + (dir.path / "ragged.csv").string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("columns") != std::string::npos);
  }
}

TEST_CASE("synth -> experiment -> ablate round trip") {
  TempDir dir("turnsig-cli-e2e");
  auto data = (dir.path / "data").string();
  auto gen = run("synth --n-per-group 4 --seed 11 --min-turns 5 --max-turns 8 --out " + data);
  REQUIRE(gen.exit_code == 0);

  auto exp = run("experiment --data " + data + " --task bd-vs-bpd --out-dir " +
                 (dir.path / "res").string());
  REQUIRE(exp.exit_code == 0);
  CHECK(exp.out.rfind("auroc=", 0) == 0);
  CHECK(fs::exists(dir.path / "res" / "results.tsv"));
  CHECK(fs::exists(dir.path / "res" / "report.txt"));

  SUBCASE("deterministic artifacts") {
    auto again = run("experiment --data " + data + " --task bd-vs-bpd --out-dir " +
                     (dir.path / "res2").string());
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir.path / "res" / "results.tsv") == slurp(dir.path / "res2" / "results.tsv"));
    CHECK(slurp(dir.path / "res" / "report.txt") == slurp(dir.path / "res2" / "report.txt"));
    CHECK(exp.out == again.out);
  }
  SUBCASE("ablation table") {
    auto abl = run("ablate --data " + data + " --task bd-vs-bpd --out-dir " +
                   (dir.path / "abl").string());
    REQUIRE(abl.exit_code == 0);
    auto tsv = slurp(dir.path / "abl" / "ablation.tsv");
    CHECK(tsv.rfind("features\tauroc", 0) == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 8);
  }
  SUBCASE("ablate without all groups is a usage error") {
    auto bad = run("ablate --data " + data + " --task bd-vs-bpd --groups ling --out-dir " +
                   (dir.path / "abl2").string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("usage error") != std::string::npos);
  }
  SUBCASE("extract CSV") {
    auto ext = run("extract --data " + data + " --out " + (dir.path / "turns.csv").string());
    REQUIRE(ext.exit_code == 0);
    auto csv = slurp(dir.path / "turns.csv");
    CHECK(csv.rfind("interview_id,turn_index,speaker,LING:mattr", 0) == 0);
    CHECK(csv.find("DIAL:wps") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 12);
  }
  SUBCASE("print-config dumps the resolved configuration") {
    auto cfgrun = run("experiment --data " + data + " --task h-vs-bd --subject both "
                      "--print-config --out-dir " + (dir.path / "res3").string());
    REQUIRE(cfgrun.exit_code == 0);
    CHECK(cfgrun.out.find("p_threshold=0.002") != std::string::npos);
    CHECK(cfgrun.out.find("task=h-vs-bd") != std::string::npos);
  }
}

TEST_CASE("config file supplies defaults, flags win") {
  TempDir dir("turnsig-cli-cfg");
  auto data = (dir.path / "data").string();
  REQUIRE(run("synth --n-per-group 4 --seed 2 --min-turns 5 --max-turns 8 --out " + data).exit_code == 0);
  std::ofstream(dir.path / "exp.ini") << "[experiment]\ntask=h-vs-bd\ntop-k=3\n";

  auto r = run("--config " + (dir.path / "exp.ini").string() + " experiment --data " + data +
               " --print-config --out-dir " + (dir.path / "res").string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("task=h-vs-bd") != std::string::npos);
  CHECK(r.out.find("top_k=3") != std::string::npos);

  auto win = run("--config " + (dir.path / "exp.ini").string() + " experiment --data " + data +
                 " --task bd-vs-bpd --print-config --out-dir " + (dir.path / "res2").string());
  REQUIRE(win.exit_code == 0);
  CHECK(win.out.find("task=bd-vs-bpd") != std::string::npos);
}
