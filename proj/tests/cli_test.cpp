// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the frobevo binary: exit codes, output formats,
// manifests, and reproducibility of whole invocations.

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "frobevo/dataset.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace frobevo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = FROBEVO_BIN;
const std::string kGrammar = std::string(FROBEVO_GRAMMARS_DIR) + "/frobenius.bnf";

struct Result {
  int status = -1;
  std::string output;  // stdout + stderr
};

Result run_cli(const std::string& args) {
  std::string cmd = kBin + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Result r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("frobevo_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  static int& counter() { static int c = 0; return c; }
};

void io_write(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << data;
}

}  // namespace

TEST_CASE("frobenius subcommand") {
  Result r = run_cli("frobenius 3 6 7 13");
  CHECK(r.status == 0);
  CHECK(r.output == "11\n");

  CHECK(run_cli("frobenius 4 7 9 15").output == "10\n");
  CHECK(run_cli("frobenius 16 19 33 39 --check").output == "79\n");

  Result bad = run_cli("frobenius 2 4");
  CHECK(bad.status == 1);
  CHECK(bad.output.find("gcd") != std::string::npos);

  CHECK(run_cli("frobenius 7").status == 2);   // too few elements
  CHECK(run_cli("nonsense").status == 2);      // unknown subcommand
  CHECK(run_cli("").status == 2);              // missing subcommand
  CHECK(run_cli("--help").status == 0);
}

TEST_CASE("trace subcommand reproduces the derivation table") {
  Result r = run_cli("trace --grammar " + kGrammar + " --chromosome 120,44,42,96,189,64");
  CHECK(r.status == 0);
  CHECK(r.output.find("phenotype: x + x") != std::string::npos);
  CHECK(r.output.find("0/5") != std::string::npos);
  CHECK(r.output.find("4/5") != std::string::npos);
  CHECK(r.output.find("<expr> <op> <expr>") != std::string::npos);

  CHECK(run_cli("trace --grammar /does/not/exist.bnf --chromosome 1,2").status == 1);
  CHECK(run_cli("trace --grammar " + kGrammar + " --chromosome 999").status == 1);
}

TEST_CASE("dataset subcommand writes csv plus manifest") {
  TempDir tmp;
  fs::path out = tmp.path / "t.csv";
  Result r = run_cli("dataset --family \"x,x+3,2*x+1,2*x+7\" --start 3 --count 5 --out " + out.string());
  REQUIRE(r.status == 0);

  Dataset d = load_csv(out);
  REQUIRE(d.rows.size() == 5);
  CHECK(d.rows[0].target == 11);
  CHECK(d.rows[1].target == 10);
  CHECK(d.rows[2].target == 14);

  fs::path manifest = tmp.path / "t.csv.manifest.json";
  REQUIRE(fs::exists(manifest));
  json m = json::parse(test::read_file(manifest.string()));
  CHECK(m["tool"] == "frobevo");
  CHECK(m["subcommand"] == "dataset");
  CHECK(m["outputs"][0] == "t.csv");

  CHECK(run_cli("dataset --family \"2*x,4*x\" --start 1 --count 3 --out " + (tmp.path / "e.csv").string())
            .status == 1);
}

TEST_CASE("verify subcommand emits json and respects exit-code rules") {
  Result r = run_cli("verify --conjecture theorem1 --from 5 --to 40");
  REQUIRE(r.status == 0);
  json rep = json::parse(r.output);
  CHECK(rep["verdict"] == "verified");
  CHECK(rep["matches"] == 36);
  CHECK(rep["conjecture"]["name"] == "theorem1");

  // a refuted sweep is still a successful run (exit 0)
  Result below = run_cli("verify --conjecture theorem1 --from 1 --to 4");
  REQUIRE(below.status == 0);
  json rep2 = json::parse(below.output);
  CHECK(rep2["verdict"] == "refuted");

  Result custom = run_cli("verify --family \"k,k+1\" --formula \"k*(k+1) - k - (k+1)\" --from 2 --to 30");
  REQUIRE(custom.status == 0);
  CHECK(json::parse(custom.output)["verdict"] == "verified");

  Result text = run_cli("verify --conjecture pair --from 2 --to 20 --format text");
  CHECK(text.status == 0);
  CHECK(text.output.find("VERIFIED") != std::string::npos);

  CHECK(run_cli("verify --list").status == 0);
  CHECK(run_cli("verify --list").output.find("theorem1") != std::string::npos);
  CHECK(run_cli("verify --conjecture nosuch --from 1 --to 2").status == 2);
  CHECK(run_cli("verify --from 1 --to 2").status == 2);  // neither name nor family/formula
}

TEST_CASE("evolve runs are byte-identical for a fixed seed") {
  TempDir tmp;
  fs::path data = tmp.path / "d.csv";
  REQUIRE(run_cli("dataset --family \"x,x+3,2*x+1,2*x+7\" --start 3 --count 10 --out " + data.string())
              .status == 0);

  std::string common = "evolve --grammar " + kGrammar + " --data " + data.string() +
                       " --seed 7 --pop 40 --gens 6 --out ";
  REQUIRE(run_cli(common + (tmp.path / "r1.json").string()).status == 0);
  REQUIRE(run_cli(common + (tmp.path / "r2.json").string()).status == 0);

  std::string j1 = test::read_file((tmp.path / "r1.json").string());
  std::string j2 = test::read_file((tmp.path / "r2.json").string());
  REQUIRE_FALSE(j1.empty());
  CHECK(j1 == j2);

  json run_json = json::parse(j1);
  CHECK(run_json["seed"] == 7);
  CHECK(run_json["config"]["population_size"] == 40);
  CHECK(run_json["history"].size() == 6);
  REQUIRE(fs::exists(tmp.path / "r1.json.manifest.json"));

  // env fallback fills the seed when no flag is given
  Result env = run_cli("evolve --grammar " + kGrammar + " --data " + data.string() +
                       " --pop 20 --gens 2 --out " + (tmp.path / "r3.json").string() +
                       " 2>/dev/null; FROBEVO_SEED=555 " + kBin + " evolve --grammar " + kGrammar +
                       " --data " + data.string() + " --pop 20 --gens 2 --out " +
                       (tmp.path / "r4.json").string());
  REQUIRE(env.status == 0);
  CHECK(json::parse(test::read_file((tmp.path / "r3.json").string()))["seed"] == 0);
  CHECK(json::parse(test::read_file((tmp.path / "r4.json").string()))["seed"] == 555);
}

TEST_CASE("config file fills unset options, flags win") {
  TempDir tmp;
  fs::path data = tmp.path / "d.csv";
  REQUIRE(run_cli("dataset --family \"x,x+3,2*x+1,2*x+7\" --start 3 --count 6 --out " + data.string())
              .status == 0);
  fs::path cfg = tmp.path / "ga.cfg";
  io_write(cfg, "# smoke config\npop=22\ngens=3\nseed=11\n");

  Result r = run_cli("evolve --grammar " + kGrammar + " --data " + data.string() + " --config " +
                     cfg.string() + " --gens 4 --out " + (tmp.path / "r.json").string());
  REQUIRE(r.status == 0);
  json j = json::parse(test::read_file((tmp.path / "r.json").string()));
  CHECK(j["config"]["population_size"] == 22);  // from config file
  CHECK(j["config"]["generations"] == 4);       // flag beats config
  CHECK(j["seed"] == 11);

  io_write(cfg, "nonsense_key=1\n");
  CHECK(run_cli("evolve --grammar " + kGrammar + " --data " + data.string() + " --config " + cfg.string())
            .status == 2);
}

TEST_CASE("pipeline produces a complete, reproducible output directory") {
  TempDir tmp;
  fs::path out1 = tmp.path / "p1";
  fs::path out2 = tmp.path / "p2";
  std::string common = "pipeline --family \"x,x+3,2*x+1,2*x+7\" --start 3 --count 10 --seed 5 --pop 60 "
                       "--gens 8 --verify-to 30 --grammar " + kGrammar + " --outdir ";
  REQUIRE(run_cli(common + out1.string()).status == 0);
  REQUIRE(run_cli(common + out2.string()).status == 0);

  for (const char* name : {"dataset.csv", "run.json", "conjecture.json", "report.json", "manifest.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(out1 / name));
    // identical manifests imply identical outputs; timestamps may differ
    if (std::string(name) != "manifest.json")
      CHECK(test::read_file((out1 / name).string()) == test::read_file((out2 / name).string()));
  }

  // exactly one manifest per output directory
  int manifests = 0;
  for (const auto& entry : fs::directory_iterator(out1))
    if (entry.path().filename().string().find("manifest") != std::string::npos) ++manifests;
  CHECK(manifests == 1);

  json m1 = json::parse(test::read_file((out1 / "manifest.json").string()));
  json m2 = json::parse(test::read_file((out2 / "manifest.json").string()));
  m1.erase("timestamp");
  m2.erase("timestamp");
  CHECK(m1 == m2);

  json rep = json::parse(test::read_file((out1 / "report.json").string()));
  CHECK((rep["verdict"] == "verified" || rep["verdict"] == "refuted"));
  json conj = json::parse(test::read_file((out1 / "conjecture.json").string()));
  CHECK(conj["seed"] == 5);
}
