#include <doctest.h>

#include <cli.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "helpers.hpp"
#include "savns/errors.hpp"
#include "savns/io.hpp"

using namespace savns;
namespace fs = std::filesystem;

namespace {

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "savns");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

cli::RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "savns");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::parse_config(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the seconds column.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("savns_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("converge flags") {
    const auto c = parse({"converge", "--case", "example1", "--scheme", "psav2", "--dts",
                          "1/4,1/8,1/16,1/32"});
    CHECK(c.command == cli::Command::Converge);
    CHECK(c.dts == std::vector<double>{0.25, 0.125, 0.0625, 0.03125});
    CHECK(c.schemes == std::vector<SchemeKind>{SchemeKind::Psav2});
    CHECK(c.spec.eps == 1e-5);
    CHECK(c.spec.beta == 1.0);
    CHECK(c.spec.s == 2);
    CHECK(c.spec.T == 1.0);
    CHECK(c.spec.solver_tol == 1e-12);
  }

  TEST_CASE("eps-sweep flags") {
    const auto c = parse({"eps-sweep", "--dt", "1/128", "--eps", "0.1,0.05,0.025,0.0125",
                          "--schemes", "psav2,srsav2"});
    CHECK(c.spec.dt == 1.0 / 128);
    CHECK(c.eps_list.size() == 4);
    CHECK(c.schemes.size() == 2);
  }

  TEST_CASE("configuration errors name the field") {
    CHECK_THROWS_WITH_AS(parse({"converge", "--dts", "1/4,1/8"}), doctest::Contains("scheme"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse({"simulate", "--scheme", "psav1"}), doctest::Contains("dt"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse({"simulate", "--scheme", "psav1", "--dt", "1/3x"}),
                         doctest::Contains("dt"), ConfigError);
    CHECK_THROWS_WITH_AS(parse({"converge", "--scheme", "psav1", "--dts", "1/4", "--s", "3"}),
                         doctest::Contains("s:"), ConfigError);
    CHECK_THROWS_WITH_AS(parse({"simulate", "--case", "example1", "--backend", "spectral",
                                "--scheme", "psav1", "--dt", "1/4"}),
                         doctest::Contains("backend"), ConfigError);
    CHECK_THROWS_WITH_AS(parse({"simulate", "--scheme", "srsav1", "--dt", "1/4", "--s", "0"}),
                         doctest::Contains("s:"), ConfigError);
    CHECK(call({"converge", "--dts", "1/4"}) == 2);
    CHECK(call({"simulate", "--bogus", "1"}) == 2);
    CHECK(call({"launch"}) == 2);
    CHECK(call({"--help"}) == 0);
  }

  TEST_CASE("config file values lose to flags") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    std::ofstream(cfg) << R"({"command": "simulate", "scheme": "psav1", "dt": "1/8", "n": 16, "eps": 0.001})";
    const auto c = parse({"--config", cfg.string(), "--n", "24"});
    CHECK(c.command == cli::Command::Simulate);
    CHECK(c.spec.dt == 0.125);
    CHECK(c.spec.n == 24);
    CHECK(c.spec.eps == 0.001);
    std::ofstream(cfg) << R"({"command": "simulate", "sheme": "psav1"})";
    CHECK_THROWS_WITH_AS(parse({"--config", cfg.string()}), doctest::Contains("sheme"), ConfigError);
  }

  TEST_CASE("simulate from zero initial data writes zero snapshots") {
    TempDir tmp;
    const Grid g = testing::periodic(8);
    std::ofstream(tmp.path / "zero.txt") << [&] {
      std::ostringstream s;
      write_field(s, VectorField(g));
      return s.str();
    }();
    const fs::path out = tmp.path / "run";
    REQUIRE(call({"simulate", "--case", (tmp.path / "zero.txt").string(), "--scheme", "psav2",
                  "--dt", "1/4", "--T", "1", "--snapshot-every", "2", "--out", out.string()}) == 0);
    int snapshots = 0;
    for (const auto& e : fs::directory_iterator(out)) {
      const std::string name = e.path().filename().string();
      if (name.rfind("u_", 0) != 0 && name.rfind("p_", 0) != 0) continue;
      ++snapshots;
      std::ifstream in(e.path());
      std::string header;
      std::getline(in, header);
      for (double v; in >> v;) CHECK(v == 0.0);
    }
    CHECK(snapshots == 6);  // steps 0, 2 and 4
    CHECK(fs::exists(out / "u_000004.txt"));
    CHECK(fs::exists(out / "run.json"));
    CHECK(fs::exists(out / "report.csv"));
    std::ifstream ck(out / "checkpoint.txt");
    const Checkpoint c = read_checkpoint(ck);
    CHECK(c.state.step == 4);
    CHECK(c.state.q == 1.0);
  }

  TEST_CASE("converge report and reproducibility from the manifest") {
    TempDir tmp;
    const fs::path out = tmp.path / "tg";
    REQUIRE(call({"converge", "--case", "example2", "--scheme", "psav1", "--n", "16", "--dts",
                  "1/4,1/8,1/16", "--jobs", "2", "--out", out.string()}) == 0);
    std::ifstream in(out / "report.csv");
    const ConvergenceReport r = ConvergenceReport::read_csv(in);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[2].order_u == doctest::Approx(1.0).epsilon(0.15));

    const fs::path again = tmp.path / "again";
    REQUIRE(call({"--config", (out / "run.json").string(), "--out", again.string()}) == 0);
    CHECK(without_timing(slurp(out / "report.csv")) == without_timing(slurp(again / "report.csv")));
  }

  TEST_CASE("energy command writes one series per dt") {
    TempDir tmp;
    const fs::path out = tmp.path / "energy";
    REQUIRE(call({"energy", "--case", "example2", "--scheme", "psav2", "--n", "16", "--dts",
                  "1/4,1/32", "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "dt_1_4" / "energy.csv"));
    CHECK(fs::exists(out / "dt_1_32" / "energy.csv"));
    CHECK(fs::exists(out / "report.csv"));
  }

  TEST_CASE("output root from the environment") {
    TempDir tmp;
    ::setenv("SAVNS_OUTPUT_ROOT", tmp.path.c_str(), 1);
    const auto c = parse({"simulate", "--case", "example2", "--scheme", "psav1", "--dt", "1/4"});
    ::unsetenv("SAVNS_OUTPUT_ROOT");
    CHECK(c.out == tmp.path / "simulate_example2_psav1");
  }
}
