#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ptk/experiments.hpp"

using namespace ptk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ptk_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PTK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing") {
  const KvConfig config = KvConfig::parse(
      "# comment\n alpha = 0.5 \n\nn_max=7 # trailing\nname = hello\n");
  CHECK(config.get_double("alpha", 0.0) == 0.5);
  CHECK(config.get_int("n_max", 0) == 7);
  CHECK(config.get_string("name", "") == "hello");
  CHECK(config.get_int("missing", 3) == 3);
  CHECK_THROWS_AS((void)KvConfig::parse("no equals sign"), validation_error);
  CHECK_THROWS_AS((void)KvConfig::parse("a = b\n= c\n"), validation_error);
  const KvConfig bad = KvConfig::parse("alpha = x\n");
  CHECK_THROWS_AS((void)bad.get_double("alpha", 0.0), validation_error);
}

TEST_CASE("validation failures name the offending rule") {
  KvConfig config;
  config.set("alpha", "1.0");
  CHECK_THROWS_WITH_AS(
      (void)run_scenario("cheese-build", config, fresh_dir("bad_alpha").string()),
      doctest::Contains("0<alpha<1"), validation_error);

  KvConfig refined;
  refined.set("kind", "refined");
  refined.set("u", "1.4");
  CHECK_THROWS_WITH_AS((void)run_scenario("exceptional-set", refined,
                                          fresh_dir("bad_u").string()),
                       doctest::Contains("min{1,s,t}"), validation_error);

  CHECK_THROWS_AS((void)run_scenario("bogus", KvConfig{}, "out"), validation_error);

  KvConfig typo;
  typo.set("trples", "5");
  CHECK_THROWS_WITH_AS((void)run_scenario("pipeline-identity", typo,
                                          fresh_dir("typo").string()),
                       doctest::Contains("unknown config keys: trples"),
                       validation_error);
}

TEST_CASE("describe covers every scenario and rejects unknown names") {
  for (const std::string& name : scenario_names()) {
    const std::string text = describe_scenario(name);
    CHECK(text.find(name) == 0);
    CHECK(text.find("keys:") != std::string::npos);
  }
  CHECK(describe_scenario("wiener").find("2^(s n) * C_s(A_n(b) & E)") !=
        std::string::npos);
  CHECK(describe_scenario("pipeline-identity").find("(R_a - T0)/(a-b)") !=
        std::string::npos);
  CHECK_THROWS_AS((void)describe_scenario("bogus"), validation_error);
}

TEST_CASE("scenario outputs are deterministic byte for byte") {
  KvConfig config;
  config.set("n_max", "6");
  config.set("set", "potential-single");
  config.set("pitch_divisor", "8");
  const fs::path dir_a = fresh_dir("wiener_a");
  const fs::path dir_b = fresh_dir("wiener_b");
  const RunManifest first = run_scenario("wiener", config, dir_a.string());
  const RunManifest second = run_scenario("wiener", config, dir_b.string());
  CHECK(first.config_hash == second.config_hash);
  REQUIRE(first.outputs == second.outputs);
  for (const std::string& name : first.outputs)
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("every scenario runs end to end with small settings") {
  SUBCASE("cheese-build") {
    KvConfig config;
    config.set("n_max", "8");
    config.set("profile_n_max", "5");
    const fs::path dir = fresh_dir("cheese");
    const RunManifest manifest = run_scenario("cheese-build", config, dir.string());
    for (const std::string& name :
         {"cheese.json", "annuli.csv", "density_u.csv", "summary.json"})
      CHECK(fs::exists(dir / name));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(manifest.stages.size() >= 2);
  }
  SUBCASE("capacity-ball") {
    KvConfig config;
    config.set("levels", "2");
    config.set("support_divisor", "8");
    const fs::path dir = fresh_dir("capacity");
    run_scenario("capacity-ball", config, dir.string());
    CHECK(slurp(dir / "levels.csv").find("estimate") != std::string::npos);
    CHECK(slurp(dir / "summary.json").find("monotone_nonincreasing") !=
          std::string::npos);
  }
  SUBCASE("exceptional-set") {
    KvConfig config;
    config.set("kind", "h-tilde");
    config.set("grid_pitch", "0.02");
    config.set("profile_n_max", "4");
    config.set("profile_mode", "mc");
    config.set("profile_samples", "1500");
    const fs::path dir = fresh_dir("exceptional");
    run_scenario("exceptional-set", config, dir.string());
    CHECK(slurp(dir / "points.csv").find("in_set") != std::string::npos);
  }
  SUBCASE("dq-theorem") {
    KvConfig config;
    config.set("n_max", "16");
    config.set("shell_samples", "400");
    config.set("profile_mode", "mc");
    config.set("profile_samples", "2500");
    config.set("profile_n_max", "8");
    const fs::path dir = fresh_dir("dq");
    run_scenario("dq-theorem", config, dir.string());
    const std::string summary = slurp(dir / "summary.json");
    CHECK(summary.find("relative_tail") != std::string::npos);
    CHECK(summary.find("k_constant") != std::string::npos);
  }
  SUBCASE("pipeline-identity") {
    KvConfig config;
    config.set("triples", "5");
    const fs::path dir = fresh_dir("pipeline");
    run_scenario("pipeline-identity", config, dir.string());
    const std::string summary = slurp(dir / "summary.json");
    CHECK(summary.find("\"all_within_1e-12\": true") != std::string::npos);
  }
}

TEST_CASE("cli exit codes: success, validation, numeric failure") {
  const fs::path dir = fresh_dir("cli");
  const fs::path config = dir / "config.cfg";
  {
    std::ofstream out(config);
    out << "triples = 3\n";
  }
  CHECK(run_cli("describe wiener") == 0);
  CHECK(run_cli("describe bogus") == 2);
  CHECK(run_cli("run pipeline-identity --config " + config.string() + " --out " +
                (dir / "ok").string()) == 0);

  const fs::path bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "alpha = 1.0\n";
  }
  CHECK(run_cli("run cheese-build --config " + bad.string() + " --out " +
                (dir / "bad").string()) == 2);

  const fs::path zero = dir / "zero.cfg";
  {
    std::ofstream out(zero);
    out << "budget_amplitude = 0\n";
  }
  CHECK(run_cli("run cheese-build --config " + zero.string() + " --out " +
                (dir / "zero").string()) == 3);
}

TEST_CASE("config file entries override cli seed") {
  const fs::path dir = fresh_dir("precedence");
  const fs::path config = dir / "config.cfg";
  {
    std::ofstream out(config);
    out << "n_max = 6\nseed = 42\n";
  }
  const int code = run_cli("run cheese-build --seed 99 --config " + config.string() +
                           " --out " + (dir / "a").string());
  CHECK(code == 0);
  const std::string manifest = slurp(dir / "a" / "manifest.json");
  CHECK(manifest.find("\"seed\": \"42\"") != std::string::npos);
}
