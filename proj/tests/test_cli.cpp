// Black-box tests of the installed CLI binary: spawns the real executable,
// checks files, exit codes and reproducibility. Paths come from the test
// environment (see tests/CMakeLists.txt).
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string env_or_fail(const char* name) {
  const char* value = std::getenv(name);
  REQUIRE_MESSAGE(value != nullptr, name << " must be set by ctest");
  return value;
}

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = env_or_fail("BELLSIM_CLI") + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
  const int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), output};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(env_or_fail("BELLSIM_WORK_DIR")) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file " << path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help enumerates every config key (golden file)") {
  const RunResult help = run_cli("--help-all");
  CHECK(help.exit_code == 0);
  const fs::path golden = fs::path(env_or_fail("BELLSIM_GOLDEN_DIR")) / "cli_help.txt";
  CHECK(help.output == slurp(golden));
  for (const std::string key :
       {"--scheme", "--input", "--gamma", "--delay", "--lc", "--delays", "--class", "--n",
        "--shots", "--seed", "--tomography", "--format", "--prefix", "--output-dir",
        "--config"})
    CHECK(help.output.find(key) != std::string::npos);
}

TEST_CASE("bsm run writes the outcome table and metrics") {
  const fs::path dir = fresh_dir("bsm");
  const RunResult r =
      run_cli("bsm --scheme symmetric --input phi- --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "bsm_metrics.json"));
  CHECK(metrics.at("outcomes").at("D14").get<double>() == doctest::Approx(0.5));
  CHECK(metrics.at("outcomes").at("D23").get<double>() == doctest::Approx(0.5));
  CHECK(metrics.at("schema_version") == 1);
  const std::string csv = slurp(dir / "bsm_outcomes.csv");
  CHECK(csv.find("D14,0.5") != std::string::npos);
}

TEST_CASE("hom-scan reproduces the bunching peak") {
  const fs::path dir = fresh_dir("hom");
  const RunResult r = run_cli(
      "hom-scan --input psi- --class D11 --lc 0.085 --delays -0.4:0.4:81 --output-dir " +
      dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "hom_scan_metrics.json"));
  const auto& series = metrics.at("series").at(0);
  CHECK(series.at("class") == "D11");
  CHECK(series.at("shape") == "peak");
  CHECK(series.at("visibility").get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(series.at("c_zero").get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(series.at("c_far").get<double>() == doctest::Approx(0.125).epsilon(1e-10));
  const std::string csv = slurp(dir / "hom_scan.csv");
  CHECK(csv.find("l,class,probability") != std::string::npos);
}

TEST_CASE("prepare with exact tomography reports the ideal Bell pair") {
  const fs::path dir = fresh_dir("prepare");
  const RunResult r = run_cli(
      "prepare --input DD --gamma 1.0 --tomography --shots 0 --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "prepare_metrics.json"));
  CHECK(metrics.at("heralding_probability").get<double>() == doctest::Approx(0.5));
  CHECK(metrics.at("fidelity").at("per_target").at("phi+").get<double>() ==
        doctest::Approx(1.0));
  CHECK(metrics.at("concurrence").get<double>() == doctest::Approx(1.0));
  CHECK(metrics.at("tomography").at("fidelity").at("best").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(metrics.at("tomography").at("trace_distance_to_source").get<double>() < 1e-6);
  CHECK(fs::exists(dir / "prepare_state.json"));
  CHECK(fs::exists(dir / "tomography_counts.csv"));
  CHECK(fs::exists(dir / "tomography_rho.json"));
}

TEST_CASE("reruns with the same seed are byte identical") {
  const fs::path dir1 = fresh_dir("repro1");
  const fs::path dir2 = fresh_dir("repro2");
  const std::string args = "tomography --input DD --gamma 0.9 --shots 500 --seed 7 ";
  CHECK(run_cli(args + "--output-dir " + dir1.string()).exit_code == 0);
  CHECK(run_cli(args + "--output-dir " + dir2.string()).exit_code == 0);
  for (const std::string name :
       {"tomography_metrics.json", "tomography_counts.csv", "tomography_rho.json"})
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
}

TEST_CASE("ghz analyzer run reports clean parity classes") {
  const fs::path dir = fresh_dir("ghz");
  const RunResult r = run_cli("ghz --n 3 --input ghz- --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "ghz_metrics.json"));
  CHECK(metrics.at("odd_parity_probability").get<double>() == doctest::Approx(1.0));
  CHECK(metrics.at("leakage").get<double>() < 1e-10);
}

TEST_CASE("format both emits csv and json artifacts") {
  const fs::path dir = fresh_dir("format");
  const RunResult r =
      run_cli("bsm --input psi+ --format both --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "bsm_outcomes.csv"));
  CHECK(fs::exists(dir / "bsm_outcomes.json"));
  const auto outcomes = nlohmann::json::parse(slurp(dir / "bsm_outcomes.json"));
  CHECK(outcomes.at("outcomes").at("D11").get<double>() == doctest::Approx(0.25));
}

TEST_CASE("ghz run at partial overlap stays normalized") {
  const fs::path dir = fresh_dir("ghzpartial");
  const RunResult r =
      run_cli("ghz --n 3 --input ghz+ --gamma 0.8 --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "ghz_metrics.json"));
  const double even = metrics.at("even_parity_probability").get<double>();
  const double odd = metrics.at("odd_parity_probability").get<double>();
  const double other = metrics.at("non_coincidence_probability").get<double>();
  CHECK(even + odd + other == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(even > odd);  // interference only partially washed out
}

TEST_CASE("config file values are used and flags override them") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"input":"phi+","gamma":1.0})";
  }
  const RunResult r = run_cli("bsm --config " + (dir / "run.json").string() +
                              " --input phi- --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const auto metrics = nlohmann::json::parse(slurp(dir / "bsm_metrics.json"));
  CHECK(metrics.at("input") == "phi-");  // flag wins
}

TEST_CASE("error exit codes") {
  const fs::path dir = fresh_dir("errors");
  // Unknown state name: config error (2).
  CHECK(run_cli("bsm --input waffle --output-dir " + dir.string()).exit_code == 2);
  // Bad party count: config error (2).
  CHECK(run_cli("ghz --n 1 --output-dir " + dir.string()).exit_code == 2);
  // Bad delay grid: config error (2).
  CHECK(run_cli("hom-scan --delays nope --output-dir " + dir.string()).exit_code == 2);
  // Unknown key in the config file: config error (2).
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"inptu":"phi+"})";
  }
  CHECK(run_cli("bsm --config " + (dir / "bad.json").string()).exit_code == 2);
  // Missing config file: config error (2).
  CHECK(run_cli("bsm --config /no/such/file.json").exit_code == 2);
  // Unwritable output path: runtime error (3).
  CHECK(run_cli("bsm --output-dir /proc/no/such/place").exit_code == 3);
  // Diagnostics land on the error stream, one line.
  const RunResult r = run_cli("bsm --input waffle --output-dir " + dir.string());
  CHECK(r.output.find("bellsim:") != std::string::npos);
}
