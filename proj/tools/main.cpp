// Command-line front end for the bellsim shared library. All physics goes
// through the C API; this binary only assembles the experiment config,
// writes the returned artifacts and reports status.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bellsim/bellsim_c.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_file;
  std::string output_dir;
  std::string prefix;
  std::string format;
  std::string scheme;
  std::string input;
  std::optional<double> gamma;
  std::optional<double> l;
  std::optional<double> lc;
  std::string delays;
  std::vector<std::string> classes;
  std::optional<int> n;
  std::optional<int> shots;
  std::optional<std::uint64_t> seed;
  bool tomography = false;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_file,
                  "JSON config file; explicit flags override file values");
  cmd->add_option("--output-dir", opt.output_dir,
                  "directory for artifacts (default $BELLSIM_OUT_DIR or .)");
  cmd->add_option("--prefix", opt.prefix, "prefix prepended to artifact file names");
  cmd->add_option("--format", opt.format, "artifact format: csv (default), json or both");
}

void add_state_flags(CLI::App* cmd, Options& opt, const char* input_help) {
  cmd->add_option("--input", opt.input, input_help);
  cmd->add_option("--gamma", opt.gamma,
                  "wavepacket overlap in [0,1]; bypasses the delay model");
  cmd->add_option("--delay", opt.l, "optical delay l (same units as lc)");
  cmd->add_option("--lc", opt.lc, "coherence length of the wavepacket overlap model");
}

// Assembles the experiment config: file values first, flags on top.
json build_config(const std::string& experiment, const Options& opt) {
  json cfg = json::object();
  if (!opt.config_file.empty()) {
    std::ifstream in(opt.config_file);
    if (!in) throw std::invalid_argument("cannot read config file " + opt.config_file);
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  }
  cfg["experiment"] = experiment;
  if (!opt.scheme.empty()) cfg["scheme"] = opt.scheme;
  if (!opt.input.empty()) cfg["input"] = opt.input;
  if (opt.gamma) cfg["gamma"] = *opt.gamma;
  if (opt.l) cfg["l"] = *opt.l;
  if (opt.lc) cfg["lc"] = *opt.lc;
  if (!opt.delays.empty()) cfg["delays"] = opt.delays;
  if (!opt.classes.empty()) cfg["classes"] = opt.classes;
  if (opt.n) cfg["n"] = *opt.n;
  if (opt.shots) cfg["shots"] = *opt.shots;
  if (opt.seed) cfg["seed"] = *opt.seed;
  if (opt.tomography) cfg["tomography"] = true;
  if (!opt.prefix.empty()) cfg["prefix"] = opt.prefix;
  if (!opt.format.empty()) cfg["format"] = opt.format;
  if (!opt.output_dir.empty()) cfg["output_dir"] = opt.output_dir;
  return cfg;
}

std::filesystem::path resolve_output_dir(const json& cfg) {
  if (cfg.contains("output_dir")) return cfg.at("output_dir").get<std::string>();
  if (const char* env = std::getenv("BELLSIM_OUT_DIR")) return env;
  return ".";
}

// Write-then-rename so partially written files are never observed.
void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out.good()) throw std::runtime_error("short write to " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string metrics_file_name(const std::string& experiment, const json& cfg) {
  std::string stem = experiment;
  for (char& c : stem)
    if (c == '-') c = '_';
  std::string prefix;
  if (cfg.contains("prefix")) prefix = cfg.at("prefix").get<std::string>();
  return prefix + stem + "_metrics.json";
}

int run(const std::string& experiment, const Options& opt) {
  const json cfg = build_config(experiment, opt);

  bellsim_result* result = nullptr;
  const bellsim_status rc = bellsim_run_experiment(cfg.dump().c_str(), &result);
  if (rc != BELLSIM_OK) {
    std::cerr << "bellsim: " << bellsim_last_error() << "\n";
    return rc == BELLSIM_ERROR_CONFIG || rc == BELLSIM_ERROR_INVALID_ARGUMENT ? kExitConfig
                                                                              : kExitRuntime;
  }

  int status = kExitOk;
  try {
    const std::filesystem::path dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);
    const std::string metrics_name = metrics_file_name(experiment, cfg);
    write_atomically(dir / metrics_name,
                     std::string(bellsim_result_metrics_json(result)) + "\n");
    std::cout << (dir / metrics_name).lexically_normal().string() << "\n";
    for (size_t i = 0; i < bellsim_result_artifact_count(result); ++i) {
      const std::string name = bellsim_result_artifact_name(result, i);
      write_atomically(dir / name, bellsim_result_artifact_content(result, i));
      std::cout << (dir / name).lexically_normal().string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "bellsim: " << e.what() << "\n";
    status = kExitRuntime;
  }
  bellsim_result_free(result);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("bellsim ") + bellsim_version() +
               " - linear-optical Bell state preparation and measurement simulator"};
  app.name("bellsim");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  Options opt;

  CLI::App* bsm = app.add_subcommand(
      "bsm", "Bell state measurement outcome table for one input state");
  bsm->add_option("--scheme", opt.scheme, "standard or symmetric (default symmetric)");
  add_state_flags(bsm, opt, "input Bell state: phi+, phi-, psi+ or psi-");
  add_common_flags(bsm, opt);

  CLI::App* hom = app.add_subcommand(
      "hom-scan", "coincidence probabilities versus optical delay with visibilities");
  hom->add_option("--scheme", opt.scheme, "standard or symmetric (default symmetric)");
  hom->add_option("--input", opt.input, "input Bell state (default phi-)");
  hom->add_option("--lc", opt.lc, "coherence length of the wavepacket overlap model");
  hom->add_option("--delays", opt.delays, "delay grid start:stop:count");
  hom->add_option("--class", opt.classes,
                  "coincidence class such as D13+D24 or D11 (repeatable)");
  add_common_flags(hom, opt);

  CLI::App* prepare = app.add_subcommand(
      "prepare", "heralded Bell state preparation from a separable input");
  prepare->add_option("--scheme", opt.scheme, "standard or symmetric (default symmetric)");
  add_state_flags(prepare, opt,
                  "two-character product input over H,V,D,A,R,L (default DD)");
  prepare->add_flag("--tomography", opt.tomography,
                    "simulate tomography of the heralded state and reconstruct it");
  prepare->add_option("--shots", opt.shots,
                      "tomography shots per setting; 0 uses exact probabilities");
  prepare->add_option("--seed", opt.seed, "tomography sampling seed");
  add_common_flags(prepare, opt);

  CLI::App* tomo = app.add_subcommand(
      "tomography", "simulated 36-setting tomography with linear-inversion reconstruction");
  tomo->add_option("--scheme", opt.scheme, "standard or symmetric (default symmetric)");
  add_state_flags(tomo, opt,
                  "source: Bell name for the ideal state, or a product input to herald");
  tomo->add_option("--shots", opt.shots, "shots per setting; 0 uses exact probabilities");
  tomo->add_option("--seed", opt.seed, "sampling seed");
  add_common_flags(tomo, opt);

  CLI::App* ghz = app.add_subcommand(
      "ghz", "N-party GHZ analyzer and preparation on the ring-exchange circuit");
  ghz->add_option("--n", opt.n, "number of parties (>= 2)");
  add_state_flags(ghz, opt,
                  "ghz+, ghz- for the analyzer; an N-character product string to herald");
  add_common_flags(ghz, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (CLI::App* cmd : {bsm, hom, prepare, tomo, ghz})
      if (cmd->parsed()) return run(cmd->get_name(), opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bellsim: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "bellsim: " << e.what() << "\n";
    return kExitRuntime;
  }
  std::cerr << "bellsim: no subcommand\n";
  return kExitConfig;
}
