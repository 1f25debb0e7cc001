#include "bellsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>

#include "bellsim/analysis.hpp"

namespace bellsim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kExperiments{"bsm", "hom-scan", "prepare", "tomography", "ghz"};
const std::set<std::string> kKnownKeys{"experiment", "scheme", "input", "gamma",
                                       "l",          "lc",     "delays", "classes",
                                       "n",          "shots",  "seed",   "tomography",
                                       "format",     "prefix", "output_dir"};

struct Config {
  std::string experiment;
  std::string scheme = "symmetric";
  std::string input;
  std::optional<double> gamma;
  double l = 0.0;
  double lc = 0.085;
  std::vector<double> delays;
  std::vector<std::string> classes;
  int n = 2;
  int shots = 1000;
  std::uint64_t seed = 1;
  bool tomography = false;
  std::string format = "csv";
  std::string prefix;
  std::string output_dir;
};

std::vector<double> parse_delay_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw ConfigError("delays must be start:stop:count, got \"" + text + "\"");
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    start = std::stod(text.substr(0, first));
    stop = std::stod(text.substr(first + 1, second - first - 1));
    count = std::stol(text.substr(second + 1));
  } catch (const std::exception&) {
    throw ConfigError("delays must be start:stop:count, got \"" + text + "\"");
  }
  if (count < 1) throw ConfigError("delay grid needs at least one point");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (long i = 0; i < count; ++i) grid.push_back(start + step * static_cast<double>(i));
  return grid;
}

bool valid_input_name(const std::string& name, int parties) {
  if (name == "ghz+" || name == "ghz-") return true;
  if (name == "phi+" || name == "phi-" || name == "psi+" || name == "psi-")
    return parties == 2;
  if (static_cast<int>(name.size()) != parties) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::string("HVDARLhvdarl").find(c) != std::string::npos;
  });
}

Config parse_config(const std::string& config_json) {
  json doc;
  try {
    doc = json::parse(config_json);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key: " + key);

  Config cfg;
  try {
    if (!doc.contains("experiment")) throw ConfigError("config key 'experiment' is required");
    cfg.experiment = doc.at("experiment").get<std::string>();
    if (doc.contains("scheme")) cfg.scheme = doc.at("scheme").get<std::string>();
    if (doc.contains("input")) cfg.input = doc.at("input").get<std::string>();
    if (doc.contains("gamma")) cfg.gamma = doc.at("gamma").get<double>();
    if (doc.contains("l")) cfg.l = doc.at("l").get<double>();
    if (doc.contains("lc")) cfg.lc = doc.at("lc").get<double>();
    if (doc.contains("n")) cfg.n = doc.at("n").get<int>();
    if (doc.contains("shots")) cfg.shots = doc.at("shots").get<int>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("tomography")) cfg.tomography = doc.at("tomography").get<bool>();
    if (doc.contains("format")) cfg.format = doc.at("format").get<std::string>();
    if (doc.contains("prefix")) cfg.prefix = doc.at("prefix").get<std::string>();
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("delays")) {
      const json& d = doc.at("delays");
      if (d.is_string())
        cfg.delays = parse_delay_grid(d.get<std::string>());
      else if (d.is_array())
        cfg.delays = d.get<std::vector<double>>();
      else
        throw ConfigError("delays must be a start:stop:count string or an array");
    }
    if (doc.contains("classes")) cfg.classes = doc.at("classes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }

  if (!kExperiments.contains(cfg.experiment))
    throw ConfigError("unknown experiment: " + cfg.experiment);
  if (cfg.scheme != "symmetric" && cfg.scheme != "standard")
    throw ConfigError("scheme must be 'symmetric' or 'standard', got '" + cfg.scheme + "'");
  if (cfg.gamma && !(*cfg.gamma >= 0.0 && *cfg.gamma <= 1.0))
    throw ConfigError("gamma must lie in [0,1]");
  if (!(cfg.lc > 0.0)) throw ConfigError("lc must be positive");
  if (cfg.shots < 0) throw ConfigError("shots must be >= 0");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    throw ConfigError("format must be 'csv', 'json' or 'both'");

  if (cfg.experiment == "ghz") {
    if (cfg.n < 2) throw ConfigError("ghz needs n >= 2");
    if (cfg.scheme == "standard") throw ConfigError("ghz uses the symmetric scheme");
  } else {
    cfg.n = 2;
  }
  if (cfg.experiment == "hom-scan" && cfg.gamma)
    throw ConfigError("hom-scan scans the delay l; gamma is not applicable");
  if (cfg.experiment == "hom-scan" && cfg.delays.empty())
    throw ConfigError("hom-scan needs a delays grid");

  if (cfg.input.empty()) {
    if (cfg.experiment == "bsm") cfg.input = "phi+";
    else if (cfg.experiment == "hom-scan") cfg.input = "phi-";
    else if (cfg.experiment == "prepare") cfg.input = "DD";
    else if (cfg.experiment == "tomography") cfg.input = "phi+";
    else cfg.input = "ghz+";
  }
  if (!valid_input_name(cfg.input, cfg.n))
    throw ConfigError("invalid input state name '" + cfg.input + "' for " +
                      std::to_string(cfg.n) + " parties");
  if (cfg.experiment == "prepare" &&
      (cfg.input.size() != 2 || !valid_input_name(cfg.input, 2) || cfg.input.find('+') != std::string::npos))
    throw ConfigError("prepare needs a two-character product input such as DD or DA");
  return cfg;
}

DelayModel delay_model(const Config& cfg) {
  if (cfg.gamma) return DelayModel::from_gamma(*cfg.gamma);
  return DelayModel::from_delay(cfg.l, cfg.lc);
}

CircuitSpec circuit_for(const Config& cfg) {
  if (cfg.experiment == "ghz") return ghz_circuit(cfg.n, delay_model(cfg));
  if (cfg.scheme == "standard") return standard_bsm(delay_model(cfg));
  return symmetric_bsm(delay_model(cfg));
}

ordered_json base_metrics(const Config& cfg) {
  ordered_json m;
  m["schema_version"] = 1;
  m["experiment"] = cfg.experiment;
  m["scheme"] = cfg.experiment == "ghz" ? "symmetric" : cfg.scheme;
  m["input"] = cfg.input;
  return m;
}

void push_distribution(ExperimentResult& result, const Config& cfg, const std::string& stem,
                       const OutcomeDistribution& dist) {
  if (cfg.format == "csv" || cfg.format == "both")
    result.artifacts.push_back({cfg.prefix + stem + ".csv", distribution_csv(dist)});
  if (cfg.format == "json" || cfg.format == "both")
    result.artifacts.push_back({cfg.prefix + stem + ".json", distribution_json(dist)});
}

bool one_photon_per_party(const DetectionPattern& pattern, int parties) {
  int total = 0;
  for (const auto& [d, c] : pattern) total += c;
  if (total != parties) return false;
  for (int i = 0; i < parties; ++i) {
    const int at_h = pattern.count(2 * i + 1) ? pattern.at(2 * i + 1) : 0;
    const int at_v = pattern.count(2 * i + 2) ? pattern.at(2 * i + 2) : 0;
    if (at_h + at_v != 1) return false;
  }
  return true;
}

int v_detector_count(const DetectionPattern& pattern) {
  int v = 0;
  for (const auto& [d, c] : pattern)
    if (d % 2 == 0) v += c;
  return v;
}

ordered_json fidelity_report(const DensityMatrix& rho) {
  ordered_json f;
  double best = -1.0;
  std::string best_name;
  for (Bell b : {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus}) {
    const double value = fidelity(rho, bell_vector(b));
    f[bell_name(b)] = value;
    if (value > best) {
      best = value;
      best_name = bell_name(b);
    }
  }
  ordered_json out;
  out["per_target"] = std::move(f);
  out["best_target"] = best_name;
  out["best"] = best;
  return out;
}

ExperimentResult run_bsm(const Config& cfg) {
  const CircuitSpec circuit = circuit_for(cfg);
  const PhotonicState input = named_state(cfg.input, circuit.input_paths);
  const OutcomeDistribution dist = measure(run_circuit(circuit, input), circuit);

  ordered_json metrics = base_metrics(cfg);
  metrics["gamma"] = circuit.delay.gamma();
  ordered_json outcomes = ordered_json::object();
  for (const auto& [pattern, prob] : dist.entries) outcomes[pattern_name(pattern)] = prob;
  metrics["outcomes"] = std::move(outcomes);

  std::map<BsmVerdict, double> verdicts;
  for (const auto& [pattern, prob] : dist.entries)
    verdicts[classify(pattern, scheme_of(circuit.kind))] += prob;
  ordered_json vj = ordered_json::object();
  double conclusive = 0.0;
  for (BsmVerdict v : {BsmVerdict::PhiPlus, BsmVerdict::PhiMinus, BsmVerdict::PsiPlus,
                       BsmVerdict::PsiMinus, BsmVerdict::Inconclusive}) {
    const double p = verdicts.count(v) ? verdicts.at(v) : 0.0;
    vj[verdict_name(v)] = p;
    if (v != BsmVerdict::Inconclusive) conclusive += p;
  }
  metrics["verdicts"] = std::move(vj);
  metrics["conclusive_probability"] = conclusive;
  if (cfg.scheme == "symmetric" && (cfg.input == "phi+" || cfg.input == "phi-"))
    metrics["qber"] = qber(circuit, input, circuit.delay.gamma());

  ExperimentResult result;
  push_distribution(result, cfg, "bsm_outcomes", dist);
  result.metrics_json = metrics.dump(2);
  return result;
}

std::vector<CoincidenceClass> scan_classes(const Config& cfg) {
  std::vector<std::string> names = cfg.classes;
  if (names.empty()) {
    if (cfg.input.rfind("psi", 0) == 0)
      names = {"D11", "D24"};
    else if (cfg.scheme == "standard")
      names = {"D12+D34", "D14+D23"};
    else
      names = {"D13+D24", "D14+D23"};
  }
  std::vector<CoincidenceClass> classes;
  classes.reserve(names.size());
  for (const std::string& name : names) {
    try {
      classes.push_back(coincidence_class(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return classes;
}

const char* shape_name(FringeShape s) {
  switch (s) {
    case FringeShape::Dip: return "dip";
    case FringeShape::Peak: return "peak";
    case FringeShape::Flat: return "flat";
  }
  return "?";
}

ExperimentResult run_hom_scan(const Config& cfg) {
  const CircuitSpec circuit = circuit_for(cfg);
  const PhotonicState input = named_state(cfg.input, circuit.input_paths);
  const HomScan scan = hom_scan(circuit, input, cfg.delays, scan_classes(cfg));

  ordered_json metrics = base_metrics(cfg);
  metrics["lc"] = cfg.lc;
  metrics["delay_points"] = scan.delays.size();
  ordered_json series = ordered_json::array();
  for (const HomSeries& s : scan.series) {
    ordered_json e;
    e["class"] = s.name;
    e["c_zero"] = s.c_zero;
    e["c_far"] = s.c_far;
    e["visibility"] = s.visibility;
    e["shape"] = shape_name(s.shape);
    series.push_back(std::move(e));
  }
  metrics["series"] = std::move(series);

  ExperimentResult result;
  result.artifacts.push_back({cfg.prefix + "hom_scan.csv", hom_scan_csv(scan)});
  result.metrics_json = metrics.dump(2);
  return result;
}

void add_tomography(ExperimentResult& result, ordered_json& metrics, const Config& cfg,
                    const DensityMatrix& source) {
  const TomographyCounts counts = simulate_tomography(source, cfg.shots, cfg.seed);
  const DensityMatrix recon = reconstruct(counts);
  result.artifacts.push_back({cfg.prefix + "tomography_counts.csv", tomography_csv(counts)});
  result.artifacts.push_back({cfg.prefix + "tomography_rho.json", recon.to_json()});

  ordered_json t;
  t["shots"] = cfg.shots;
  t["seed"] = cfg.seed;
  t["exact"] = cfg.shots == 0;
  t["fidelity"] = fidelity_report(recon);
  t["concurrence"] = concurrence(recon);
  t["trace_distance_to_source"] = trace_distance(recon, source);
  metrics["tomography"] = std::move(t);
}

ExperimentResult run_prepare(const Config& cfg) {
  const CircuitSpec circuit = circuit_for(cfg);
  const PhotonicState input = named_state(cfg.input, circuit.input_paths);
  const HeraldResult herald = heralded_state(run_prep(circuit, input), circuit);

  ordered_json metrics = base_metrics(cfg);
  metrics["gamma"] = circuit.delay.gamma();
  metrics["heralding_probability"] = herald.probability;

  ExperimentResult result;
  if (!herald.state) {
    metrics["heralded"] = false;
    result.metrics_json = metrics.dump(2);
    return result;
  }
  metrics["heralded"] = true;
  metrics["fidelity"] = fidelity_report(*herald.state);
  metrics["concurrence"] = concurrence(*herald.state);
  result.artifacts.push_back({cfg.prefix + "prepare_state.json", herald.state->to_json()});
  if (cfg.tomography) add_tomography(result, metrics, cfg, *herald.state);
  result.metrics_json = metrics.dump(2);
  return result;
}

ExperimentResult run_tomography(const Config& cfg) {
  // Source: an ideal Bell state, or the heralded output for a product input.
  std::optional<DensityMatrix> source;
  double heralding = 1.0;
  if (cfg.input == "phi+" || cfg.input == "phi-" || cfg.input == "psi+" ||
      cfg.input == "psi-") {
    source = DensityMatrix::from_pure(bell_vector(bell_from_name(cfg.input)));
  } else {
    const CircuitSpec circuit = circuit_for(cfg);
    const PhotonicState input = named_state(cfg.input, circuit.input_paths);
    HeraldResult herald = heralded_state(run_prep(circuit, input), circuit);
    if (!herald.state)
      throw std::invalid_argument("tomography source heralds with probability zero");
    heralding = herald.probability;
    source = std::move(herald.state);
  }

  ordered_json metrics = base_metrics(cfg);
  metrics["heralding_probability"] = heralding;
  ExperimentResult result;
  add_tomography(result, metrics, cfg, *source);
  result.metrics_json = metrics.dump(2);
  return result;
}

ExperimentResult run_ghz(const Config& cfg) {
  const CircuitSpec circuit = circuit_for(cfg);
  const PhotonicState input = named_state(cfg.input, circuit.input_paths);

  ordered_json metrics = base_metrics(cfg);
  metrics["n"] = cfg.n;
  metrics["gamma"] = circuit.delay.gamma();
  ExperimentResult result;

  if (cfg.input == "ghz+" || cfg.input == "ghz-") {
    const OutcomeDistribution dist = measure(run_circuit(circuit, input), circuit);
    double even = 0.0, odd = 0.0, other = 0.0;
    for (const auto& [pattern, prob] : dist.entries) {
      if (!one_photon_per_party(pattern, cfg.n))
        other += prob;
      else if (v_detector_count(pattern) % 2 == 0)
        even += prob;
      else
        odd += prob;
    }
    metrics["even_parity_probability"] = even;
    metrics["odd_parity_probability"] = odd;
    metrics["non_coincidence_probability"] = other;
    metrics["conclusive_probability"] = even + odd;
    metrics["leakage"] = cfg.input == "ghz+" ? 1.0 - even : 1.0 - odd;
    push_distribution(result, cfg, "ghz_outcomes", dist);
  } else {
    const HeraldResult herald = heralded_state(run_prep(circuit, input), circuit);
    metrics["heralding_probability"] = herald.probability;
    metrics["heralded"] = herald.state.has_value();
    if (herald.state) {
      metrics["fidelity_ghz_plus"] = fidelity(*herald.state, ghz_vector(cfg.n, true));
      metrics["fidelity_ghz_minus"] = fidelity(*herald.state, ghz_vector(cfg.n, false));
      result.artifacts.push_back({cfg.prefix + "ghz_state.json", herald.state->to_json()});
    }
  }
  result.metrics_json = metrics.dump(2);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const std::string& config_json) {
  const Config cfg = parse_config(config_json);
  if (cfg.experiment == "bsm") return run_bsm(cfg);
  if (cfg.experiment == "hom-scan") return run_hom_scan(cfg);
  if (cfg.experiment == "prepare") return run_prepare(cfg);
  if (cfg.experiment == "tomography") return run_tomography(cfg);
  return run_ghz(cfg);
}

}  // namespace bellsim
