#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bellsim {

// Raised for malformed configuration (unknown keys, bad values); maps to the
// CLI's config-error exit code, as opposed to failures during the run.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Artifact {
  std::string name;     // file name, e.g. "bsm_outcomes.csv"
  std::string content;
};

struct ExperimentResult {
  std::string metrics_json;
  std::vector<Artifact> artifacts;
};

// Runs one experiment described by a JSON config document. Recognized keys:
//   experiment   "bsm" | "hom-scan" | "prepare" | "tomography" | "ghz"
//   scheme       "symmetric" (default) | "standard"
//   input        Bell/GHZ name or per-party polarization string
//   gamma        wavepacket overlap in [0,1]; overrides the delay model
//   l, lc        optical delay and coherence length (mm)
//   delays       "start:stop:count" or array of delays (hom-scan)
//   classes      coincidence class names (hom-scan)
//   n            party count (ghz)
//   shots, seed  tomography sampling; shots = 0 uses exact probabilities
//   tomography   bool, run tomography of the heralded state (prepare)
//   format       "csv" (default) | "json" | "both"
//   prefix       prepended to artifact names
//   output_dir   consumed by the CLI, accepted and echoed here
// Unknown keys are rejected.
ExperimentResult run_experiment(const std::string& config_json);

}  // namespace bellsim
