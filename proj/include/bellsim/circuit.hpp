#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bellsim/elements.hpp"

namespace bellsim {

enum class CircuitKind { StandardBsm, SymmetricBsm, Ghz };
enum class Scheme { Standard, Symmetric };

std::string circuit_kind_name(CircuitKind kind);
Scheme scheme_of(CircuitKind kind);

struct Stage {
  std::string name;
  TransferMap map;
};

// One physical element for the topology dump: the optical train in order,
// ports in role order (inputs before outputs).
struct ElementInfo {
  std::string type;  // "delay", "pbs", "circulator", "hwp", "bs", "detector-pbs"
  std::vector<std::string> ports;
  double parameter = 0.0;  // hwp angle in degrees, delay overlap gamma
};

// One of the named interferometers, compiled eagerly to a single TransferMap.
// The per-stage maps are retained so intermediate states can be stepped
// through for regression against the element-by-element evolution.
//
// Detector wiring maps output ports to detector ids D1..D2N; the final
// per-port polarizing splitter in front of the detectors is represented by
// the wiring itself (each port feeds exactly one detector).
struct CircuitSpec {
  CircuitKind kind = CircuitKind::SymmetricBsm;
  int parties = 2;
  DelayModel delay;

  std::vector<Stage> stages;
  std::size_t prep_stage_count = 0;  // prefix of `stages` ending the preparation interferometer
  std::vector<ElementInfo> elements;

  std::map<PortKey, int> wiring;          // port -> detector id (1-based)
  std::vector<std::string> input_paths;   // one per party
  std::vector<std::string> output_paths;  // heralding paths, canonical order

  TransferMap compiled;       // fold of all stages
  TransferMap compiled_prep;  // fold of the preparation prefix

  std::string topology_json() const;
};

// The two photons meet at a 50:50 beamsplitter, each output is split by
// polarization onto two detectors. Distinguishes psi+ / psi-.
CircuitSpec standard_bsm(const DelayModel& delay = {});

// Per-party polarizing split, circulator exchange of the vertical
// amplitudes, 45 deg plates, recombination at the second splitter, 22.5 deg
// plates, polarization-resolved detection. Distinguishes phi+ / phi-.
CircuitSpec symmetric_bsm(const DelayModel& delay = {});

// N-party generalization: the vertical amplitude of party i is routed to
// party i+1 (mod N) around a directed ring; per-party optics as in the
// symmetric circuit. N = 2 is exactly symmetric_bsm.
CircuitSpec ghz_circuit(int parties, const DelayModel& delay = {});

CircuitSpec make_circuit(CircuitKind kind, int parties, const DelayModel& delay);

// Applies the compiled map / the preparation prefix / the first `count`
// stages to an input state on the circuit's input paths (temporal bin 0).
PhotonicState run_circuit(const CircuitSpec& spec, const PhotonicState& input);
PhotonicState run_prep(const CircuitSpec& spec, const PhotonicState& input);
PhotonicState run_stages(const CircuitSpec& spec, const PhotonicState& input,
                         std::size_t count);

}  // namespace bellsim
