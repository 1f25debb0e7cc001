#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellsim/detection.hpp"
#include "bellsim/states.hpp"

namespace bellsim {

// ---------------------------------------------------------------------------
// HOM scans

struct CoincidenceClass {
  std::string name;                        // e.g. "D13+D24"
  std::vector<DetectionPattern> patterns;  // disjoint across classes
};

CoincidenceClass coincidence_class(const std::string& name);  // "D13+D24" -> patterns

enum class FringeShape { Dip, Peak, Flat };

struct HomSeries {
  std::string name;
  double c_zero = 0.0;  // class probability at l = 0 (gamma = 1)
  double c_far = 0.0;   // non-interfering asymptote, evaluated at gamma = 0
  double visibility = 0.0;
  FringeShape shape = FringeShape::Flat;
  std::vector<double> probabilities;  // one per delay
};

struct HomScan {
  std::vector<double> delays;
  double coherence_length = 0.0;
  std::vector<HomSeries> series;
};

// Class probabilities versus optical delay. Visibility is the relative depth
// (height) of the dip (peak) against the gamma = 0 asymptote:
// (c_far - c_0)/c_far for dips, (c_0 - c_far)/c_far for peaks.
HomScan hom_scan(const CircuitSpec& circuit, const PhotonicState& input,
                 const std::vector<double>& delays,
                 const std::vector<CoincidenceClass>& classes);

std::string hom_scan_csv(const HomScan& scan);

// ---------------------------------------------------------------------------
// QBER

// Wrong-verdict probability among conclusive {PhiPlus, PhiMinus} outcomes for
// a phi+ or phi- input at wavepacket overlap gamma. The input must be one of
// the two phi Bell states on the circuit's input paths.
double qber(const CircuitSpec& circuit, const PhotonicState& input, double gamma);

// ---------------------------------------------------------------------------
// Tomography (two qubits, 36 projector settings: all pairs from H,V,D,A,R,L)

inline constexpr char kTomographyBases[6] = {'H', 'V', 'D', 'A', 'R', 'L'};

struct TomographyRow {
  char setting_a;
  char setting_b;
  double value;  // photon-pair count, or exact probability when shots == 0
};

struct TomographyCounts {
  int shots = 0;  // 0 means exact Born probabilities, no sampling
  std::uint64_t seed = 0;
  std::vector<TomographyRow> rows;
};

// Born probability of the projector |s1 s2><s1 s2| on rho.
double setting_probability(const DensityMatrix& rho, char setting_a, char setting_b);

// Binomial count for one setting, drawn from a sub-stream derived from the
// master seed and the setting index; results are identical whether settings
// are simulated serially or in parallel.
int setting_count(const DensityMatrix& rho, int setting_index, int shots,
                  std::uint64_t master_seed);

TomographyCounts simulate_tomography(const DensityMatrix& rho, int shots,
                                     std::uint64_t seed);

std::string tomography_csv(const TomographyCounts& counts);

// Least-squares linear inversion over the Pauli basis followed by projection
// to the nearest PSD unit-trace matrix (eigenvalue clipping + renormalization).
DensityMatrix reconstruct(const TomographyCounts& counts);

// ---------------------------------------------------------------------------
// Metrics

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target);
double concurrence(const DensityMatrix& rho);  // Wootters, two qubits only
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace bellsim
