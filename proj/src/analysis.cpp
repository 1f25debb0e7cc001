#include "bellsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <array>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bellsim {
namespace {

constexpr double kFlatTolerance = 1e-12;

double class_probability(const OutcomeDistribution& dist, const CoincidenceClass& cls) {
  double p = 0.0;
  for (const DetectionPattern& pattern : cls.patterns) p += dist.probability_of(pattern);
  return p;
}

OutcomeDistribution measure_at_gamma(const CircuitSpec& circuit, const PhotonicState& input,
                                     double gamma) {
  const CircuitSpec at =
      make_circuit(circuit.kind, circuit.parties, DelayModel::from_gamma(gamma));
  return measure(run_circuit(at, input), at);
}

// splitmix64; used to derive independent per-setting seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t setting_seed(std::uint64_t master, int setting_index) {
  std::uint64_t x = master;
  std::uint64_t s = 0;
  for (int k = 0; k <= setting_index; ++k) s = splitmix64(x);
  return s;
}

// Uniform double in [0,1) with the full 53-bit mantissa; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::Matrix2cd pauli(int k) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

Eigen::Vector4cd setting_ket(char a, char b) {
  const Eigen::Vector2cd ka = pol_ket(a);
  const Eigen::Vector2cd kb = pol_ket(b);
  Eigen::Vector4cd v;
  v << ka(0) * kb(0), ka(0) * kb(1), ka(1) * kb(0), ka(1) * kb(1);
  return v;
}

}  // namespace

CoincidenceClass coincidence_class(const std::string& name) {
  CoincidenceClass cls;
  cls.name = name;
  std::stringstream ss(name);
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part.empty()) throw std::invalid_argument("bad coincidence class name: " + name);
    cls.patterns.push_back(pattern_from_name(part));
  }
  if (cls.patterns.empty()) throw std::invalid_argument("empty coincidence class: " + name);
  return cls;
}

HomScan hom_scan(const CircuitSpec& circuit, const PhotonicState& input,
                 const std::vector<double>& delays,
                 const std::vector<CoincidenceClass>& classes) {
  if (delays.empty()) throw std::invalid_argument("hom_scan needs at least one delay");
  if (classes.empty()) throw std::invalid_argument("hom_scan needs at least one class");
  std::set<DetectionPattern> seen;
  for (const CoincidenceClass& cls : classes)
    for (const DetectionPattern& p : cls.patterns)
      if (!seen.insert(p).second)
        throw std::invalid_argument("coincidence classes overlap on " + pattern_name(p));

  HomScan scan;
  scan.delays = delays;
  scan.coherence_length = circuit.delay.coherence_length;

  // One measurement per delay point; each point is an independent pure
  // computation over the rebuilt circuit.
  std::vector<OutcomeDistribution> per_delay;
  per_delay.reserve(delays.size());
  for (double l : delays) {
    const CircuitSpec at = make_circuit(circuit.kind, circuit.parties,
                                        circuit.delay.at_delay(l));
    per_delay.push_back(measure(run_circuit(at, input), at));
  }
  const OutcomeDistribution at_zero = measure_at_gamma(circuit, input, 1.0);
  const OutcomeDistribution at_far = measure_at_gamma(circuit, input, 0.0);

  for (const CoincidenceClass& cls : classes) {
    HomSeries series;
    series.name = cls.name;
    series.c_zero = class_probability(at_zero, cls);
    series.c_far = class_probability(at_far, cls);
    for (const OutcomeDistribution& dist : per_delay)
      series.probabilities.push_back(class_probability(dist, cls));

    if (std::abs(series.c_zero - series.c_far) <= kFlatTolerance) {
      series.shape = FringeShape::Flat;
      series.visibility = 0.0;
    } else if (series.c_zero < series.c_far) {
      series.shape = FringeShape::Dip;
      series.visibility = (series.c_far - series.c_zero) / series.c_far;
    } else {
      series.shape = FringeShape::Peak;
      series.visibility = (series.c_zero - series.c_far) / series.c_far;
    }
    scan.series.push_back(std::move(series));
  }
  return scan;
}

std::string hom_scan_csv(const HomScan& scan) {
  std::ostringstream out;
  out << "# bellsim hom scan, schema_version=1\n";
  out << "l,class,probability\n";
  char buf[64];
  for (std::size_t i = 0; i < scan.delays.size(); ++i)
    for (const HomSeries& s : scan.series) {
      std::snprintf(buf, sizeof buf, "%.12g", scan.delays[i]);
      out << buf << "," << s.name << ",";
      std::snprintf(buf, sizeof buf, "%.12g", s.probabilities[i]);
      out << buf << "\n";
    }
  return out.str();
}

double qber(const CircuitSpec& circuit, const PhotonicState& input, double gamma) {
  // The error rate is defined for the phi-distinguishing measurement.
  const PhotonicState phi_plus =
      bell_state(Bell::PhiPlus, circuit.input_paths[0], circuit.input_paths[1]);
  const PhotonicState phi_minus =
      bell_state(Bell::PhiMinus, circuit.input_paths[0], circuit.input_paths[1]);
  BsmVerdict expected;
  if (std::abs(std::abs(inner_product(phi_plus, input)) - 1.0) < 1e-9)
    expected = BsmVerdict::PhiPlus;
  else if (std::abs(std::abs(inner_product(phi_minus, input)) - 1.0) < 1e-9)
    expected = BsmVerdict::PhiMinus;
  else
    throw std::invalid_argument("qber input must be phi+ or phi-");

  const OutcomeDistribution dist = measure_at_gamma(circuit, input, gamma);
  const Scheme scheme = scheme_of(circuit.kind);
  double correct = 0.0;
  double wrong = 0.0;
  for (const auto& [pattern, prob] : dist.entries) {
    const BsmVerdict v = classify(pattern, scheme);
    if (v != BsmVerdict::PhiPlus && v != BsmVerdict::PhiMinus) continue;
    (v == expected ? correct : wrong) += prob;
  }
  const double conclusive = correct + wrong;
  if (conclusive <= 0.0)
    throw std::invalid_argument("qber undefined: no conclusive phi verdicts");
  return wrong / conclusive;
}

double setting_probability(const DensityMatrix& rho, char setting_a, char setting_b) {
  if (rho.dimension() != 4)
    throw std::invalid_argument("tomography settings are defined for two qubits");
  const Eigen::Vector4cd ket = setting_ket(setting_a, setting_b);
  const Complex p = ket.adjoint() * rho.matrix() * ket;
  return std::clamp(p.real(), 0.0, 1.0);
}

int setting_count(const DensityMatrix& rho, int setting_index, int shots,
                  std::uint64_t master_seed) {
  if (setting_index < 0 || setting_index >= 36)
    throw std::invalid_argument("setting index must lie in [0,36)");
  const char a = kTomographyBases[setting_index / 6];
  const char b = kTomographyBases[setting_index % 6];
  const double p = setting_probability(rho, a, b);
  std::mt19937_64 rng(setting_seed(master_seed, setting_index));
  int count = 0;
  for (int s = 0; s < shots; ++s)
    if (uniform01(rng) < p) ++count;
  return count;
}

TomographyCounts simulate_tomography(const DensityMatrix& rho, int shots,
                                     std::uint64_t seed) {
  if (shots < 0) throw std::invalid_argument("shots must be >= 0");
  TomographyCounts counts;
  counts.shots = shots;
  counts.seed = seed;
  for (int index = 0; index < 36; ++index) {
    const char a = kTomographyBases[index / 6];
    const char b = kTomographyBases[index % 6];
    const double value = shots == 0
                             ? setting_probability(rho, a, b)
                             : static_cast<double>(setting_count(rho, index, shots, seed));
    counts.rows.push_back({a, b, value});
  }
  return counts;
}

std::string tomography_csv(const TomographyCounts& counts) {
  std::ostringstream out;
  out << "# bellsim tomography counts, schema_version=1\n";
  out << "setting,outcome,count\n";
  char buf[64];
  for (const TomographyRow& row : counts.rows) {
    out << row.setting_a << row.setting_b << ",1,";
    std::snprintf(buf, sizeof buf, "%.12g", row.value);
    out << buf << "\n";
    const double rest = counts.shots == 0 ? 1.0 - row.value
                                          : static_cast<double>(counts.shots) - row.value;
    out << row.setting_a << row.setting_b << ",0,";
    std::snprintf(buf, sizeof buf, "%.12g", rest);
    out << buf << "\n";
  }
  return out.str();
}

DensityMatrix reconstruct(const TomographyCounts& counts) {
  if (counts.rows.empty()) throw std::invalid_argument("empty tomography counts");

  // Frequencies per present setting.
  std::vector<Eigen::Vector4cd> kets;
  std::vector<double> freq;
  std::set<std::pair<char, char>> present;
  for (const TomographyRow& row : counts.rows) {
    kets.push_back(setting_ket(row.setting_a, row.setting_b));
    freq.push_back(counts.shots == 0 ? row.value
                                     : row.value / static_cast<double>(counts.shots));
    present.insert({row.setting_a, row.setting_b});
  }

  // rho = sum_q x_q B_q over the 16 two-qubit Pauli products; least squares
  // over tr(rho P_k) = freq_k.
  std::vector<Eigen::Matrix4cd> basis;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) basis.push_back(kron2(pauli(i), pauli(j)));

  Eigen::MatrixXd design(static_cast<Eigen::Index>(kets.size()), 16);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(kets.size()));
  for (std::size_t k = 0; k < kets.size(); ++k) {
    for (int q = 0; q < 16; ++q) {
      const Complex overlap = kets[k].adjoint() * basis[q] * kets[k];
      design(static_cast<Eigen::Index>(k), q) = overlap.real();
    }
    rhs(static_cast<Eigen::Index>(k)) = freq[k];
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 16) {
    std::string missing;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (!present.contains({kTomographyBases[i], kTomographyBases[j]})) {
          if (!missing.empty()) missing += ",";
          missing += std::string{kTomographyBases[i], kTomographyBases[j]};
        }
    throw std::invalid_argument(
        "tomography design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
        " of 16); missing settings: " + (missing.empty() ? "none" : missing));
  }
  const Eigen::VectorXd x = qr.solve(rhs);

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int q = 0; q < 16; ++q) rho += Complex{x(q), 0.0} * basis[q];

  // Physical projection: clip negative eigenvalues, renormalize the trace.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho);
  Eigen::Vector4d vals = eig.eigenvalues().cwiseMax(0.0);
  const double total = vals.sum();
  if (total <= 0.0) throw std::invalid_argument("tomography reconstruction collapsed to zero");
  vals /= total;
  Eigen::Matrix4cd projected = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k)
    projected += vals(k) * eig.eigenvectors().col(k) * eig.eigenvectors().col(k).adjoint();
  // Symmetrize away rounding before validation.
  projected = (projected + projected.adjoint()).eval() / 2.0;
  return DensityMatrix(projected);
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target) {
  if (target.size() != rho.dimension())
    throw std::invalid_argument("fidelity target dimension mismatch");
  const double n = target.norm();
  if (n <= 0.0) throw std::invalid_argument("fidelity target must be nonzero");
  const Eigen::VectorXcd unit = target / n;
  const Complex f = unit.adjoint() * rho.matrix() * unit;
  return std::clamp(f.real(), 0.0, 1.0);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dimension() != 4)
    throw std::invalid_argument("concurrence is defined for two qubits");
  // The lambdas are the descending square roots of the eigenvalues of
  // rho * (Y x Y) rho^* (Y x Y); computed as the singular values of
  // sqrt(rho) (Y x Y) sqrt(rho)^*, which conditions the near-zero ones.
  const Eigen::Matrix4cd yy = kron2(pauli(2), pauli(2));
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho.matrix());
  const Eigen::Vector4d clipped = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho = eig.eigenvectors() *
                                    clipped.cwiseSqrt().asDiagonal() *
                                    eig.eigenvectors().adjoint();
  const Eigen::Matrix4cd a = sqrt_rho * yy * sqrt_rho.conjugate();
  const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
  const Eigen::Vector4d lambda = svd.singularValues();
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("trace distance dimension mismatch");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a.matrix() - b.matrix());
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace bellsim
