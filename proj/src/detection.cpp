#include "bellsim/detection.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace bellsim {
namespace {

int pattern_total(const DetectionPattern& p) {
  int total = 0;
  for (const auto& [d, n] : p) total += n;
  return total;
}

DetectionPattern coincidence(int d1, int d2) {
  DetectionPattern p;
  p[d1] += 1;
  p[d2] += 1;
  return p;
}

}  // namespace

std::string pattern_name(const DetectionPattern& pattern) {
  bool wide = false;
  for (const auto& [d, n] : pattern)
    if (d > 9) wide = true;
  std::string name = "D";
  bool first = true;
  for (const auto& [d, n] : pattern)
    for (int k = 0; k < n; ++k) {
      if (!first && wide) name += ",D";
      name += std::to_string(d);
      first = false;
    }
  return name;
}

DetectionPattern pattern_from_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'D')
    throw std::invalid_argument("bad detection pattern name: " + name);
  DetectionPattern p;
  if (name.find(',') != std::string::npos) {
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || part[0] != 'D')
        throw std::invalid_argument("bad detection pattern name: " + name);
      p[std::stoi(part.substr(1))] += 1;
    }
    return p;
  }
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '1' || name[i] > '9')
      throw std::invalid_argument("bad detection pattern name: " + name);
    p[name[i] - '0'] += 1;
  }
  return p;
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& [p, prob] : entries) sum += prob;
  return sum;
}

double OutcomeDistribution::probability_of(const DetectionPattern& pattern) const {
  auto it = entries.find(pattern);
  return it == entries.end() ? 0.0 : it->second;
}

std::string distribution_csv(const OutcomeDistribution& dist) {
  std::ostringstream out;
  out << "# bellsim outcome distribution, schema_version=1\n";
  out << "pattern,probability\n";
  char buf[64];
  for (const auto& [pattern, prob] : dist.entries) {
    std::snprintf(buf, sizeof buf, "%.12g", prob);
    out << pattern_name(pattern) << "," << buf << "\n";
  }
  return out.str();
}

std::string distribution_json(const OutcomeDistribution& dist) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto& [pattern, prob] : dist.entries) entries[pattern_name(pattern)] = prob;
  j["outcomes"] = std::move(entries);
  return j.dump();
}

std::string verdict_name(BsmVerdict v) {
  switch (v) {
    case BsmVerdict::PhiPlus: return "phi+";
    case BsmVerdict::PhiMinus: return "phi-";
    case BsmVerdict::PsiPlus: return "psi+";
    case BsmVerdict::PsiMinus: return "psi-";
    case BsmVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

OutcomeDistribution measure(const PhotonicState& state, const CircuitSpec& spec) {
  OutcomeDistribution dist;
  for (const auto& [occ, amp] : state.terms()) {
    DetectionPattern pattern;
    for (const auto& [m, n] : occ) {
      auto it = spec.wiring.find(PortKey{m.spatial, m.pol});
      if (it == spec.wiring.end())
        throw std::invalid_argument("mode " + m.str() +
                                    " carries amplitude but is not wired to a detector");
      pattern[it->second] += n;
    }
    dist.entries[pattern] += std::norm(amp);
  }
  return dist;
}

BsmVerdict classify(const DetectionPattern& pattern, Scheme scheme) {
  if (pattern_total(pattern) != 2)
    throw std::invalid_argument("classification expects a two-photon pattern, got " +
                                pattern_name(pattern));
  if (scheme == Scheme::Symmetric) {
    if (pattern == coincidence(1, 3) || pattern == coincidence(2, 4))
      return BsmVerdict::PhiPlus;
    if (pattern == coincidence(1, 4) || pattern == coincidence(2, 3))
      return BsmVerdict::PhiMinus;
    return BsmVerdict::Inconclusive;
  }
  if (pattern == coincidence(1, 2) || pattern == coincidence(3, 4))
    return BsmVerdict::PsiPlus;
  if (pattern == coincidence(1, 4) || pattern == coincidence(2, 3))
    return BsmVerdict::PsiMinus;
  return BsmVerdict::Inconclusive;
}

HeraldResult heralded_state(const PhotonicState& state, const CircuitSpec& spec) {
  const int n = static_cast<int>(spec.output_paths.size());
  std::map<std::string, int> party_of;
  for (int i = 0; i < n; ++i) party_of[spec.output_paths[i]] = i;

  const Eigen::Index dim = Eigen::Index{1} << n;

  // Amplitude vectors keyed by the temporal-bin assignment of the output
  // photons; distinct assignments are orthogonal and traced over.
  std::map<std::vector<int>, Eigen::VectorXcd> sectors;
  for (const auto& [occ, amp] : state.terms()) {
    if (static_cast<int>(occ.size()) != n) continue;
    std::vector<int> bins(n, -1);
    int index = 0;
    bool heralded = true;
    for (const auto& [m, count] : occ) {
      auto it = party_of.find(m.spatial);
      if (it == party_of.end() || count != 1 || bins[it->second] != -1) {
        heralded = false;
        break;
      }
      bins[it->second] = m.bin;
      if (m.pol == Pol::V) index |= 1 << (n - 1 - it->second);
    }
    if (!heralded) continue;
    auto [slot, inserted] = sectors.try_emplace(bins, Eigen::VectorXcd::Zero(dim));
    slot->second(index) += amp;
  }

  double probability = 0.0;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [bins, vec] : sectors) {
    probability += vec.squaredNorm();
    rho += vec * vec.adjoint();
  }
  if (probability <= 0.0) return HeraldResult{std::nullopt, 0.0};
  rho /= probability;
  return HeraldResult{DensityMatrix(std::move(rho)), probability};
}

}  // namespace bellsim
