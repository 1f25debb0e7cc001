#include "bellsim/state.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace bellsim {
namespace {

int occupation_total(const Occupation& occ) {
  int total = 0;
  for (const auto& [m, n] : occ) total += n;
  return total;
}

void check_counts(const Occupation& occ) {
  for (const auto& [m, n] : occ) {
    if (n <= 0)
      throw std::invalid_argument("occupation count for " + m.str() +
                                  " must be positive, got " + std::to_string(n));
  }
}

std::string occupation_key(const Occupation& occ) {
  std::string key;
  for (const auto& [m, n] : occ) {
    if (!key.empty()) key += ';';
    key += m.str() + "*" + std::to_string(n);
  }
  return key;
}

}  // namespace

PhotonicState::PhotonicState(TermMap terms, int photons)
    : terms_(std::move(terms)), photons_(photons) {}

double PhotonicState::norm() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return std::sqrt(sum);
}

PhotonicState PhotonicState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  TermMap scaled = terms_;
  for (auto& [occ, amp] : scaled) amp /= n;
  return PhotonicState(std::move(scaled), photons_);
}

Complex PhotonicState::amplitude_of(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

PhotonicState operator*(Complex scale, const PhotonicState& s) {
  PhotonicState::TermMap terms = s.terms_;
  for (auto& [occ, amp] : terms) amp *= scale;
  return PhotonicState(std::move(terms), s.photons_);
}

PhotonicState operator+(const PhotonicState& a, const PhotonicState& b) {
  if (!a.terms_.empty() && !b.terms_.empty() && a.photons_ != b.photons_)
    throw std::invalid_argument("cannot add states with different photon numbers");
  PhotonicState::TermMap terms = a.terms_;
  for (const auto& [occ, amp] : b.terms_) terms[occ] += amp;
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) <= kMergeTolerance; });
  return PhotonicState(std::move(terms), a.terms_.empty() ? b.photons_ : a.photons_);
}

PhotonicState operator-(const PhotonicState& a, const PhotonicState& b) {
  return a + (Complex{-1.0, 0.0} * b);
}

double sqrt_factorial_weight(const Occupation& occ) {
  double w = 1.0;
  for (const auto& [m, n] : occ)
    for (int k = 2; k <= n; ++k) w *= static_cast<double>(k);
  return std::sqrt(w);
}

PhotonicState make_state(const std::vector<FockTerm>& terms, double* original_norm) {
  if (terms.empty()) throw std::invalid_argument("make_state: no terms given");

  PhotonicState::TermMap merged;
  int photons = -1;
  for (const FockTerm& t : terms) {
    check_counts(t.occupation);
    if (t.occupation.empty())
      throw std::invalid_argument("make_state: empty occupation (vacuum term)");
    const int total = occupation_total(t.occupation);
    if (photons < 0) photons = total;
    if (total != photons)
      throw std::invalid_argument("make_state: mixed total photon numbers (" +
                                  std::to_string(photons) + " vs " + std::to_string(total) + ")");
    merged[t.occupation] += t.amplitude;
  }
  std::erase_if(merged, [](const auto& kv) { return std::abs(kv.second) <= kMergeTolerance; });

  PhotonicState raw(std::move(merged), photons);
  const double n = raw.norm();
  if (n <= kMergeTolerance) throw std::invalid_argument("make_state: zero-norm input");
  if (original_norm) *original_norm = n;
  return raw.normalized();
}

PhotonicState from_monomials(const std::vector<FockTerm>& monomials, double* original_norm) {
  std::vector<FockTerm> converted;
  converted.reserve(monomials.size());
  for (const FockTerm& t : monomials)
    converted.push_back({t.occupation, t.amplitude * sqrt_factorial_weight(t.occupation)});
  return make_state(converted, original_norm);
}

Complex inner_product(const PhotonicState& a, const PhotonicState& b) {
  if (a.photons() != b.photons()) return {0.0, 0.0};
  Complex sum{0.0, 0.0};
  if (a.term_count() <= b.term_count()) {
    for (const auto& [occ, amp] : a.terms()) sum += std::conj(amp) * b.amplitude_of(occ);
  } else {
    for (const auto& [occ, amp] : b.terms()) sum += std::conj(a.amplitude_of(occ)) * amp;
  }
  return sum;
}

double pattern_probability(const PhotonicState& state, const PortPattern& pattern,
                           bool trace_out_temporal) {
  int pattern_total = 0;
  for (const auto& [p, n] : pattern) {
    if (n <= 0)
      throw std::invalid_argument("pattern count for " + p.str() + " must be positive");
    pattern_total += n;
  }
  if (pattern_total != state.photons())
    throw std::invalid_argument("pattern photon count " + std::to_string(pattern_total) +
                                " does not match state photon count " +
                                std::to_string(state.photons()));

  double prob = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    PortPattern reduced;
    bool skip = false;
    for (const auto& [m, n] : occ) {
      if (!trace_out_temporal && m.bin != 0) {
        skip = true;
        break;
      }
      reduced[PortKey{m.spatial, m.pol}] += n;
    }
    if (!skip && reduced == pattern) prob += std::norm(amp);
  }
  return prob;
}

std::string to_debug_json(const PhotonicState& state) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["photons"] = state.photons();
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const auto& [occ, amp] : state.terms())
    terms[occupation_key(occ)] = {amp.real(), amp.imag()};
  j["terms"] = std::move(terms);
  return j.dump();
}

}  // namespace bellsim
