#include "bellsim/elements.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace bellsim {

DelayModel DelayModel::from_delay(double l, double coherence_length) {
  if (!(coherence_length > 0.0))
    throw std::invalid_argument("coherence length must be positive");
  return DelayModel{l, coherence_length, std::nullopt};
}

DelayModel DelayModel::from_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("overlap gamma must lie in [0,1], got " +
                                std::to_string(gamma));
  DelayModel m;
  m.gamma_override = gamma;
  return m;
}

double DelayModel::gamma() const {
  if (gamma_override) return *gamma_override;
  const double x = l / coherence_length;
  return std::exp(-0.5 * x * x);
}

DelayModel DelayModel::at_delay(double new_l) const {
  return DelayModel{new_l, coherence_length, std::nullopt};
}

namespace elements {
namespace {

const Complex kI{0.0, 1.0};

void check_labels(std::initializer_list<std::string> labels) {
  std::set<std::string> seen;
  for (const std::string& s : labels) {
    if (s.empty()) throw std::invalid_argument("empty spatial label");
    if (!seen.insert(s).second)
      throw std::invalid_argument("spatial label collision: " + s);
  }
}

// Assembles a map acting identically on every requested temporal bin. The
// per-bin action is given as entries (out_slot, in_slot, coeff) over the
// slot lists below.
TransferMap per_bin_map(const std::vector<ModeLabel>& in_slots,
                        const std::vector<ModeLabel>& out_slots,
                        const std::vector<std::tuple<int, int, Complex>>& entries,
                        const std::vector<int>& bins) {
  if (bins.empty()) throw std::invalid_argument("element needs at least one temporal bin");
  std::vector<ModeLabel> modes_in;
  std::vector<ModeLabel> modes_out;
  for (int bin : bins) {
    for (ModeLabel m : in_slots) {
      m.bin = bin;
      modes_in.push_back(std::move(m));
    }
    for (ModeLabel m : out_slots) {
      m.bin = bin;
      modes_out.push_back(std::move(m));
    }
  }
  const auto n_in = static_cast<Eigen::Index>(in_slots.size());
  const auto n_out = static_cast<Eigen::Index>(out_slots.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(
      n_out * static_cast<Eigen::Index>(bins.size()),
      n_in * static_cast<Eigen::Index>(bins.size()));
  for (std::size_t b = 0; b < bins.size(); ++b)
    for (const auto& [row, col, coeff] : entries)
      u(static_cast<Eigen::Index>(b) * n_out + row,
        static_cast<Eigen::Index>(b) * n_in + col) = coeff;
  return TransferMap(std::move(modes_in), std::move(modes_out), std::move(u));
}

}  // namespace

TransferMap pbs(const std::string& in1, const std::string& in2, const std::string& out1,
                const std::string& out2, const std::vector<int>& bins) {
  check_labels({in1, in2, out1, out2});
  const std::vector<ModeLabel> in_slots{mode(in1, Pol::H), mode(in1, Pol::V),
                                        mode(in2, Pol::H), mode(in2, Pol::V)};
  const std::vector<ModeLabel> out_slots{mode(out1, Pol::H), mode(out1, Pol::V),
                                         mode(out2, Pol::H), mode(out2, Pol::V)};
  // H transmits (in1->out1, in2->out2), V reflects with phase i (in1->out2,
  // in2->out1).
  const std::vector<std::tuple<int, int, Complex>> entries{
      {0, 0, 1.0},  // in1 H -> out1 H
      {3, 1, kI},   // in1 V -> i out2 V
      {2, 2, 1.0},  // in2 H -> out2 H
      {1, 3, kI},   // in2 V -> i out1 V
  };
  return per_bin_map(in_slots, out_slots, entries, bins);
}

TransferMap hwp(double theta_deg, const std::string& path, const std::vector<int>& bins) {
  check_labels({path});
  const double t = 2.0 * theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t);
  const double s = std::sin(t);
  const std::vector<ModeLabel> slots{mode(path, Pol::H), mode(path, Pol::V)};
  const std::vector<std::tuple<int, int, Complex>> entries{
      {0, 0, c}, {1, 0, s},   // H -> c H + s V
      {0, 1, s}, {1, 1, -c},  // V -> s H - c V
  };
  return per_bin_map(slots, slots, entries, bins);
}

TransferMap bs(const std::string& in1, const std::string& in2, const std::string& out1,
               const std::string& out2, const std::vector<int>& bins) {
  check_labels({in1, in2, out1, out2});
  const double r = 1.0 / std::sqrt(2.0);
  const Complex ir = kI * r;
  const std::vector<ModeLabel> in_slots{mode(in1, Pol::H), mode(in1, Pol::V),
                                        mode(in2, Pol::H), mode(in2, Pol::V)};
  const std::vector<ModeLabel> out_slots{mode(out1, Pol::H), mode(out1, Pol::V),
                                         mode(out2, Pol::H), mode(out2, Pol::V)};
  const std::vector<std::tuple<int, int, Complex>> entries{
      {0, 0, r}, {2, 0, ir},  // in1 H -> (out1 + i out2) H / sqrt2
      {1, 1, r}, {3, 1, ir},
      {2, 2, r}, {0, 2, ir},  // in2 H -> (out2 + i out1) H / sqrt2
      {3, 3, r}, {1, 3, ir},
  };
  return per_bin_map(in_slots, out_slots, entries, bins);
}

TransferMap circulator_exchange(const std::string& path_a, const std::string& path_b,
                                const std::vector<int>& bins) {
  check_labels({path_a, path_b});
  const std::vector<ModeLabel> slots{mode(path_a, Pol::H), mode(path_a, Pol::V),
                                     mode(path_b, Pol::H), mode(path_b, Pol::V)};
  const std::vector<std::tuple<int, int, Complex>> entries{
      {2, 0, 1.0}, {3, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0},
  };
  return per_bin_map(slots, slots, entries, bins);
}

TransferMap delay(const DelayModel& model, const std::string& path) {
  check_labels({path});
  const double g = model.gamma();
  if (!(g >= 0.0 && g <= 1.0))
    throw std::invalid_argument("overlap gamma must lie in [0,1], got " + std::to_string(g));
  const double leak = std::sqrt(std::max(0.0, 1.0 - g * g));
  const std::vector<ModeLabel> modes_in{mode(path, Pol::H, 0), mode(path, Pol::V, 0)};
  const std::vector<ModeLabel> modes_out{mode(path, Pol::H, 0), mode(path, Pol::H, 1),
                                         mode(path, Pol::V, 0), mode(path, Pol::V, 1)};
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 2);
  u(0, 0) = g;
  u(1, 0) = leak;
  u(2, 1) = g;
  u(3, 1) = leak;
  return TransferMap(modes_in, modes_out, std::move(u));
}

}  // namespace elements
}  // namespace bellsim
