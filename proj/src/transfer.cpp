#include "bellsim/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bellsim {
namespace {

// Coefficients this small in a column image are structural zeros.
constexpr double kCoeffEpsilon = 1e-15;

void check_distinct(const std::vector<ModeLabel>& modes, const char* which) {
  std::set<ModeLabel> seen;
  for (const ModeLabel& m : modes)
    if (!seen.insert(m).second)
      throw std::invalid_argument(std::string("duplicate ") + which + " mode " + m.str());
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

using SparseImage = std::map<ModeLabel, Complex>;

// Expansion of (sum_j u_j b_j^dag)^n as occupation -> coefficient, including
// the multinomial factors.
void expand_power(const std::vector<std::pair<ModeLabel, Complex>>& column,
                  std::size_t index, int remaining, double multinomial_acc,
                  Complex coeff_acc, Occupation& occ_acc,
                  std::vector<std::pair<Occupation, Complex>>& out) {
  if (remaining == 0) {
    out.emplace_back(occ_acc, coeff_acc * multinomial_acc);
    return;
  }
  if (index == column.size()) return;
  const auto& [label, u] = column[index];
  // Last entry must absorb everything that is left.
  const int max_here = remaining;
  const int min_here = (index + 1 == column.size()) ? remaining : 0;
  for (int k = min_here; k <= max_here; ++k) {
    Complex c = coeff_acc;
    for (int t = 0; t < k; ++t) c *= u;
    if (k > 0) occ_acc[label] += k;
    expand_power(column, index + 1, remaining - k, multinomial_acc / factorial(k), c,
                 occ_acc, out);
    if (k > 0) {
      occ_acc[label] -= k;
      if (occ_acc[label] == 0) occ_acc.erase(label);
    }
  }
}

std::vector<std::pair<Occupation, Complex>> column_power(const TransferMap& map, int col,
                                                         int n) {
  std::vector<std::pair<ModeLabel, Complex>> column;
  for (Eigen::Index row = 0; row < map.matrix().rows(); ++row) {
    const Complex u = map.matrix()(row, col);
    if (std::abs(u) > kCoeffEpsilon) column.emplace_back(map.modes_out()[row], u);
  }
  std::vector<std::pair<Occupation, Complex>> out;
  if (column.empty()) return out;  // annihilating column cannot occur for an isometry
  Occupation occ;
  expand_power(column, 0, n, factorial(n), Complex{1.0, 0.0}, occ, out);
  return out;
}

}  // namespace

TransferMap::TransferMap(std::vector<ModeLabel> modes_in, std::vector<ModeLabel> modes_out,
                         Eigen::MatrixXcd matrix)
    : modes_in_(std::move(modes_in)), modes_out_(std::move(modes_out)),
      matrix_(std::move(matrix)) {
  if (matrix_.rows() != static_cast<Eigen::Index>(modes_out_.size()) ||
      matrix_.cols() != static_cast<Eigen::Index>(modes_in_.size()))
    throw std::invalid_argument("transfer matrix shape does not match mode lists");
  if (modes_in_.empty())
    throw std::invalid_argument("transfer map without input modes (use the default "
                                "constructor for the empty identity)");
  check_distinct(modes_in_, "input");
  check_distinct(modes_out_, "output");
  const double dev = isometry_deviation();
  if (dev > kIsometryTolerance) {
    std::ostringstream msg;
    msg << "transfer map is not an isometry: |U^dag U - I| deviates by " << dev;
    throw std::invalid_argument(msg.str());
  }
}

double TransferMap::isometry_deviation() const {
  if (modes_in_.empty()) return 0.0;
  const Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  return (gram - id).cwiseAbs().maxCoeff();
}

int TransferMap::input_index(const ModeLabel& m) const {
  for (std::size_t i = 0; i < modes_in_.size(); ++i)
    if (modes_in_[i] == m) return static_cast<int>(i);
  return -1;
}

PhotonicState apply_transfer(const PhotonicState& state, const TransferMap& map) {
  PhotonicState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    // Convert to the operator-monomial coefficient, substitute, convert back.
    Complex base = amp / sqrt_factorial_weight(occ);

    Occupation passthrough;
    std::vector<std::pair<int, int>> mapped;  // (column, count)
    for (const auto& [m, n] : occ) {
      const int col = map.input_index(m);
      if (col < 0)
        passthrough[m] += n;
      else
        mapped.emplace_back(col, n);
    }

    std::vector<std::pair<Occupation, Complex>> partial{{passthrough, base}};
    for (const auto& [col, n] : mapped) {
      const auto images = column_power(map, col, n);
      std::vector<std::pair<Occupation, Complex>> next;
      next.reserve(partial.size() * images.size());
      for (const auto& [o1, c1] : partial) {
        for (const auto& [o2, c2] : images) {
          Occupation merged = o1;
          for (const auto& [m, k] : o2) merged[m] += k;
          next.emplace_back(std::move(merged), c1 * c2);
        }
      }
      partial = std::move(next);
    }

    for (const auto& [o, c] : partial) out[o] += c * sqrt_factorial_weight(o);
  }
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) <= kMergeTolerance; });
  return PhotonicState(std::move(out), state.photons());
}

TransferMap compose(const TransferMap& first, const TransferMap& second) {
  const std::set<ModeLabel> first_in(first.modes_in().begin(), first.modes_in().end());
  const std::set<ModeLabel> first_out(first.modes_out().begin(), first.modes_out().end());
  const std::set<ModeLabel> second_in(second.modes_in().begin(), second.modes_in().end());

  std::vector<ModeLabel> inputs = first.modes_in();
  for (const ModeLabel& m : second.modes_in())
    if (!first_in.contains(m) && !first_out.contains(m)) inputs.push_back(m);

  auto image_of = [](const TransferMap& t, const ModeLabel& m) {
    SparseImage img;
    const int col = t.input_index(m);
    if (col < 0) {
      img[m] = Complex{1.0, 0.0};
      return img;
    }
    for (Eigen::Index row = 0; row < t.matrix().rows(); ++row) {
      const Complex u = t.matrix()(row, col);
      if (std::abs(u) > kCoeffEpsilon) img[t.modes_out()[row]] = u;
    }
    return img;
  };

  std::vector<SparseImage> columns;
  columns.reserve(inputs.size());
  std::set<ModeLabel> outputs_seen;
  for (const ModeLabel& m : inputs) {
    SparseImage through;
    for (const auto& [mid, c1] : image_of(first, m))
      for (const auto& [fin, c2] : image_of(second, mid)) through[fin] += c1 * c2;
    std::erase_if(through, [](const auto& kv) { return std::abs(kv.second) <= kCoeffEpsilon; });
    for (const auto& [fin, c] : through) outputs_seen.insert(fin);
    columns.push_back(std::move(through));
  }

  // Keep declared output rows even when a column coefficient happens to be 0
  // (e.g. the unpopulated delay bin at gamma = 1).
  for (const ModeLabel& m : second.modes_out()) outputs_seen.insert(m);
  for (const ModeLabel& m : first.modes_out())
    if (!second_in.contains(m)) outputs_seen.insert(m);

  const std::vector<ModeLabel> outputs(outputs_seen.begin(), outputs_seen.end());
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(outputs.size()), static_cast<Eigen::Index>(inputs.size()));
  std::map<ModeLabel, Eigen::Index> row_of;
  for (std::size_t r = 0; r < outputs.size(); ++r)
    row_of[outputs[r]] = static_cast<Eigen::Index>(r);
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (const auto& [fin, u] : columns[c]) matrix(row_of.at(fin), static_cast<Eigen::Index>(c)) = u;

  return TransferMap(std::move(inputs), outputs, std::move(matrix));
}

TransferMap compose(std::span<const TransferMap> chain) {
  if (chain.empty()) throw std::invalid_argument("cannot compose an empty chain");
  TransferMap acc = chain[0];
  for (std::size_t i = 1; i < chain.size(); ++i) acc = compose(acc, chain[i]);
  return acc;
}

TransferMap identity_map(const std::vector<ModeLabel>& modes) {
  return TransferMap(modes, modes,
                     Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(modes.size()),
                                                static_cast<Eigen::Index>(modes.size())));
}

}  // namespace bellsim
