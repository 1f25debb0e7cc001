#include "bellsim/states.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Occupation one_per_path(const std::vector<std::string>& paths, const std::vector<Pol>& pols) {
  Occupation occ;
  for (std::size_t i = 0; i < paths.size(); ++i) occ[mode(paths[i], pols[i])] += 1;
  return occ;
}

}  // namespace

std::string bell_name(Bell b) {
  switch (b) {
    case Bell::PhiPlus: return "phi+";
    case Bell::PhiMinus: return "phi-";
    case Bell::PsiPlus: return "psi+";
    case Bell::PsiMinus: return "psi-";
  }
  return "?";
}

Bell bell_from_name(const std::string& name) {
  if (name == "phi+") return Bell::PhiPlus;
  if (name == "phi-") return Bell::PhiMinus;
  if (name == "psi+") return Bell::PsiPlus;
  if (name == "psi-") return Bell::PsiMinus;
  throw std::invalid_argument("unknown Bell state name: " + name);
}

PhotonicState bell_state(Bell which, const std::string& path_a, const std::string& path_b) {
  const double sign = (which == Bell::PhiMinus || which == Bell::PsiMinus) ? -1.0 : 1.0;
  const bool phi = which == Bell::PhiPlus || which == Bell::PhiMinus;
  std::vector<FockTerm> terms;
  if (phi) {
    terms.push_back({one_per_path({path_a, path_b}, {Pol::H, Pol::H}), kInvSqrt2});
    terms.push_back({one_per_path({path_a, path_b}, {Pol::V, Pol::V}), sign * kInvSqrt2});
  } else {
    terms.push_back({one_per_path({path_a, path_b}, {Pol::H, Pol::V}), kInvSqrt2});
    terms.push_back({one_per_path({path_a, path_b}, {Pol::V, Pol::H}), sign * kInvSqrt2});
  }
  return make_state(terms);
}

Eigen::Vector2cd pol_ket(char c) {
  const Complex i{0.0, 1.0};
  switch (c) {
    case 'H': case 'h': return {1.0, 0.0};
    case 'V': case 'v': return {0.0, 1.0};
    case 'D': case 'd': return {kInvSqrt2, kInvSqrt2};
    case 'A': case 'a': return {kInvSqrt2, -kInvSqrt2};
    case 'R': case 'r': return {kInvSqrt2, i * kInvSqrt2};
    case 'L': case 'l': return {kInvSqrt2, -i * kInvSqrt2};
  }
  throw std::invalid_argument(std::string("unknown polarization '") + c +
                              "' (expected one of HVDARL)");
}

PhotonicState product_state(const std::string& pols, const std::vector<std::string>& paths) {
  if (pols.size() != paths.size())
    throw std::invalid_argument("product state needs one polarization per path (" +
                                std::to_string(paths.size()) + " paths, got \"" + pols + "\")");
  // Expand the product of (alpha H + beta V) factors.
  std::vector<FockTerm> terms{{Occupation{}, Complex{1.0, 0.0}}};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Eigen::Vector2cd ket = pol_ket(pols[i]);
    std::vector<FockTerm> next;
    for (const FockTerm& t : terms)
      for (int p = 0; p < 2; ++p) {
        if (std::abs(ket(p)) == 0.0) continue;
        Occupation occ = t.occupation;
        occ[mode(paths[i], p == 0 ? Pol::H : Pol::V)] += 1;
        next.push_back({std::move(occ), t.amplitude * ket(p)});
      }
    terms = std::move(next);
  }
  return make_state(terms);
}

PhotonicState ghz_state(int parties, bool plus, const std::vector<std::string>& paths) {
  if (parties < 2) throw std::invalid_argument("GHZ state needs at least 2 parties");
  if (static_cast<int>(paths.size()) != parties)
    throw std::invalid_argument("GHZ state needs one path per party");
  std::vector<FockTerm> terms;
  terms.push_back({one_per_path(paths, std::vector<Pol>(parties, Pol::H)), kInvSqrt2});
  terms.push_back(
      {one_per_path(paths, std::vector<Pol>(parties, Pol::V)), (plus ? 1.0 : -1.0) * kInvSqrt2});
  return make_state(terms);
}

Eigen::VectorXcd bell_vector(Bell which) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  switch (which) {
    case Bell::PhiPlus: v(0) = kInvSqrt2; v(3) = kInvSqrt2; break;
    case Bell::PhiMinus: v(0) = kInvSqrt2; v(3) = -kInvSqrt2; break;
    case Bell::PsiPlus: v(1) = kInvSqrt2; v(2) = kInvSqrt2; break;
    case Bell::PsiMinus: v(1) = kInvSqrt2; v(2) = -kInvSqrt2; break;
  }
  return v;
}

Eigen::VectorXcd ghz_vector(int parties, bool plus) {
  if (parties < 2) throw std::invalid_argument("GHZ vector needs at least 2 parties");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << parties);
  v(0) = kInvSqrt2;
  v(v.size() - 1) = (plus ? 1.0 : -1.0) * kInvSqrt2;
  return v;
}

PhotonicState named_state(const std::string& name, const std::vector<std::string>& paths) {
  const int n = static_cast<int>(paths.size());
  if (name == "ghz+" || name == "ghz-") {
    if (n == 2)  // GHZ with two parties is phi+-; accept either spelling
      return bell_state(name == "ghz+" ? Bell::PhiPlus : Bell::PhiMinus, paths[0], paths[1]);
    return ghz_state(n, name == "ghz+", paths);
  }
  if (name == "phi+" || name == "phi-" || name == "psi+" || name == "psi-") {
    if (n != 2)
      throw std::invalid_argument("Bell input " + name + " needs a two-party circuit");
    return bell_state(bell_from_name(name), paths[0], paths[1]);
  }
  return product_state(name, paths);
}

}  // namespace bellsim
