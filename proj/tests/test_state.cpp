#include <doctest.h>

#include <cmath>
#include <random>

#include "bellsim/elements.hpp"
#include "bellsim/states.hpp"
#include "bellsim/transfer.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace bellsim;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Occupation occ(std::initializer_list<std::pair<ModeLabel, int>> entries) {
  Occupation o;
  for (const auto& [m, n] : entries) o[m] = n;
  return o;
}

// Random unitary via QR of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = testutil::random_amplitude(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

}  // namespace

TEST_CASE("make_state builds the Bell state phi+ with unit norm") {
  double original = 0.0;
  const PhotonicState s = make_state(
      {
          {occ({{mode("a", Pol::H), 1}, {mode("b", Pol::H), 1}}), kInvSqrt2},
          {occ({{mode("a", Pol::V), 1}, {mode("b", Pol::V), 1}}), kInvSqrt2},
      },
      &original);
  CHECK(original == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.photons() == 2);
  CHECK(s.term_count() == 2);
  CHECK(std::abs(s.amplitude_of(occ({{mode("a", Pol::H), 1}, {mode("b", Pol::H), 1}})) -
                 Complex{kInvSqrt2, 0.0}) < 1e-12);
}

TEST_CASE("make_state accepts a single-photon one-term state") {
  const PhotonicState s = make_state({{occ({{mode("a", Pol::H), 1}}), 1.0}});
  CHECK(s.photons() == 1);
  CHECK(s.norm() == doctest::Approx(1.0));
}

TEST_CASE("operator-monomial input carries the sqrt(n!) convention") {
  // The two-photons-per-detector superposition characteristic of psi+ after
  // the analyzer: (g_H^2 - g_V^2 + h_H^2 - h_V^2)/(2 sqrt 2) in operator form.
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  double original = 0.0;
  const PhotonicState s = from_monomials(
      {
          {occ({{mode("g", Pol::H), 2}}), c},
          {occ({{mode("g", Pol::V), 2}}), -c},
          {occ({{mode("h", Pol::H), 2}}), c},
          {occ({{mode("h", Pol::V), 2}}), -c},
      },
      &original);

  // Independent norm: sum over monomials of |coeff|^2 * prod n! .
  const double expected_norm = std::sqrt(4.0 * c * c * 2.0);
  CHECK(expected_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(original == doctest::Approx(expected_norm).epsilon(1e-12));

  // Each two-photon amplitude is sqrt(2!) * c = 1/2, so each lands with
  // probability 1/4.
  CHECK(std::abs(s.amplitude_of(occ({{mode("g", Pol::H), 2}})) - Complex{0.5, 0.0}) < 1e-12);
  CHECK(pattern_probability(s, {{port("g", Pol::H), 2}}) == doctest::Approx(0.25));
}

TEST_CASE("make_state rejects bad input") {
  CHECK_THROWS_AS(make_state({}), std::invalid_argument);
  CHECK_THROWS_AS(make_state({{occ({{mode("a", Pol::H), 1}}), 1.0},
                              {occ({{mode("a", Pol::H), 2}}), 1.0}}),
                  std::invalid_argument);  // mixed totals
  CHECK_THROWS_AS(make_state({{occ({{mode("a", Pol::H), 0}}), 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_state({{occ({{mode("a", Pol::H), 1}}), 1.0},
                              {occ({{mode("a", Pol::H), 1}}), -1.0}}),
                  std::invalid_argument);  // cancels to zero norm
}

TEST_CASE("inner products of Bell states") {
  const PhotonicState phi_plus = bell_state(Bell::PhiPlus);
  const PhotonicState phi_minus = bell_state(Bell::PhiMinus);
  CHECK(std::abs(inner_product(phi_plus, phi_plus) - Complex{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(inner_product(phi_plus, phi_minus)) < 1e-12);
}

TEST_CASE("overlap with a delayed copy equals gamma") {
  const PhotonicState psi_minus = bell_state(Bell::PsiMinus);
  for (double gamma : {1.0, 0.6, 0.0}) {
    const TransferMap d = elements::delay(DelayModel::from_gamma(gamma), "b");
    const PhotonicState delayed = apply_transfer(psi_minus, d);
    CHECK(std::abs(inner_product(psi_minus, delayed) - Complex{gamma, 0.0}) < 1e-12);
  }
}

TEST_CASE("identity transfer map leaves amplitudes untouched") {
  const PhotonicState s = bell_state(Bell::PsiPlus);
  const TransferMap id = identity_map({mode("a", Pol::H), mode("a", Pol::V),
                                       mode("b", Pol::H), mode("b", Pol::V)});
  CHECK(testutil::deviation(apply_transfer(s, id), s) == 0.0);
}

TEST_CASE("non-isometric maps are rejected with the measured deviation") {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 0.0, 0.0, 0.5;
  try {
    TransferMap bad({mode("a", Pol::H), mode("a", Pol::V)},
                    {mode("b", Pol::H), mode("b", Pol::V)}, m);
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("0.75") != std::string::npos);
  }
}

TEST_CASE("pattern_probability checks the photon count") {
  const PhotonicState s = bell_state(Bell::PhiPlus);
  CHECK_THROWS_AS(pattern_probability(s, {{port("a", Pol::H), 1}}), std::invalid_argument);
}

TEST_CASE("pattern probabilities sum to one over the observed patterns") {
  const PhotonicState s = bell_state(Bell::PhiPlus);
  const TransferMap u = elements::bs("a", "b", "u", "v");
  const PhotonicState out = apply_transfer(s, u);
  std::set<PortPattern> patterns;
  for (const auto& [o, amp] : out.terms()) {
    PortPattern p;
    for (const auto& [m, n] : o) p[port(m.spatial, m.pol)] += n;
    patterns.insert(p);
  }
  double total = 0.0;
  for (const PortPattern& p : patterns) total += pattern_probability(out, p);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("temporal bins are summed out only when requested") {
  const PhotonicState one = make_state({{occ({{mode("b", Pol::H), 1}}), 1.0}});
  const PhotonicState delayed =
      apply_transfer(one, elements::delay(DelayModel::from_gamma(0.6), "b"));
  const PortPattern p{{port("b", Pol::H), 1}};
  CHECK(pattern_probability(delayed, p, true) == doctest::Approx(1.0));
  CHECK(pattern_probability(delayed, p, false) == doctest::Approx(0.36));
}

TEST_CASE("norm preservation under random isometries") {
  std::mt19937_64 rng(7);
  const std::vector<ModeLabel> modes{mode("a", Pol::H), mode("a", Pol::V), mode("b", Pol::H),
                                     mode("b", Pol::V)};
  for (int round = 0; round < 20; ++round) {
    const TransferMap u(modes, modes, random_unitary(4, rng));
    // Random 3-photon state over the 4 modes.
    std::vector<FockTerm> terms;
    for (int t = 0; t < 5; ++t) {
      Occupation o;
      for (int p = 0; p < 3; ++p) {
        o[modes[rng() % modes.size()]] += 1;
      }
      terms.push_back({o, testutil::random_amplitude(rng)});
    }
    const PhotonicState s = make_state(terms);
    const PhotonicState out = apply_transfer(s, u);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_transfer is linear") {
  std::mt19937_64 rng(11);
  const std::vector<ModeLabel> modes{mode("a", Pol::H), mode("a", Pol::V), mode("b", Pol::H),
                                     mode("b", Pol::V)};
  const TransferMap u(modes, modes, random_unitary(4, rng));
  const PhotonicState s1 = bell_state(Bell::PhiPlus);
  const PhotonicState s2 = bell_state(Bell::PsiMinus);
  const Complex alpha{0.3, -0.4};
  const Complex beta{-0.2, 0.9};
  const PhotonicState lhs = apply_transfer(alpha * s1 + beta * s2, u);
  const PhotonicState rhs = alpha * apply_transfer(s1, u) + beta * apply_transfer(s2, u);
  CHECK(testutil::deviation(lhs, rhs) < 1e-12);
}

TEST_CASE("compiled composition equals sequential application") {
  std::mt19937_64 rng(13);
  const std::vector<ModeLabel> ab{mode("a", Pol::H), mode("a", Pol::V), mode("b", Pol::H),
                                  mode("b", Pol::V)};
  const std::vector<ModeLabel> cd{mode("c", Pol::H), mode("c", Pol::V), mode("d", Pol::H),
                                  mode("d", Pol::V)};
  for (int round = 0; round < 10; ++round) {
    const TransferMap t1(ab, cd, random_unitary(4, rng));
    const TransferMap t2(cd, cd, random_unitary(4, rng));
    const TransferMap both = compose(t1, t2);
    const PhotonicState s = bell_state(Bell::PhiMinus);
    const PhotonicState sequential = apply_transfer(apply_transfer(s, t1), t2);
    const PhotonicState compiled = apply_transfer(s, both);
    CHECK(testutil::deviation(compiled, sequential) < 1e-12);
  }
}

TEST_CASE("bosonic evolution matches the permanent oracle") {
  std::mt19937_64 rng(17);
  const std::vector<ModeLabel> modes{mode("a", Pol::H), mode("a", Pol::V), mode("b", Pol::H),
                                     mode("b", Pol::V)};
  for (int round = 0; round < 10; ++round) {
    const TransferMap u(modes, modes, random_unitary(4, rng));
    for (int photons = 1; photons <= 4; ++photons) {
      std::vector<FockTerm> terms;
      for (int t = 0; t < 4; ++t) {
        Occupation o;
        for (int p = 0; p < photons; ++p) o[modes[rng() % modes.size()]] += 1;
        terms.push_back({o, testutil::random_amplitude(rng)});
      }
      const PhotonicState s = make_state(terms);
      const PhotonicState out = apply_transfer(s, u);

      const oracle::ModeBasis basis = oracle::basis_for({u}, s);
      const Eigen::MatrixXcd full = oracle::chain_matrix({u}, basis);
      const auto expected = oracle::evolve(full, basis, s);

      std::set<Occupation> keys;
      for (const auto& [o, amp] : out.terms()) keys.insert(o);
      for (const auto& [o, amp] : expected) keys.insert(o);
      for (const Occupation& o : keys) {
        const auto it = expected.find(o);
        const Complex want = it == expected.end() ? Complex{0.0, 0.0} : it->second;
        CHECK(std::abs(out.amplitude_of(o) - want) < 1e-10);
      }
    }
  }
}

TEST_CASE("debug JSON round trips the key facts") {
  const PhotonicState s = bell_state(Bell::PhiPlus);
  const std::string j = to_debug_json(s);
  CHECK(j.find("\"photons\":2") != std::string::npos);
  CHECK(j.find("a:H:0*1;b:H:0*1") != std::string::npos);
  CHECK(j.find("0.7071067811865476") != std::string::npos);
}
