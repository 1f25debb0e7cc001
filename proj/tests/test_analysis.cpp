#include <doctest.h>

#include <cmath>
#include <random>

#include "bellsim/analysis.hpp"
#include "test_util.hpp"

using namespace bellsim;

namespace {

CircuitSpec sym(double lc = 0.085) { return symmetric_bsm(DelayModel::from_delay(0.0, lc)); }

std::vector<double> grid(double start, double stop, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i)
    g.push_back(start + (stop - start) * i / static_cast<double>(count - 1));
  return g;
}

DensityMatrix werner(double p) {
  const Eigen::VectorXcd phi = bell_vector(Bell::PhiPlus);
  return DensityMatrix(p * (phi * phi.adjoint()) +
                       (1.0 - p) / 4.0 * Eigen::MatrixXcd::Identity(4, 4));
}

const HomSeries& series_named(const HomScan& scan, const std::string& name) {
  for (const HomSeries& s : scan.series)
    if (s.name == name) return s;
  throw std::runtime_error("no series " + name);
}

Eigen::Matrix2cd random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex{gauss(rng), gauss(rng)};
  const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("phi- scan shows the dip and the peak with unit visibility") {
  const CircuitSpec circuit = sym();
  const PhotonicState input = bell_state(Bell::PhiMinus);
  const std::vector<CoincidenceClass> classes{coincidence_class("D13+D24"),
                                              coincidence_class("D14+D23")};
  const HomScan scan = hom_scan(circuit, input, grid(-0.4, 0.4, 41), classes);

  const HomSeries& dip = series_named(scan, "D13+D24");
  CHECK(dip.shape == FringeShape::Dip);
  CHECK(dip.c_far == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(dip.c_zero == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(dip.visibility == doctest::Approx(1.0).epsilon(1e-10));

  const HomSeries& peak = series_named(scan, "D14+D23");
  CHECK(peak.shape == FringeShape::Peak);
  CHECK(peak.c_far == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(peak.c_zero == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(peak.visibility == doctest::Approx(1.0).epsilon(1e-10));

  // Curves are even in l.
  for (std::size_t i = 0; i < scan.delays.size() / 2; ++i) {
    CHECK(std::abs(dip.probabilities[i] - dip.probabilities[scan.delays.size() - 1 - i]) <
          1e-12);
    CHECK(std::abs(peak.probabilities[i] - peak.probabilities[scan.delays.size() - 1 - i]) <
          1e-12);
  }
}

TEST_CASE("psi- scan shows the bunching peak and the null class") {
  const CircuitSpec circuit = sym();
  const PhotonicState input = bell_state(Bell::PsiMinus);
  const HomScan scan = hom_scan(circuit, input, grid(-0.4, 0.4, 21),
                                {coincidence_class("D11"), coincidence_class("D24")});

  const HomSeries& d11 = series_named(scan, "D11");
  CHECK(d11.shape == FringeShape::Peak);
  CHECK(d11.c_far == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
  CHECK(d11.c_zero == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(d11.visibility == doctest::Approx(1.0).epsilon(1e-10));

  const HomSeries& d24 = series_named(scan, "D24");
  CHECK(d24.shape == FringeShape::Flat);
  for (double p : d24.probabilities) CHECK(p < 1e-12);
}

TEST_CASE("standard-scheme scan shows the classic coincidence dip") {
  // psi- through the beamsplitter: distinguishable photons split evenly, so
  // the same-port pairs D12+D34 go from 1/2 down to 0 while the cross-port
  // coincidences D14+D23 rise from 1/2 to 1.
  const CircuitSpec circuit = standard_bsm(DelayModel::from_delay(0.0, 0.085));
  const HomScan scan = hom_scan(circuit, bell_state(Bell::PsiMinus), grid(-0.3, 0.3, 13),
                                {coincidence_class("D12+D34"), coincidence_class("D14+D23")});
  const HomSeries& dip = series_named(scan, "D12+D34");
  CHECK(dip.shape == FringeShape::Dip);
  CHECK(dip.c_far == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(dip.c_zero == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(dip.visibility == doctest::Approx(1.0).epsilon(1e-10));
  const HomSeries& peak = series_named(scan, "D14+D23");
  CHECK(peak.c_far == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(peak.c_zero == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hom_scan validates its inputs") {
  const CircuitSpec circuit = sym();
  const PhotonicState input = bell_state(Bell::PhiMinus);
  CHECK_THROWS_AS(hom_scan(circuit, input, {}, {coincidence_class("D11")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hom_scan(circuit, input, {0.0},
                           {coincidence_class("D13+D24"), coincidence_class("D24")}),
                  std::invalid_argument);  // overlapping classes
}

TEST_CASE("qber endpoints and the 0.88 operating point") {
  const CircuitSpec circuit = sym();
  const PhotonicState phi_plus = bell_state(Bell::PhiPlus);
  CHECK(qber(circuit, phi_plus, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qber(circuit, phi_plus, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  const double q = qber(circuit, phi_plus, std::sqrt(0.88));
  CHECK(q == doctest::Approx((1.0 - 0.88) / 2.0).epsilon(1e-10));
  CHECK(q == doctest::Approx(0.06).epsilon(1e-9));
}

TEST_CASE("qber rejects non-phi inputs") {
  const CircuitSpec circuit = sym();
  CHECK_THROWS_AS(qber(circuit, bell_state(Bell::PsiMinus), 1.0), std::invalid_argument);
}

TEST_CASE("visibility and qber are locked by q = (1 - v)/2") {
  const CircuitSpec circuit = sym();
  const PhotonicState phi_plus = bell_state(Bell::PhiPlus);
  const CoincidenceClass wrong = coincidence_class("D14+D23");
  for (double gamma : grid(0.0, 1.0, 11)) {
    const CircuitSpec at = symmetric_bsm(DelayModel::from_gamma(gamma));
    const OutcomeDistribution dist = measure(run_circuit(at, phi_plus), at);
    double c_gamma = 0.0;
    for (const DetectionPattern& p : wrong.patterns) c_gamma += dist.probability_of(p);
    const double c_far = 0.5;
    const double visibility = (c_far - c_gamma) / c_far;  // depth reached at this overlap
    const double q = qber(circuit, phi_plus, gamma);
    CHECK(std::abs(q - (1.0 - visibility) / 2.0) < 1e-10);
  }
}

TEST_CASE("born probabilities of the canonical settings") {
  const DensityMatrix rho = DensityMatrix::from_pure(bell_vector(Bell::PhiPlus));
  CHECK(setting_probability(rho, 'H', 'H') == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(setting_probability(rho, 'D', 'A') == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(setting_probability(rho, 'D', 'D') == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(setting_probability(rho, 'R', 'R') == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(setting_probability(rho, 'R', 'L') == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact-probability reconstruction is the identity on physical states") {
  for (const DensityMatrix& rho :
       {DensityMatrix::from_pure(bell_vector(Bell::PhiPlus)),
        DensityMatrix(Eigen::MatrixXcd::Identity(4, 4) / 4.0), werner(0.63)}) {
    const TomographyCounts counts = simulate_tomography(rho, 0, 0);
    const DensityMatrix recon = reconstruct(counts);
    CHECK(trace_distance(recon, rho) < 1e-6);
  }
}

TEST_CASE("counts are deterministic and independent of evaluation order") {
  const DensityMatrix rho = werner(0.8);
  const TomographyCounts a = simulate_tomography(rho, 500, 42);
  const TomographyCounts b = simulate_tomography(rho, 500, 42);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == b.rows[i].value);

  // Per-setting sub-streams: evaluating settings in reverse matches the
  // batch simulation bit for bit.
  for (int index = 35; index >= 0; --index)
    CHECK(static_cast<double>(setting_count(rho, index, 500, 42)) ==
          a.rows[static_cast<std::size_t>(index)].value);

  const TomographyCounts c = simulate_tomography(rho, 500, 43);
  bool any_different = false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].value != c.rows[i].value) any_different = true;
  CHECK(any_different);
}

TEST_CASE("sampled reconstruction recovers the heralded phi+ across seeds") {
  const CircuitSpec circuit = sym();
  const HeraldResult herald =
      heralded_state(run_prep(circuit, product_state("DD", circuit.input_paths)), circuit);
  REQUIRE(herald.state.has_value());
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DensityMatrix recon = reconstruct(simulate_tomography(*herald.state, 1000, seed));
    CHECK((recon.matrix() - recon.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(recon.min_eigenvalue() > -1e-10);
    if (fidelity(recon, bell_vector(Bell::PhiPlus)) >= 0.95) ++good;
  }
  CHECK(good >= 9);
}

TEST_CASE("reconstruction rejects an informationally incomplete table") {
  const DensityMatrix rho = DensityMatrix::from_pure(bell_vector(Bell::PhiPlus));
  TomographyCounts counts = simulate_tomography(rho, 0, 0);
  // Keep only the H/V settings: no phase information at all.
  std::erase_if(counts.rows, [](const TomographyRow& row) {
    return !((row.setting_a == 'H' || row.setting_a == 'V') &&
             (row.setting_b == 'H' || row.setting_b == 'V'));
  });
  CHECK_THROWS_WITH_AS(reconstruct(counts), doctest::Contains("missing settings"),
                       std::invalid_argument);
}

TEST_CASE("fidelity basics") {
  const DensityMatrix phi = DensityMatrix::from_pure(bell_vector(Bell::PhiPlus));
  CHECK(fidelity(phi, bell_vector(Bell::PhiPlus)) == doctest::Approx(1.0).epsilon(1e-12));
  const DensityMatrix mixed(Eigen::MatrixXcd::Identity(4, 4) / 4.0);
  for (Bell b : {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus})
    CHECK(fidelity(mixed, bell_vector(b)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("heralded fidelity follows (1 + gamma^2)/2") {
  for (double g2 : {0.88, 0.5, 0.2}) {
    const CircuitSpec circuit = symmetric_bsm(DelayModel::from_gamma(std::sqrt(g2)));
    const HeraldResult herald =
        heralded_state(run_prep(circuit, product_state("DD", circuit.input_paths)), circuit);
    REQUIRE(herald.state.has_value());
    CHECK(fidelity(*herald.state, bell_vector(Bell::PhiPlus)) ==
          doctest::Approx((1.0 + g2) / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("concurrence of the canonical states") {
  for (Bell b : {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus})
    CHECK(concurrence(DensityMatrix::from_pure(bell_vector(b))) ==
          doctest::Approx(1.0).epsilon(1e-10));
  CHECK(concurrence(DensityMatrix(Eigen::MatrixXcd::Identity(4, 4) / 4.0)) ==
        doctest::Approx(0.0).epsilon(1e-10));
  // Werner state closed form max(0, (3p-1)/2).
  CHECK(concurrence(werner(0.8)) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(concurrence(werner(0.2)) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("concurrence is invariant under local unitaries") {
  std::mt19937_64 rng(31);
  const DensityMatrix base = DensityMatrix::from_pure(bell_vector(Bell::PsiMinus));
  for (int round = 0; round < 20; ++round) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    const Eigen::Matrix2cd ua = random_su2(rng);
    const Eigen::Matrix2cd ub = random_su2(rng);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) u.block<2, 2>(2 * r, 2 * c) = ua(r, c) * ub;
    const DensityMatrix rotated(u * base.matrix() * u.adjoint());
    CHECK(std::abs(concurrence(rotated) - 1.0) < 1e-8);
  }
}

TEST_CASE("fidelity and concurrence decay monotonically with the overlap") {
  double previous_f = -1.0;
  double previous_c = -1.0;
  for (double gamma : grid(0.0, 1.0, 10)) {
    const CircuitSpec circuit = symmetric_bsm(DelayModel::from_gamma(gamma));
    const HeraldResult herald =
        heralded_state(run_prep(circuit, product_state("DD", circuit.input_paths)), circuit);
    REQUIRE(herald.state.has_value());
    const double f = fidelity(*herald.state, bell_vector(Bell::PhiPlus));
    const double c = concurrence(*herald.state);
    CHECK(f >= previous_f - 1e-12);
    CHECK(c >= previous_c - 1e-12);
    previous_f = f;
    previous_c = c;
  }
}

TEST_CASE("trace distance sanity") {
  const DensityMatrix a = DensityMatrix::from_pure(bell_vector(Bell::PhiPlus));
  const DensityMatrix b = DensityMatrix::from_pure(bell_vector(Bell::PhiMinus));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scan csv layout") {
  const CircuitSpec circuit = sym();
  const HomScan scan = hom_scan(circuit, bell_state(Bell::PhiMinus), {-0.1, 0.0, 0.1},
                                {coincidence_class("D13+D24")});
  const std::string csv = hom_scan_csv(scan);
  CHECK(csv.find("l,class,probability") != std::string::npos);
  CHECK(csv.find("0,D13+D24,") != std::string::npos);
}
