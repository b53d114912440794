#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "homvar/euclidean.hpp"
#include "homvar/rng.hpp"
#include "homvar/torus.hpp"

using namespace homvar;
using std::numbers::pi;

namespace {

Eigen::MatrixXd random_points(int d, int N, double extent, std::uint64_t seed) {
  Eigen::MatrixXd p(d, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < d; ++i)
      p(i, j) = extent * rng::uniform(seed, 0, j, rng::slot_coord, i);
  return p;
}

// band-3 periodic integrand on [0, 2pi)
double band3(const Eigen::VectorXd& p) {
  return 1.0 + std::cos(p(0)) + 0.5 * std::sin(2.0 * p(0)) -
         0.3 * std::cos(3.0 * p(0));
}

}  // namespace

TEST_CASE("unit sphere measures") {
  CHECK(euclidean::unit_sphere_measure(1) == doctest::Approx(2.0));
  CHECK(euclidean::unit_sphere_measure(2) == doctest::Approx(2.0 * pi));
  CHECK(euclidean::unit_sphere_measure(3) == doctest::Approx(4.0 * pi));
  CHECK_THROWS_AS((void)euclidean::unit_sphere_measure(4), std::invalid_argument);
}

TEST_CASE("a single point has flat unit power on every shell") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0;
  Eigen::MatrixXd one(1, 1);
  one << 0.7;
  euclidean::RadialSpectrum s = euclidean::radial_power_points(one, w, 0.5, 6, 2);
  for (int k = 0; k <= 6; ++k)
    CHECK(s.power(k) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.shells() == 6);
  CHECK(s.shell_size(3) == doctest::Approx(2.0));  // d=1: |S^0| = 2 at any radius
}

TEST_CASE("input validation of the radial transforms") {
  euclidean::Window w;
  w.d = 1;
  w.T = 1.0;
  Eigen::MatrixXd empty(1, 0);
  CHECK_THROWS_AS((void)euclidean::radial_power_points(empty, w, 0.5, 4, 2),
                  std::invalid_argument);
  Eigen::MatrixXd wrong(2, 3);
  wrong.setZero();
  CHECK_THROWS_AS((void)euclidean::radial_power_points(wrong, w, 0.5, 4, 2),
                  std::invalid_argument);
  Eigen::MatrixXd ok(1, 3);
  ok << 0.1, 0.5, 0.9;
  CHECK_THROWS_AS((void)euclidean::radial_power_points(ok, w, 0.0, 4, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)euclidean::radial_power_points(ok, w, 0.5, 0, 2),
                  std::invalid_argument);
  euclidean::Window w2;
  w2.d = 2;
  w2.T = 1.0;
  Eigen::MatrixXd pts2 = random_points(2, 4, 1.0, 5);
  CHECK_THROWS_AS((void)euclidean::radial_power_points(pts2, w2, 0.5, 4, 4),
                  std::invalid_argument);  // d=2 needs >= 8 directions
}

TEST_CASE("window transform of the full indicator at q = pi/T") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0;
  auto one = [](const Eigen::VectorXd&) { return 1.0; };
  double dlam = pi / w.T;
  euclidean::RadialSpectrum s =
      euclidean::radial_power_function(one, w, 4096, dlam, 2, 2);
  double want = 4.0 * w.T * w.T / (pi * pi);
  CHECK(s.power(1) == doctest::Approx(want).epsilon(1e-5));
  // DC shell carries the squared window mass
  CHECK(s.power(0) == doctest::Approx(w.T * w.T).epsilon(1e-12));
}

TEST_CASE("the spectrum peaks on the shell carrying the oscillation") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0 * pi;
  auto f = [](const Eigen::VectorXd& p) { return std::cos(4.0 * p(0)); };
  euclidean::RadialSpectrum s =
      euclidean::radial_power_function(f, w, 512, 1.0, 8, 2);
  int best = 1;
  for (int k = 2; k <= 8; ++k)
    if (s.power(k) > s.power(best)) best = k;
  CHECK(best == 4);
  CHECK(s.power(4) ==
        doctest::Approx(w.T * w.T / 4.0).epsilon(1e-10));  // |T/2|^2 = pi^2
}

TEST_CASE("commensurate shells reproduce the torus prediction exactly") {
  // window = one torus period, shell spacing = 2pi/T: the shell grid hits
  // every integer frequency and the sinc tails of all others vanish there
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0 * pi;
  const int N = 8;

  euclidean::RadialSpectrum F =
      euclidean::radial_power_function(band3, w, 64, 1.0, 6, 2);
  for (auto mode :
       {euclidean::IidSpectrumMode::stationary, euclidean::IidSpectrumMode::exact_window}) {
    euclidean::RadialSpectrum E_S =
        euclidean::iid_expected_radial_power(w, N, 1.0, 6, 2, mode);
    VariancePrediction pred = euclidean::euclidean_variance_formula(F, E_S, w);

    torus::BandlimitedFunction bf = torus::function_coefficients(band3, 1, 3, 16);
    double torus_var = 0.0;
    for (const auto& [label, c] : bf.coefficients)
      if (!label.trivial()) torus_var += std::norm(c) / (N * 2.0 * pi);

    CHECK(pred.variance == doctest::Approx(torus_var).epsilon(1e-9));
    CHECK(pred.formal);
    CHECK_FALSE(pred.tail_known);
  }
}

TEST_CASE("exact-window iid spectrum: flat at commensurate shells, above elsewhere") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0 * pi;
  const int N = 8;
  // half-integer spacing: odd shells sit between window harmonics
  euclidean::RadialSpectrum s = euclidean::iid_expected_radial_power(
      w, N, 0.5, 8, 2, euclidean::IidSpectrumMode::exact_window);
  euclidean::RadialSpectrum flat = euclidean::iid_expected_radial_power(
      w, N, 0.5, 8, 2, euclidean::IidSpectrumMode::stationary);
  CHECK(s.power(0) == doctest::Approx(1.0));
  for (int k = 1; k <= 8; ++k) {
    CHECK(flat.power(k) == doctest::Approx(1.0 / N));
    if (k % 2 == 0) {
      CHECK(s.power(k) == doctest::Approx(1.0 / N).epsilon(1e-12));
    } else {
      CHECK(s.power(k) > 1.0 / N);
    }
  }
}

TEST_CASE("stationary prediction lands on 1/(2N) when shells align") {
  // f = cos p on a 4-period window: the peak sits at lambda = 1 and the
  // commensurate grid 2pi/T = 1/4 sees only exact zeros elsewhere
  euclidean::Window w;
  w.d = 1;
  w.T = 8.0 * pi;
  const int N = 8;
  auto f = [](const Eigen::VectorXd& p) { return std::cos(p(0)); };
  auto predict = [&](double dlam) {
    int K = int(std::lround(2.0 / dlam));
    euclidean::RadialSpectrum F =
        euclidean::radial_power_function(f, w, 1024, dlam, K, 2);
    euclidean::RadialSpectrum E_S = euclidean::iid_expected_radial_power(
        w, N, dlam, K, 2, euclidean::IidSpectrumMode::stationary);
    return euclidean::euclidean_variance_formula(F, E_S, w).variance;
  };
  double truth = 1.0 / (2.0 * N);
  double coarse = predict(0.5);   // skips 3 of 4 sinc zeros per period
  double fine = predict(0.25);    // spacing = 2pi/T, exact
  CHECK(std::abs(fine - truth) < 1e-9 * truth);
  CHECK(std::abs(fine - truth) < std::abs(coarse - truth));
}

TEST_CASE("constant integrands put everything into the DC product") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0 * pi;
  auto f = [](const Eigen::VectorXd&) { return 2.5; };
  euclidean::RadialSpectrum F =
      euclidean::radial_power_function(f, w, 256, 1.0, 5, 2);
  euclidean::RadialSpectrum E_S = euclidean::iid_expected_radial_power(
      w, 8, 1.0, 5, 2, euclidean::IidSpectrumMode::stationary);
  VariancePrediction pred = euclidean::euclidean_variance_formula(F, E_S, w);
  CHECK(pred.variance < 1e-20);
  // C * P_F(0) * P_S(0) = (2.5 T)^2 / ((2pi) T) * 1 -> the squared mean is 6.25
  CHECK(pred.dc_product == doctest::Approx(6.25).epsilon(1e-10));
}

TEST_CASE("cyclic shifts preserve power on commensurate shells") {
  euclidean::Window w;
  w.d = 1;
  w.T = 4.0;
  Eigen::MatrixXd p = random_points(1, 9, w.T, 31);
  Eigen::MatrixXd q = p;
  for (int j = 0; j < q.cols(); ++j)
    q(0, j) = std::fmod(q(0, j) + 1.37, w.T);
  double dlam = 2.0 * pi / w.T;
  euclidean::RadialSpectrum a = euclidean::radial_power_points(p, w, dlam, 6, 2);
  euclidean::RadialSpectrum b = euclidean::radial_power_points(q, w, dlam, 6, 2);
  for (int k = 0; k <= 6; ++k)
    CHECK(std::abs(a.power(k) - b.power(k)) < 1e-12);
}

TEST_CASE("directional quadrature converges for rotated 2d patterns") {
  euclidean::Window w;
  w.d = 2;
  w.T = 1.0;
  // centered cloud so rotations stay within a bounded radius
  Eigen::MatrixXd p = random_points(2, 12, 1.0, 77);
  p.array() -= 0.5;
  double c = std::cos(0.7), sn = std::sin(0.7);
  Eigen::Matrix2d R;
  R << c, -sn, sn, c;
  Eigen::MatrixXd q = R * p;

  auto spread = [&](int order) {
    euclidean::RadialSpectrum a =
        euclidean::radial_power_points(p, w, 8.0, 5, order);
    euclidean::RadialSpectrum b =
        euclidean::radial_power_points(q, w, 8.0, 5, order);
    double worst = 0;
    for (int k = 1; k <= 5; ++k)
      worst = std::max(worst, std::abs(a.power(k) - b.power(k)));
    return worst;
  };
  double e16 = spread(16);
  double e64 = spread(64);
  CHECK(e64 < 1e-6);
  CHECK(e64 <= e16 + 1e-15);
}

TEST_CASE("formula rejects mismatched shell grids") {
  euclidean::Window w;
  w.d = 1;
  w.T = 2.0;
  auto one = [](const Eigen::VectorXd&) { return 1.0; };
  euclidean::RadialSpectrum F =
      euclidean::radial_power_function(one, w, 64, 0.5, 4, 2);
  euclidean::RadialSpectrum E_S = euclidean::iid_expected_radial_power(
      w, 4, 0.5, 5, 2, euclidean::IidSpectrumMode::stationary);
  CHECK_THROWS_AS((void)euclidean::euclidean_variance_formula(F, E_S, w),
                  std::invalid_argument);
  euclidean::RadialSpectrum E_S2 = euclidean::iid_expected_radial_power(
      w, 4, 0.4, 4, 2, euclidean::IidSpectrumMode::stationary);
  CHECK_THROWS_AS((void)euclidean::euclidean_variance_formula(F, E_S2, w),
                  std::invalid_argument);
}
