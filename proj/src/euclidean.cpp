#include "homvar/euclidean.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homvar::euclidean {

using std::numbers::pi;

double unit_sphere_measure(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
  }
  throw std::invalid_argument("unit_sphere_measure: d must be 1..3");
}

double RadialSpectrum::shell_size(int k) const {
  double lam = radii(k);
  return std::pow(lam, d - 1) * unit_sphere_measure(d);
}

std::vector<Eigen::VectorXd> direction_set(int d, int order) {
  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  if (d == 2) {
    if (order < 8) throw std::invalid_argument("direction_set: d=2 needs order >= 8");
    for (int j = 0; j < order; ++j) {
      double a = 2.0 * pi * j / order;
      Eigen::VectorXd v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (d == 3) {
    if (order < 26) throw std::invalid_argument("direction_set: d=3 needs order >= 26");
    // spiral points plus their antipodes: evenly spread and symmetric
    int half = (order + 1) / 2;
    double golden = pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < half; ++j) {
      double z = 1.0 - (2.0 * j + 1.0) / half;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = golden * j;
      Eigen::VectorXd v(3);
      v << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(v);
      dirs.push_back(-v);
    }
    return dirs;
  }
  throw std::invalid_argument("direction_set: d must be 1..3");
}

Truncation make_truncation(int d, double dlam, int shells, int directions) {
  Truncation t;
  t.domain = Domain::euclidean_shell;
  t.shell_spacing = dlam;
  t.shell_count = shells;
  t.directions = directions;
  (void)d;
  return t;
}

namespace {

RadialSpectrum make_grid(int d, double dlam, int shells, int directions) {
  if (shells < 1) throw std::invalid_argument("radial spectrum: need K >= 1");
  if (dlam <= 0.0) throw std::invalid_argument("radial spectrum: zero shell spacing");
  RadialSpectrum s;
  s.d = d;
  s.dlam = dlam;
  s.directions = directions;
  s.radii = dlam * Eigen::VectorXd::LinSpaced(shells + 1, 0.0, double(shells));
  s.power = Eigen::VectorXd::Zero(shells + 1);
  s.se = Eigen::VectorXd::Zero(shells + 1);
  return s;
}

}  // namespace

RadialSpectrum radial_power_points(const Eigen::MatrixXd& points,
                                   const Window& window, double dlam,
                                   int shells, int directions) {
  const int d = window.d;
  const int N = int(points.cols());
  if (points.rows() != d) throw std::invalid_argument("radial_power_points: dim");
  if (N < 1) throw std::invalid_argument("radial_power_points: empty input");
  auto dirs = direction_set(d, directions);
  RadialSpectrum out = make_grid(d, dlam, shells, int(dirs.size()));

  // shell 0: |S_hat(0)|^2 = 1 by construction of the delta average
  out.power(0) = 1.0;
  for (int k = 1; k <= shells; ++k) {
    double lam = out.radii(k);
    double acc = 0.0;
    for (const auto& w : dirs) {
      Eigen::VectorXd q = lam * w;
      double re = 0.0, im = 0.0;
      for (int j = 0; j < N; ++j) {
        double phase = q.dot(points.col(j));
        re += std::cos(phase);
        im -= std::sin(phase);
      }
      acc += (re * re + im * im) / (double(N) * N);
    }
    out.power(k) = acc / double(dirs.size());
  }
  return out;
}

RadialSpectrum radial_power_function(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Window& window, int grid_m, double dlam, int shells,
    int directions) {
  const int d = window.d;
  if (grid_m < 2) throw std::invalid_argument("radial_power_function: empty input");
  auto dirs = direction_set(d, directions);
  RadialSpectrum out = make_grid(d, dlam, shells, int(dirs.size()));

  // sample f on the regular grid once
  const long total = long(std::pow(double(grid_m), d));
  const double h = window.T / grid_m;
  const double cell = std::pow(h, d);
  std::vector<double> values(total);
  std::vector<Eigen::VectorXd> coords(total, Eigen::VectorXd(d));
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = 0; i < d; ++i) {
      coords[idx](i) = h * double(rest % grid_m);
      rest /= grid_m;
    }
    values[idx] = f(coords[idx]);
  }

  for (int k = 0; k <= shells; ++k) {
    double lam = out.radii(k);
    double acc = 0.0;
    for (const auto& w : dirs) {
      Eigen::VectorXd q = lam * w;
      double re = 0.0, im = 0.0;
      for (long idx = 0; idx < total; ++idx) {
        double phase = q.dot(coords[idx]);
        re += values[idx] * std::cos(phase);
        im -= values[idx] * std::sin(phase);
      }
      acc += (re * re + im * im) * cell * cell;
      if (k == 0) break;  // all directions identical at lambda = 0
    }
    out.power(k) = (k == 0) ? acc : acc / double(dirs.size());
  }
  return out;
}

RadialSpectrum iid_expected_radial_power(const Window& window, int N,
                                         double dlam, int shells,
                                         int directions, IidSpectrumMode mode) {
  const int d = window.d;
  auto dirs = direction_set(d, directions);
  RadialSpectrum out = make_grid(d, dlam, shells, int(dirs.size()));
  out.power(0) = 1.0;  // S_hat(0) = 1 for every realization
  const double flat = 1.0 / N;
  const double Td = std::pow(window.T, d);
  for (int k = 1; k <= shells; ++k) {
    if (mode == IidSpectrumMode::stationary) {
      out.power(k) = flat;
      continue;
    }
    double lam = out.radii(k);
    double acc = 0.0;
    for (const auto& w : dirs) {
      // |K(q)|^2 factorizes over axes: per axis (2 - 2 cos(q_i T)) / q_i^2
      double k2 = 1.0;
      for (int i = 0; i < d; ++i) {
        double qi = lam * w(i);
        if (std::abs(qi) < 1e-14) {
          k2 *= window.T * window.T;
        } else {
          k2 *= (2.0 - 2.0 * std::cos(qi * window.T)) / (qi * qi);
        }
      }
      acc += k2;
    }
    double mean_k2 = acc / double(dirs.size()) / (Td * Td);
    out.power(k) = flat + (1.0 - flat) * mean_k2;
  }
  return out;
}

VariancePrediction euclidean_variance_formula(const RadialSpectrum& F,
                                              const RadialSpectrum& E_S,
                                              const Window& window) {
  if (F.d != E_S.d || F.shells() != E_S.shells() ||
      std::abs(F.dlam - E_S.dlam) > 1e-12 * (1.0 + std::abs(F.dlam)))
    throw std::invalid_argument("euclidean_variance_formula: grid mismatch");
  if (F.d != window.d)
    throw std::invalid_argument("euclidean_variance_formula: window dim mismatch");

  const int K = F.shells();
  const double dlam = F.dlam;
  const double norm =
      1.0 / (std::pow(2.0 * pi, window.d) * std::pow(window.T, window.d));

  VariancePrediction pred;
  pred.formal = true;
  double se2 = 0.0;
  for (int k = 1; k <= K; ++k) {
    double weight = (k == K) ? 0.5 * dlam : dlam;  // trapezoid; k=0 term is 0
    double shell = F.shell_size(k);
    BlockContribution bc;
    bc.label.domain = Domain::euclidean_shell;
    bc.label.index = {k, 0, 0};
    bc.label.shell_radius = F.radii(k);
    bc.power_integrand = F.power(k);
    bc.power_sampler = E_S.power(k);
    bc.se_sampler = E_S.se(k);
    bc.dim = shell;
    bc.contribution = norm * weight * F.power(k) * E_S.power(k) * shell;
    pred.variance += bc.contribution;
    double c = norm * weight * F.power(k) * shell;
    se2 += c * c * E_S.se(k) * E_S.se(k);
    pred.contributions.push_back(bc);
  }
  pred.dc_product = norm * F.power(0) * E_S.power(0);
  pred.tail_known = false;  // continuum truncation at lambda_max, unquantified
  pred.tail_estimate = 0.0;
  pred.se = std::sqrt(se2);
  return pred;
}

}  // namespace homvar::euclidean
