#include "homvar/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homvar::sphere {

using std::numbers::pi;

Truncation make_truncation(int lmax) {
  Truncation t;
  t.domain = Domain::sphere;
  t.max_degree = lmax;
  return t;
}

// Stable upward recurrence with the 1/sqrt(4pi) normalization folded in:
// P~_m^m via a product, then
// P~_l^m = a_l ( x P~_{l-1}^m - P~_{l-2}^m / a_{l-1} ),
// a_l = sqrt((4l^2-1)/(l^2-m^2)). Good to l of a few hundred.
double normalized_legendre(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("normalized_legendre: bad m");
  double pmm = 1.0;
  if (m > 0) {
    double omx2 = (1.0 - x) * (1.0 + x);
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= omx2 * fact / (fact + 1.0);
      fact += 2.0;
    }
  }
  pmm = std::sqrt((2.0 * m + 1.0) * pmm / (4.0 * pi));
  if (m & 1) pmm = -pmm;  // Condon-Shortley
  if (l == m) return pmm;
  double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pmmp1;
  double prev_a = 0.0, pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    double a = std::sqrt((4.0 * ll * ll - 1.0) /
                         (double(ll) * ll - double(m) * m));
    if (ll == m + 2) prev_a = std::sqrt((4.0 * (ll - 1.0) * (ll - 1.0) - 1.0) /
                                        ((ll - 1.0) * (ll - 1.0) - double(m) * m));
    pll = a * (x * pmmp1 - pmm / prev_a);
    pmm = pmmp1;
    pmmp1 = pll;
    prev_a = a;
  }
  return pll;
}

Complex eval_sh(int l, int m, const Eigen::Vector3d& p) {
  if (std::abs(m) > l) throw std::invalid_argument("eval_sh: |m| > l");
  double ct = std::clamp(p.z(), -1.0, 1.0);
  double phi = std::atan2(p.y(), p.x());
  int am = std::abs(m);
  double leg = normalized_legendre(l, am, ct);
  Complex val = leg * Complex(std::cos(am * phi), std::sin(am * phi));
  if (m >= 0) return val;
  double sign = (am & 1) ? -1.0 : 1.0;  // Y_l^{-m} = (-1)^m conj(Y_l^m)
  return sign * std::conj(val);
}

std::vector<Eigen::VectorXcd> eval_sh_all(int lmax, const Eigen::Vector3d& p) {
  std::vector<Eigen::VectorXcd> out(lmax + 1);
  double ct = std::clamp(p.z(), -1.0, 1.0);
  double phi = std::atan2(p.y(), p.x());
  for (int l = 0; l <= lmax; ++l) out[l].resize(2 * l + 1);
  for (int m = 0; m <= lmax; ++m) {
    Complex e = Complex(std::cos(m * phi), std::sin(m * phi));
    double sign = (m & 1) ? -1.0 : 1.0;
    for (int l = m; l <= lmax; ++l) {
      double leg = normalized_legendre(l, m, ct);
      Complex val = leg * e;
      out[l](m + l) = val;
      if (m > 0) out[l](-m + l) = sign * std::conj(val);
    }
  }
  return out;
}

SphericalSpectrum pattern_coefficients(const Pattern& points, int lmax) {
  const int N = int(points.cols());
  if (N < 1) throw std::invalid_argument("pattern_coefficients: empty pattern");
  SphericalSpectrum out;
  out.lmax = lmax;
  out.degrees.resize(lmax + 1);
  for (int l = 0; l <= lmax; ++l)
    out.degrees[l] = Eigen::VectorXcd::Zero(2 * l + 1);
  for (int j = 0; j < N; ++j) {
    auto ylm = eval_sh_all(lmax, points.col(j));
    for (int l = 0; l <= lmax; ++l) out.degrees[l] += ylm[l].conjugate();
  }
  for (int l = 0; l <= lmax; ++l) out.degrees[l] /= double(N);
  return out;
}

// Newton iteration on Legendre P_n; standard initial guess.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes(i) = x;
    weights(i) = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

SphericalSpectrum function_coefficients(
    const std::function<double(const Eigen::Vector3d&)>& f, int lmax,
    int n_theta, int n_phi) {
  if (n_theta < lmax + 1 || n_phi < 2 * lmax + 1)
    throw std::invalid_argument("function_coefficients: quadrature too coarse");
  Eigen::VectorXd ct, wt;
  gauss_legendre(n_theta, ct, wt);

  SphericalSpectrum out;
  out.lmax = lmax;
  out.degrees.resize(lmax + 1);
  for (int l = 0; l <= lmax; ++l)
    out.degrees[l] = Eigen::VectorXcd::Zero(2 * l + 1);

  const double dphi = 2.0 * pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    double z = ct(i);
    double st = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < n_phi; ++j) {
      double phi = dphi * j;
      Eigen::Vector3d p(st * std::cos(phi), st * std::sin(phi), z);
      double fv = f(p);
      double w = wt(i) * dphi * fv;
      auto ylm = eval_sh_all(lmax, p);
      for (int l = 0; l <= lmax; ++l)
        out.degrees[l] += w * ylm[l].conjugate();
    }
  }
  return out;
}

PowerByBlock power_by_degree(const SphericalSpectrum& s) {
  PowerByBlock out;
  out.domain = Domain::sphere;
  out.truncation = make_truncation(s.lmax);
  for (int l = 0; l <= s.lmax; ++l) {
    BlockLabel label;
    label.domain = Domain::sphere;
    label.index = {l, 0, 0};
    BlockPower p;
    p.power = s.degrees[l].squaredNorm();
    p.dim = 2.0 * l + 1.0;
    out.blocks[label] = p;
  }
  return out;
}

VariancePrediction sphere_variance_formula(const PowerByBlock& F,
                                           const PowerByBlock& E_S) {
  if (F.domain != Domain::sphere || E_S.domain != Domain::sphere)
    throw std::invalid_argument("sphere_variance_formula: wrong domain");
  return predict_variance(F, E_S);
}

PowerByBlock iid_expected_power(int lmax, int N) {
  PowerByBlock out;
  out.domain = Domain::sphere;
  out.truncation = make_truncation(lmax);
  for (int l = 0; l <= lmax; ++l) {
    BlockLabel label;
    label.domain = Domain::sphere;
    label.index = {l, 0, 0};
    BlockPower p;
    p.dim = 2.0 * l + 1.0;
    p.power = (l == 0) ? 1.0 / (4.0 * pi) : (2.0 * l + 1.0) / (4.0 * pi * N);
    out.blocks[label] = p;
  }
  out.tail_known = true;
  return out;
}

}  // namespace homvar::sphere
