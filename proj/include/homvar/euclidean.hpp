#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "homvar/spectra.hpp"

// Formal Euclidean-space predictor: radially averaged power spectra of
// windowed integrands and point patterns, with the shell size
// lambda^{d-1} |S^{d-1}| standing in for an irreducible dimension. The domain
// is a compact window [0,T)^d, and reports from this path are labeled FORMAL.
namespace homvar::euclidean {

using homvar::Complex;

struct Window {
  int d = 1;          // 1..3
  double T = 1.0;     // box edge, points live in [0,T)^d
  bool periodic = true;
};

// Uniform shell grid: radii k*dlam for k = 0..count. Shell 0 is the trivial
// (DC) shell. `power` stores the DIRECTIONAL AVERAGE of |X_hat|^2 on the
// shell; shell_size(k) = lambda^{d-1} |S^{d-1}| is kept separately.
struct RadialSpectrum {
  int d = 1;
  double dlam = 0.0;
  int directions = 0;  // quadrature order actually used
  Eigen::VectorXd radii;
  Eigen::VectorXd power;
  Eigen::VectorXd se;  // per-shell standard error when estimated, else 0

  int shells() const { return int(radii.size()) - 1; }
  double shell_size(int k) const;
};

double unit_sphere_measure(int d);  // |S^{d-1}|: 2, 2pi, 4pi

// Direction set used for shell quadrature: {+1,-1} for d=1, uniform angles
// for d=2, a symmetrized spiral set for d=3.
std::vector<Eigen::VectorXd> direction_set(int d, int order);

Truncation make_truncation(int d, double dlam, int shells, int directions);

// Raw windowed transforms: F_hat(q) = integral of f e^{-i<q,p>} over the
// window (left Riemann sum on the given samples), S_hat(q) = (1/N) sum_j
// e^{-i<q, s_j>}. Averaged |.|^2 over the direction set per shell.
RadialSpectrum radial_power_points(const Eigen::MatrixXd& points,  // d x N
                                   const Window& window, double dlam,
                                   int shells, int directions);
RadialSpectrum radial_power_function(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Window& window, int grid_m, double dlam, int shells, int directions);

// Analytic expected spectra for the iid-uniform sampler on the window.
// exact_window: E|S_hat(q)|^2 = 1/N + (1-1/N)|K(q)/T^d|^2 with K the window
//               transform (what the estimation harness converges to);
// stationary:   flat 1/N on every non-trivial shell (infinite-domain
//               idealization without the window coherence hump).
enum class IidSpectrumMode { exact_window, stationary };
RadialSpectrum iid_expected_radial_power(const Window& window, int N,
                                         double dlam, int shells,
                                         int directions, IidSpectrumMode mode);

// Trapezoid discretization of
//   C * integral over lambda>0 of P_F(lambda) P_S(lambda) A_d(lambda) dlam,
// with P the directional averages, A_d the shell size and
// C = 1/((2pi)^d T^d). The trivial shell is excluded structurally (the k=0
// integrand is defined as 0); the DC product C*P_F(0)*P_S(0) is reported in
// the prediction's dc_product field, mirroring the trivial-block exclusion of
// the exact predictors.
VariancePrediction euclidean_variance_formula(const RadialSpectrum& F,
                                              const RadialSpectrum& E_S,
                                              const Window& window);

}  // namespace homvar::euclidean
