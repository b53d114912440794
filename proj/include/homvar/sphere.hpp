#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "homvar/spectra.hpp"

// Spectral machinery on S^2 with orthonormal complex spherical harmonics
// (Condon-Shortley phase). Points are unit vectors, columns of a 3 x N
// matrix.
namespace homvar::sphere {

using homvar::Complex;

using Pattern = Eigen::MatrixXd;  // 3 x N, unit columns

struct SphericalSpectrum {
  int lmax = 0;
  // degree l row: 2l+1 coefficients, m = -l..l stored at column m+l
  std::vector<Eigen::VectorXcd> degrees;

  Complex& at(int l, int m) { return degrees[l](m + l); }
  Complex at(int l, int m) const { return degrees[l](m + l); }
};

Truncation make_truncation(int lmax);

// Normalized associated Legendre P~_l^m(x), m >= 0, such that
// Y_l^m(theta,phi) = P~_l^m(cos theta) e^{i m phi} is orthonormal on S^2.
double normalized_legendre(int l, int m, double x);

Complex eval_sh(int l, int m, const Eigen::Vector3d& p);

// All Y_l^m for l <= lmax at one point, same layout as SphericalSpectrum.
std::vector<Eigen::VectorXcd> eval_sh_all(int lmax, const Eigen::Vector3d& p);

// S_hat_l^m = (1/N) sum_j conj(Y_l^m(s_j))
SphericalSpectrum pattern_coefficients(const Pattern& points, int lmax);

// Gauss-Legendre (cos theta) x trapezoid (phi) quadrature transform; exact to
// roundoff for band-limited f with degree <= lmax when n_theta >= lmax+1 and
// n_phi >= 2 lmax+1.
SphericalSpectrum function_coefficients(
    const std::function<double(const Eigen::Vector3d&)>& f, int lmax,
    int n_theta, int n_phi);

// Per-degree power map (dims 2l+1) from a coefficient set.
PowerByBlock power_by_degree(const SphericalSpectrum& s);

// Var = sum_{l>=1} [sum_m |F_l^m|^2][sum_m E|S_l^m|^2] / (2l+1)
VariancePrediction sphere_variance_formula(const PowerByBlock& F,
                                           const PowerByBlock& E_S);

// iid uniform: per-degree expected power (2l+1)/(4 pi N) for l >= 1.
PowerByBlock iid_expected_power(int lmax, int N);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace homvar::sphere
