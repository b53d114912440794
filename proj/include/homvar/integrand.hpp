#pragma once
#include <Eigen/Dense>
#include <numbers>
#include <vector>

#include "homvar/spectra.hpp"
#include "homvar/torus.hpp"
#include "homvar/sphere.hpp"

// Closed-form integrand family: trigonometric polynomials on the torus or a
// periodic window (integer frequencies in units of the fundamental 2pi/T) and
// spherical-harmonic combinations on S^2. Exact coefficients, means, and
// truncation tails are available for all of them, which is what makes the
// predictor tests oracle-grade.
namespace homvar {

struct TrigTerm {
  Eigen::Vector3i k = Eigen::Vector3i::Zero();  // frequency in lattice units
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

struct ShTerm {
  int l = 0;
  int m = 0;
  Complex coef{0.0, 0.0};
};

struct Integrand {
  Domain domain = Domain::torus;
  int d = 1;             // torus/euclidean
  double extent = 0.0;   // 2pi (torus) or window T
  double constant = 0.0; // DC term (trig form)
  std::vector<TrigTerm> trig;
  std::vector<ShTerm> sh;

  // fundamental frequency of the window lattice
  double beta() const { return 2.0 * std::numbers::pi / extent; }

  Complex evaluate(const Eigen::VectorXd& p) const;

  // exact mean over the domain (uniform measure)
  Complex mean() const;

  // exact variance of f under the uniform measure (band-limited forms only)
  double uniform_variance() const;

  int max_bandwidth() const;  // max |k|_inf over trig terms
  int max_degree() const;     // max l over sh terms

  // Exact orthonormal-basis torus coefficients; requires domain == torus.
  // Terms with |k|_inf > L contribute to the tail, reported on the result.
  PowerByBlock torus_power(int L) const;
  torus::BandlimitedFunction torus_function(int L) const;

  // Exact per-degree sphere powers with tail for l > lmax.
  PowerByBlock sphere_power(int lmax) const;

  Complex trivial_coefficient() const;  // orthonormal-basis DC coefficient
};

}  // namespace homvar
