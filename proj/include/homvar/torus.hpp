#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "homvar/spectra.hpp"

// Spectral machinery on [0,2pi)^d with the orthonormal basis
// b_lambda(p) = exp(i<p,lambda>) / (2pi)^{d/2}, lambda in Z^d.
namespace homvar::torus {

using homvar::Complex;

// Points are columns of a d x N matrix, coordinates in [0,2pi).
using Pattern = Eigen::MatrixXd;

struct BandlimitedFunction {
  int d = 1;
  int bandwidth = 0;
  bool real_valued = false;  // conjugate-symmetry flag, tested not assumed
  std::map<BlockLabel, Complex> coefficients;  // |lambda|_inf <= bandwidth

  Complex trivial_coefficient() const;
  Complex evaluate(const Eigen::VectorXd& p) const;
};

// All lattice points with |lambda|_inf <= L, d in {1,2,3}, in a fixed
// lexicographic order.
std::vector<BlockLabel> enumerate_labels(int d, int L);

Truncation make_truncation(int L);

// S_hat_lambda = 1/(N (2pi)^{d/2}) sum_j exp(-i<lambda, s_j>)
SpectralCoefficients pattern_coefficients(const Pattern& points, int L);

// Coefficients of f from samples on a regular M^d grid; exact for
// trigonometric polynomials of bandwidth <= L when M > 2L.
BandlimitedFunction function_coefficients(
    const std::function<double(const Eigen::VectorXd&)>& f, int d, int L,
    int M);

// (1/N) sum f(s_i); equals sum_lambda F_lambda conj(S_lambda) for
// band-limited f.
Complex mc_estimate(const BandlimitedFunction& f, const Pattern& points);

// Var = sum_{lambda != 0} |F_lambda|^2 E|S_lambda|^2 (all dims 1).
VariancePrediction torus_variance_formula(const PowerByBlock& F,
                                          const PowerByBlock& E_S);

// Analytic expected power spectra in the orthonormal basis.
// iid uniform: E|S_lambda|^2 = 1/(N (2pi)^d) for lambda != 0.
PowerByBlock iid_expected_power(int d, int L, int N);
// rank-1 lattice s_j = 2pi frac(j z / N) + uniform shift:
// |S_lambda| = (2pi)^{-d/2} when <lambda,z> = 0 mod N, else 0, deterministic.
PowerByBlock shifted_lattice_expected_power(int d, int L, int N,
                                            const Eigen::VectorXi& generator);
// jittered grid, d=1 only (N strata of width h=2pi/N, one point per stratum):
// E|S_lambda|^2 = [ (1 - |k(lambda)|^2)/N + |k(lambda)|^2 [N | lambda] ] / (2pi)
// with k(lambda) = (exp(-i lambda h) - 1)/(-i lambda h).
PowerByBlock jittered_expected_power_1d(int L, int N);

}  // namespace homvar::torus
