#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Domain-agnostic spectral data model plus the two closed-form predictors:
// the mean from the trivial coefficients and the variance as
// sum over non-trivial blocks of power_F * power_S / dim.
namespace homvar {

using Complex = std::complex<double>;

enum class Domain { torus, sphere, euclidean_shell };

std::string domain_name(Domain d);
Domain domain_from_name(const std::string& s);

// Block identity: integer lattice point (torus, up to d=3), degree l
// (sphere), or shell index on a uniform radius grid (euclidean). Shells carry
// their radius so labels stay meaningful without the grid object.
struct BlockLabel {
  Domain domain = Domain::torus;
  std::array<int, 3> index{0, 0, 0};  // lattice point / {l,0,0} / {shell_k,0,0}
  double shell_radius = 0.0;          // euclidean only

  bool trivial() const {
    return index == std::array<int, 3>{0, 0, 0};
  }
  friend bool operator<(const BlockLabel& a, const BlockLabel& b) {
    if (a.domain != b.domain) return a.domain < b.domain;
    return a.index < b.index;
  }
  friend bool operator==(const BlockLabel& a, const BlockLabel& b) {
    return a.domain == b.domain && a.index == b.index;
  }
};

std::string label_name(const BlockLabel& label);

// Truncation descriptor: bandwidth L (torus box |lambda|_inf <= L), max
// degree (sphere), or shell grid (euclidean: spacing, count, direction order).
struct Truncation {
  Domain domain = Domain::torus;
  int bandwidth = 0;    // torus
  int max_degree = 0;   // sphere
  double shell_spacing = 0.0;  // euclidean
  int shell_count = 0;         // shells k = 0..shell_count
  int directions = 0;          // directional quadrature order

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

struct SpectralCoefficients {
  Domain domain = Domain::torus;
  Truncation truncation;
  std::map<BlockLabel, Eigen::VectorXcd> blocks;
};

struct BlockPower {
  double power = 0.0;  // |pi_lambda(v)|^2
  double dim = 1.0;    // dim V^lambda, or shell size for euclidean
  double se = 0.0;     // standard error when estimated, else 0
};

struct PowerByBlock {
  Domain domain = Domain::torus;
  Truncation truncation;
  std::map<BlockLabel, BlockPower> blocks;
  // Integrand power outside the truncation when analytically known.
  double tail_power = 0.0;
  bool tail_known = false;
};

struct BlockContribution {
  BlockLabel label;
  double power_integrand = 0.0;
  double power_sampler = 0.0;
  double se_sampler = 0.0;  // nonzero when the sampler power was estimated
  double dim = 1.0;
  double contribution = 0.0;
};

struct VariancePrediction {
  Complex expected_value{0.0, 0.0};
  double variance = 0.0;
  std::vector<BlockContribution> contributions;  // non-trivial blocks
  double tail_estimate = 0.0;
  bool tail_known = true;
  // standard error of the prediction when the sampler spectrum was estimated
  double se = 0.0;
  // euclidean only: the reported DC product C * P_F(0) * P_S(0) that the
  // formal formula subtracts; excluded from `variance` structurally
  double dc_product = 0.0;
  bool formal = false;
};

// Per-block power sum_m |c_m|^2 with dims taken from the labels.
PowerByBlock power_from_coefficients(const SpectralCoefficients& c);

// Eq.-(1) shape: trivial integrand coefficient times conjugated expected
// trivial sampler coefficient.
Complex predict_expected(Complex w_trivial, Complex mean_sampler_trivial);

// Eq.-(2) shape: sum over non-trivial blocks of
// power_F(lambda) * power_S(lambda) / dim(lambda). The trivial block is
// excluded by label, never by thresholding. Tail estimate = integrand tail
// power (if known) times the max non-trivial sampler power.
VariancePrediction predict_variance(const PowerByBlock& integrand,
                                    const PowerByBlock& sampler_expected);

double block_dim(const BlockLabel& label);  // 1 (torus) or 2l+1 (sphere)

}  // namespace homvar
