#pragma once
#include <cstdint>
#include <vector>

#include "homvar/euclidean.hpp"
#include "homvar/integrand.hpp"
#include "homvar/samplers.hpp"
#include "homvar/spectra.hpp"

// Brute-force side of the toolkit: estimates expected pattern spectra and the
// empirical mean/variance of the MC estimator over many realizations, and
// joins them with the closed-form predictor into a pass/fail report.
//
// Determinism contract: realization r always uses the same RNG stream
// regardless of worker count. Work is split into fixed-size chunks whose
// partial sums are reduced in chunk order, so results are bit-identical
// across --workers values.
namespace homvar::harness {

enum class SpectrumSource { analytic, estimate };

struct ExperimentConfig {
  Domain domain = Domain::torus;
  samplers::SamplerSpec sampler;
  Integrand integrand;

  // truncation: torus bandwidth, sphere degree cap, or euclidean shell grid
  int bandwidth = 4;
  int max_degree = 4;
  double shell_spacing = 0.0;
  int shell_count = 0;
  int directions = 0;
  int grid_m = 4096;  // window-transform grid per axis (euclidean)
  euclidean::Window window;

  long long realizations = 2;
  std::uint64_t seed = 0;
  int workers = 1;
  SpectrumSource spectrum = SpectrumSource::analytic;
  euclidean::IidSpectrumMode iid_mode = euclidean::IidSpectrumMode::stationary;

  // Cross-checks domain tags and truncation, fills sampler defaults; throws
  // std::invalid_argument on inconsistency.
  void validate();
};

struct EmpiricalStatistics {
  Complex mean{0.0, 0.0};
  double variance = 0.0;  // sample variance, R-1 denominator
  double se_mean = 0.0;
  double se_variance = 0.0;  // delta method via the fourth central moment
  long long realizations = 0;
};

struct VarianceReport {
  VariancePrediction prediction;
  EmpiricalStatistics empirical;
  // expected sampler power actually used by the predictor (se filled when it
  // was estimated); exactly one of these is populated
  PowerByBlock sampler_power;
  euclidean::RadialSpectrum sampler_radial;
  double z_mean = 0.0;
  double z_variance = 0.0;
  double tail_fraction = 0.0;
  bool formal = false;  // euclidean shell model
  bool pass = false;
};

// Mean over R realizations of the per-block power of drawn patterns, with
// per-block standard errors. Torus/sphere; throws for euclidean configs.
PowerByBlock estimate_expected_power(const ExperimentConfig& config);
// Same for the euclidean shell spectrum.
euclidean::RadialSpectrum estimate_expected_radial_power(
    const ExperimentConfig& config);

// Closed-form expected power where one exists (torus: iid, shifted-lattice,
// jittered d=1, fixed patterns; sphere: iid plus any fixed base pattern via
// rotation invariance of per-degree power; euclidean: iid only). Throws
// std::invalid_argument otherwise.
PowerByBlock analytic_expected_power(const ExperimentConfig& config);
euclidean::RadialSpectrum analytic_expected_radial_power(
    const ExperimentConfig& config);

// Sample mean / variance (R-1) of the MC estimate over R realizations.
EmpiricalStatistics empirical_mc_statistics(const ExperimentConfig& config);

// Closed-form side only: integrand power at the configured truncation times
// the expected sampler spectrum (analytic, or estimated when the config says
// so; estimation uses a seed stream disjoint from the empirical one). When
// the spectrum is estimated, prediction.se is the exact standard error of the
// weighted power sum, computed from per-realization projections.
VariancePrediction predict(const ExperimentConfig& config);

// Joins predict and empirical_mc_statistics.
// z_variance = |predicted - empirical| / sqrt(se_emp^2 + se_pred^2),
// z_mean = |empirical mean - predicted expected| / se_mean, both with a small
// absolute floor on the denominator so exact-zero cases divide cleanly.
// PASS = z_variance <= 4 and z_mean <= 4 and, when the integrand tail is
// known, tail <= 10% of predicted variance.
VarianceReport compare(const ExperimentConfig& config);

}  // namespace homvar::harness
