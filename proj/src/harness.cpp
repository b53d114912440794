#include "homvar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "homvar/rng.hpp"
#include "homvar/sphere.hpp"
#include "homvar/torus.hpp"

namespace homvar::harness {

using std::numbers::pi;

namespace {

// Disjoint seed streams for the two phases of compare(); both derive from the
// master seed, so a report is still a pure function of (config, seed).
constexpr std::uint64_t kTagEmpirical = 0x656d7069722d6d63ULL;
constexpr std::uint64_t kTagSpectrum = 0x737065637472756dULL;

// Fixed chunk size, independent of worker count: chunk partials are reduced
// in chunk order, which makes every aggregate bit-identical across --workers.
constexpr long long kChunk = 128;

void run_chunks(long long total, int workers,
                const std::function<void(long long chunk, long long begin,
                                         long long end)>& body) {
  const long long n_chunks = (total + kChunk - 1) / kChunk;
  if (workers <= 1 || n_chunks <= 1) {
    for (long long c = 0; c < n_chunks; ++c)
      body(c, c * kChunk, std::min(total, (c + 1) * kChunk));
    return;
  }
  std::atomic<long long> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      long long c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        body(c, c * kChunk, std::min(total, (c + 1) * kChunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n_threads = std::min<long long>(workers, n_chunks);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct VectorMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd se;
  double projection_mean = 0.0;
  double projection_se = 0.0;
};

// Mean and standard error of a per-realization vector statistic, plus the
// same for a fixed linear projection of it (used for the exact SE of a
// predicted variance built from an estimated spectrum).
VectorMoments accumulate_vectors(
    long long R, int workers, int n,
    const std::function<void(long long r, Eigen::VectorXd& out)>& fill,
    const Eigen::VectorXd* projection) {
  const long long n_chunks = (R + kChunk - 1) / kChunk;
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, n_chunks);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(n, n_chunks);
  Eigen::VectorXd ysum = Eigen::VectorXd::Zero(n_chunks);
  Eigen::VectorXd ysumsq = Eigen::VectorXd::Zero(n_chunks);

  run_chunks(R, workers, [&](long long c, long long begin, long long end) {
    Eigen::VectorXd tmp(n);
    for (long long r = begin; r < end; ++r) {
      fill(r, tmp);
      sums.col(c) += tmp;
      sumsq.col(c) += tmp.cwiseProduct(tmp);
      if (projection) {
        double y = projection->dot(tmp);
        ysum(c) += y;
        ysumsq(c) += y * y;
      }
    }
  });

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
  double ys = 0.0, ys2 = 0.0;
  for (long long c = 0; c < n_chunks; ++c) {  // fixed reduction order
    sum += sums.col(c);
    sq += sumsq.col(c);
    ys += ysum(c);
    ys2 += ysumsq(c);
  }

  VectorMoments out;
  out.mean = sum / double(R);
  out.se.resize(n);
  for (int i = 0; i < n; ++i) {
    double var = (sq(i) - double(R) * out.mean(i) * out.mean(i)) / double(R - 1);
    out.se(i) = std::sqrt(std::max(0.0, var) / double(R));
  }
  if (projection) {
    out.projection_mean = ys / double(R);
    double var =
        (ys2 - double(R) * out.projection_mean * out.projection_mean) /
        double(R - 1);
    out.projection_se = std::sqrt(std::max(0.0, var) / double(R));
  }
  return out;
}

// Per-realization block powers in a fixed label order.
std::vector<BlockLabel> spectrum_labels(const ExperimentConfig& c) {
  std::vector<BlockLabel> labels;
  if (c.domain == Domain::torus) {
    labels = torus::enumerate_labels(c.sampler.d, c.bandwidth);
  } else if (c.domain == Domain::sphere) {
    for (int l = 0; l <= c.max_degree; ++l) {
      BlockLabel lab;
      lab.domain = Domain::sphere;
      lab.index = {l, 0, 0};
      labels.push_back(lab);
    }
  } else {
    throw std::logic_error("spectrum_labels: euclidean uses shell indices");
  }
  return labels;
}

void realization_power(const ExperimentConfig& c, std::uint64_t seed,
                       const std::vector<BlockLabel>& labels, long long r,
                       Eigen::VectorXd& out) {
  samplers::SamplePattern pat =
      samplers::draw(c.sampler, seed, std::uint64_t(r));
  if (c.domain == Domain::torus) {
    SpectralCoefficients sc =
        torus::pattern_coefficients(pat.points, c.bandwidth);
    for (size_t i = 0; i < labels.size(); ++i)
      out(long(i)) = sc.blocks.at(labels[i]).squaredNorm();
  } else {
    sphere::SphericalSpectrum sc =
        sphere::pattern_coefficients(pat.points, c.max_degree);
    for (size_t i = 0; i < labels.size(); ++i)
      out(long(i)) = sc.degrees[labels[i].index[0]].squaredNorm();
  }
}

struct EstimatedSpectrum {
  PowerByBlock power;
  double projection_mean = 0.0;
  double projection_se = 0.0;
};

EstimatedSpectrum estimate_spectrum_blocks(const ExperimentConfig& c,
                                           std::uint64_t seed,
                                           const Eigen::VectorXd* projection) {
  std::vector<BlockLabel> labels = spectrum_labels(c);
  VectorMoments m = accumulate_vectors(
      c.realizations, c.workers, int(labels.size()),
      [&](long long r, Eigen::VectorXd& out) {
        realization_power(c, seed, labels, r, out);
      },
      projection);

  EstimatedSpectrum est;
  est.power.domain = c.domain;
  est.power.truncation = (c.domain == Domain::torus)
                             ? torus::make_truncation(c.bandwidth)
                             : sphere::make_truncation(c.max_degree);
  for (size_t i = 0; i < labels.size(); ++i) {
    BlockPower bp;
    bp.power = m.mean(long(i));
    bp.se = m.se(long(i));
    bp.dim = block_dim(labels[i]);
    est.power.blocks[labels[i]] = bp;
  }
  est.power.tail_known = false;
  est.projection_mean = m.projection_mean;
  est.projection_se = m.projection_se;
  return est;
}

struct EstimatedRadial {
  euclidean::RadialSpectrum radial;
  double projection_mean = 0.0;
  double projection_se = 0.0;
};

EstimatedRadial estimate_spectrum_radial(const ExperimentConfig& c,
                                         std::uint64_t seed,
                                         const Eigen::VectorXd* projection) {
  const int n = c.shell_count + 1;
  euclidean::RadialSpectrum probe;  // fixed grid metadata from one evaluation
  bool have_probe = false;
  std::mutex probe_mutex;

  VectorMoments m = accumulate_vectors(
      c.realizations, c.workers, n,
      [&](long long r, Eigen::VectorXd& out) {
        samplers::SamplePattern pat =
            samplers::draw(c.sampler, seed, std::uint64_t(r));
        euclidean::RadialSpectrum rs = euclidean::radial_power_points(
            pat.points, c.window, c.shell_spacing, c.shell_count,
            c.directions);
        out = rs.power;
        if (!have_probe) {
          std::lock_guard<std::mutex> lock(probe_mutex);
          if (!have_probe) {
            probe = rs;
            have_probe = true;
          }
        }
      },
      projection);

  EstimatedRadial est;
  est.radial = probe;
  est.radial.power = m.mean;
  est.radial.se = m.se;
  est.projection_mean = m.projection_mean;
  est.projection_se = m.projection_se;
  return est;
}

Eigen::VectorXd torus_projection_weights(const PowerByBlock& F,
                                         const std::vector<BlockLabel>& labels) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(long(labels.size()));
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].trivial()) continue;
    auto it = F.blocks.find(labels[i]);
    if (it != F.blocks.end()) w(long(i)) = it->second.power / it->second.dim;
  }
  return w;
}

Eigen::VectorXd radial_projection_weights(const euclidean::RadialSpectrum& F,
                                          const euclidean::Window& window) {
  const int K = F.shells();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(K + 1);
  const double norm =
      1.0 / (std::pow(2.0 * pi, window.d) * std::pow(window.T, window.d));
  for (int k = 1; k <= K; ++k) {
    double weight = (k == K) ? 0.5 * F.dlam : F.dlam;
    w(k) = norm * weight * F.power(k) * F.shell_size(k);
  }
  return w;
}

double euclidean_real(const Integrand& f, const Eigen::VectorXd& p) {
  return f.evaluate(p).real();
}

}  // namespace

void ExperimentConfig::validate() {
  sampler.validate();
  if (sampler.domain != domain)
    throw std::invalid_argument("config: sampler domain != experiment domain");
  if (integrand.domain != domain)
    throw std::invalid_argument("config: integrand domain != experiment domain");
  if (realizations < 2)
    throw std::invalid_argument("config: need at least 2 realizations");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (domain == Domain::torus) {
    if (bandwidth < 1) throw std::invalid_argument("config: bandwidth < 1");
    if (integrand.d != sampler.d)
      throw std::invalid_argument("config: integrand/sampler dimension mismatch");
  } else if (domain == Domain::sphere) {
    if (max_degree < 0) throw std::invalid_argument("config: max_degree < 0");
  } else {
    if (shell_spacing <= 0 || shell_count < 1)
      throw std::invalid_argument("config: euclidean shell grid unset");
    if (directions < 1)
      throw std::invalid_argument("config: euclidean directions unset");
    if (grid_m < 2) throw std::invalid_argument("config: grid_m < 2");
    if (window.d != sampler.d)
      throw std::invalid_argument("config: window dim != sampler dim");
    if (std::abs(window.T - sampler.extent) >
        1e-12 * (1.0 + std::abs(window.T)))
      throw std::invalid_argument("config: window extent != sampler extent");
    if (integrand.d != window.d ||
        std::abs(integrand.extent - window.T) >
            1e-12 * (1.0 + std::abs(window.T)))
      throw std::invalid_argument("config: integrand window mismatch");
  }
}

PowerByBlock estimate_expected_power(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  if (c.domain == Domain::euclidean_shell)
    throw std::invalid_argument(
        "estimate_expected_power: euclidean configs use "
        "estimate_expected_radial_power");
  std::uint64_t seed = rng::mix(c.seed, kTagSpectrum);
  return estimate_spectrum_blocks(c, seed, nullptr).power;
}

euclidean::RadialSpectrum estimate_expected_radial_power(
    const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  if (c.domain != Domain::euclidean_shell)
    throw std::invalid_argument(
        "estimate_expected_radial_power: not a euclidean config");
  std::uint64_t seed = rng::mix(c.seed, kTagSpectrum);
  return estimate_spectrum_radial(c, seed, nullptr).radial;
}

PowerByBlock analytic_expected_power(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  const samplers::SamplerSpec& s = c.sampler;
  if (c.domain == Domain::torus) {
    switch (s.kind) {
      case samplers::Kind::iid_uniform:
        return torus::iid_expected_power(s.d, c.bandwidth, s.n);
      case samplers::Kind::shifted_lattice:
        return torus::shifted_lattice_expected_power(s.d, c.bandwidth, s.n,
                                                     s.generator);
      case samplers::Kind::jittered_grid:
        if (s.d == 1) return torus::jittered_expected_power_1d(c.bandwidth, s.n);
        throw std::invalid_argument(
            "analytic_expected_power: jittered-grid closed form is d=1 only");
      case samplers::Kind::fixed_pattern_randomized:
        // |S_lambda| is invariant under the uniform shift, so the expected
        // power is the base pattern's power, with zero spread.
        return power_from_coefficients(
            torus::pattern_coefficients(s.base_pattern, c.bandwidth));
      default:
        throw std::invalid_argument(
            "analytic_expected_power: no closed form for this sampler");
    }
  }
  if (c.domain == Domain::sphere) {
    switch (s.kind) {
      case samplers::Kind::iid_uniform:
        return sphere::iid_expected_power(c.max_degree, s.n);
      case samplers::Kind::fibonacci_rotated:
        // per-degree power is rotation invariant, so the base pattern decides
        return sphere::power_by_degree(sphere::pattern_coefficients(
            samplers::fibonacci_sphere(s.n), c.max_degree));
      case samplers::Kind::fixed_pattern_randomized:
        return sphere::power_by_degree(
            sphere::pattern_coefficients(s.base_pattern, c.max_degree));
      default:
        throw std::invalid_argument(
            "analytic_expected_power: no closed form for this sampler");
    }
  }
  throw std::invalid_argument(
      "analytic_expected_power: euclidean configs use "
      "analytic_expected_radial_power");
}

euclidean::RadialSpectrum analytic_expected_radial_power(
    const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  if (c.domain != Domain::euclidean_shell)
    throw std::invalid_argument(
        "analytic_expected_radial_power: not a euclidean config");
  if (c.sampler.kind != samplers::Kind::iid_uniform)
    throw std::invalid_argument(
        "analytic_expected_radial_power: closed form exists for iid-uniform "
        "only; use the estimated spectrum");
  return euclidean::iid_expected_radial_power(c.window, c.sampler.n,
                                              c.shell_spacing, c.shell_count,
                                              c.directions, c.iid_mode);
}

EmpiricalStatistics empirical_mc_statistics(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  const long long R = c.realizations;
  std::uint64_t seed = rng::mix(c.seed, kTagEmpirical);

  std::vector<Complex> est(static_cast<size_t>(R));
  run_chunks(R, c.workers, [&](long long, long long begin, long long end) {
    for (long long r = begin; r < end; ++r) {
      samplers::SamplePattern pat =
          samplers::draw(c.sampler, seed, std::uint64_t(r));
      Complex acc{0.0, 0.0};
      const long n = pat.points.cols();
      for (long j = 0; j < n; ++j)
        acc += c.integrand.evaluate(pat.points.col(j));
      est[size_t(r)] = acc / double(n);
    }
  });

  Complex sum{0.0, 0.0};
  for (long long r = 0; r < R; ++r) sum += est[size_t(r)];
  Complex mean = sum / double(R);
  double m2 = 0.0, m4 = 0.0;
  for (long long r = 0; r < R; ++r) {
    double a = std::norm(est[size_t(r)] - mean);
    m2 += a;
    m4 += a * a;
  }

  EmpiricalStatistics out;
  out.realizations = R;
  out.mean = mean;
  out.variance = m2 / double(R - 1);
  out.se_mean = std::sqrt(out.variance / double(R));
  const double m2n = m2 / double(R);
  const double m4n = m4 / double(R);
  double var_var =
      (m4n - (double(R) - 3.0) / (double(R) - 1.0) * m2n * m2n) / double(R);
  out.se_variance = std::sqrt(std::max(0.0, var_var));
  return out;
}

VariancePrediction predict(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  std::uint64_t seed = rng::mix(c.seed, kTagSpectrum);
  VariancePrediction pred;

  if (c.domain == Domain::torus) {
    PowerByBlock F = c.integrand.torus_power(c.bandwidth);
    if (c.spectrum == SpectrumSource::analytic) {
      pred = torus::torus_variance_formula(F, analytic_expected_power(c));
    } else {
      std::vector<BlockLabel> labels = spectrum_labels(c);
      Eigen::VectorXd w = torus_projection_weights(F, labels);
      EstimatedSpectrum est = estimate_spectrum_blocks(c, seed, &w);
      pred = torus::torus_variance_formula(F, est.power);
      pred.se = est.projection_se;  // exact, includes cross-block covariance
    }
    pred.expected_value = predict_expected(
        c.integrand.trivial_coefficient(),
        Complex(std::pow(2.0 * pi, -c.sampler.d / 2.0), 0.0));
  } else if (c.domain == Domain::sphere) {
    PowerByBlock F = c.integrand.sphere_power(c.max_degree);
    if (c.spectrum == SpectrumSource::analytic) {
      pred = sphere::sphere_variance_formula(F, analytic_expected_power(c));
    } else {
      std::vector<BlockLabel> labels = spectrum_labels(c);
      Eigen::VectorXd w = torus_projection_weights(F, labels);
      EstimatedSpectrum est = estimate_spectrum_blocks(c, seed, &w);
      pred = sphere::sphere_variance_formula(F, est.power);
      pred.se = est.projection_se;
    }
    pred.expected_value =
        predict_expected(c.integrand.trivial_coefficient(),
                         Complex(1.0 / std::sqrt(4.0 * pi), 0.0));
  } else {
    const Integrand& f = c.integrand;
    euclidean::RadialSpectrum F = euclidean::radial_power_function(
        [&f](const Eigen::VectorXd& p) { return euclidean_real(f, p); },
        c.window, c.grid_m, c.shell_spacing, c.shell_count, c.directions);
    if (c.spectrum == SpectrumSource::analytic) {
      pred = euclidean::euclidean_variance_formula(
          F, analytic_expected_radial_power(c), c.window);
    } else {
      Eigen::VectorXd w = radial_projection_weights(F, c.window);
      EstimatedRadial est = estimate_spectrum_radial(c, seed, &w);
      pred = euclidean::euclidean_variance_formula(F, est.radial, c.window);
      pred.se = est.projection_se;
    }
    pred.expected_value = c.integrand.mean();
  }
  return pred;
}

VarianceReport compare(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.validate();
  std::uint64_t spectrum_seed = rng::mix(c.seed, kTagSpectrum);

  VarianceReport rep;

  // prediction, keeping the sampler spectrum for the per-block table
  if (c.domain == Domain::euclidean_shell) {
    const Integrand& f = c.integrand;
    euclidean::RadialSpectrum F = euclidean::radial_power_function(
        [&f](const Eigen::VectorXd& p) { return euclidean_real(f, p); },
        c.window, c.grid_m, c.shell_spacing, c.shell_count, c.directions);
    if (c.spectrum == SpectrumSource::analytic) {
      rep.sampler_radial = analytic_expected_radial_power(c);
      rep.prediction =
          euclidean::euclidean_variance_formula(F, rep.sampler_radial, c.window);
    } else {
      Eigen::VectorXd w = radial_projection_weights(F, c.window);
      EstimatedRadial est = estimate_spectrum_radial(c, spectrum_seed, &w);
      rep.sampler_radial = est.radial;
      rep.prediction =
          euclidean::euclidean_variance_formula(F, est.radial, c.window);
      rep.prediction.se = est.projection_se;
    }
    rep.prediction.expected_value = c.integrand.mean();
  } else {
    PowerByBlock F = (c.domain == Domain::torus)
                         ? c.integrand.torus_power(c.bandwidth)
                         : c.integrand.sphere_power(c.max_degree);
    if (c.spectrum == SpectrumSource::analytic) {
      rep.sampler_power = analytic_expected_power(c);
    } else {
      std::vector<BlockLabel> labels = spectrum_labels(c);
      Eigen::VectorXd w = torus_projection_weights(F, labels);
      EstimatedSpectrum est = estimate_spectrum_blocks(c, spectrum_seed, &w);
      rep.sampler_power = est.power;
      rep.prediction.se = est.projection_se;
    }
    double saved_se = rep.prediction.se;
    rep.prediction = (c.domain == Domain::torus)
                         ? torus::torus_variance_formula(F, rep.sampler_power)
                         : sphere::sphere_variance_formula(F, rep.sampler_power);
    if (c.spectrum == SpectrumSource::estimate) rep.prediction.se = saved_se;
    rep.prediction.expected_value =
        (c.domain == Domain::torus)
            ? predict_expected(c.integrand.trivial_coefficient(),
                               Complex(std::pow(2.0 * pi, -c.sampler.d / 2.0),
                                       0.0))
            : predict_expected(c.integrand.trivial_coefficient(),
                               Complex(1.0 / std::sqrt(4.0 * pi), 0.0));
  }

  rep.empirical = empirical_mc_statistics(c);
  rep.formal = rep.prediction.formal;

  const double floor_v =
      1e-18 * (1.0 + std::abs(rep.prediction.variance));
  double se_v = std::sqrt(rep.empirical.se_variance * rep.empirical.se_variance +
                          rep.prediction.se * rep.prediction.se);
  se_v = std::max(se_v, floor_v);
  rep.z_variance =
      std::abs(rep.prediction.variance - rep.empirical.variance) / se_v;

  const double floor_m =
      1e-18 * (1.0 + std::abs(rep.prediction.expected_value));
  double se_m = std::max(rep.empirical.se_mean, floor_m);
  rep.z_mean = std::abs(rep.empirical.mean - rep.prediction.expected_value) / se_m;

  rep.tail_fraction =
      rep.prediction.tail_known
          ? rep.prediction.tail_estimate /
                std::max(rep.prediction.variance, floor_v)
          : 0.0;
  rep.pass = rep.z_variance <= 4.0 && rep.z_mean <= 4.0 &&
             (!rep.prediction.tail_known || rep.tail_fraction <= 0.10);
  return rep;
}

}  // namespace homvar::harness
