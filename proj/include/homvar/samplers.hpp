#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "homvar/spectra.hpp"

// Homogeneous pattern generators. Every kind composes its base construction
// with one uniformly random group element per realization (toroidal/window
// cyclic shift, or a uniform rotation on the sphere); that composition is
// what makes the distribution invariant under the domain's group even for
// kinds whose base pattern is not (e.g. a jittered grid).
namespace homvar::samplers {

enum class Kind {
  iid_uniform,
  jittered_grid,
  shifted_lattice,
  fibonacci_rotated,
  fixed_pattern_randomized,
};

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);

struct SamplerSpec {
  Domain domain = Domain::torus;
  Kind kind = Kind::iid_uniform;
  int d = 1;          // torus/euclidean dimension (sphere is fixed S^2)
  double extent = 0;  // coordinate extent: 2pi for torus, T for a window; set
                      // by validate() for torus
  int n = 1;
  Eigen::VectorXi strata;      // jittered-grid: per-axis counts, product = n
  Eigen::VectorXi generator;   // shifted-lattice: rank-1 generator, coprime to n
  Eigen::MatrixXd base_pattern;  // fixed-pattern-randomized

  // Fills defaults, checks the kind/domain matrix and invariants; throws
  // std::invalid_argument with a message on bad specs.
  void validate();
};

struct SamplePattern {
  Domain domain = Domain::torus;
  Eigen::MatrixXd points;  // d x N (torus/euclidean) or 3 x N (sphere)
};

// Deterministic function of (spec, seed, realization); bit-identical across
// runs and thread counts.
SamplePattern draw(const SamplerSpec& spec, std::uint64_t seed,
                   std::uint64_t realization);

// Uniform group elements from the counter RNG.
Eigen::VectorXd uniform_shift(int d, double extent, std::uint64_t seed,
                              std::uint64_t realization);
Eigen::Matrix3d uniform_rotation(std::uint64_t seed, std::uint64_t realization);

// Apply a group element pointwise: cyclic shift (torus/window) or rotation
// (sphere).
SamplePattern homogenize(const SamplePattern& base, const Eigen::VectorXd& shift,
                         double extent);
SamplePattern homogenize(const SamplePattern& base, const Eigen::Matrix3d& rotation);

// Base fibonacci spiral (before rotation), exposed for spectrum tests.
Eigen::MatrixXd fibonacci_sphere(int n);

}  // namespace homvar::samplers
