#include "homvar/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "homvar/rng.hpp"

namespace homvar::samplers {

using std::numbers::pi;

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::iid_uniform: return "iid-uniform";
    case Kind::jittered_grid: return "jittered-grid";
    case Kind::shifted_lattice: return "shifted-lattice";
    case Kind::fibonacci_rotated: return "fibonacci-rotated";
    case Kind::fixed_pattern_randomized: return "fixed-pattern-randomized";
  }
  return "?";
}

Kind kind_from_name(const std::string& s) {
  if (s == "iid-uniform") return Kind::iid_uniform;
  if (s == "jittered-grid") return Kind::jittered_grid;
  if (s == "shifted-lattice") return Kind::shifted_lattice;
  if (s == "fibonacci-rotated") return Kind::fibonacci_rotated;
  if (s == "fixed-pattern-randomized") return Kind::fixed_pattern_randomized;
  throw std::invalid_argument("unknown sampler kind: " + s);
}

void SamplerSpec::validate() {
  if (n < 1) throw std::invalid_argument("sampler: N must be >= 1");
  if (domain == Domain::sphere) {
    d = 3;
    if (kind == Kind::jittered_grid || kind == Kind::shifted_lattice)
      throw std::invalid_argument("sampler: " + kind_name(kind) +
                                  " is not defined on the sphere");
  } else {
    if (d < 1 || d > 3) throw std::invalid_argument("sampler: d must be 1..3");
    if (kind == Kind::fibonacci_rotated)
      throw std::invalid_argument("sampler: fibonacci-rotated is sphere-only");
    if (domain == Domain::torus) extent = 2.0 * pi;
    if (extent <= 0) throw std::invalid_argument("sampler: window extent must be > 0");
  }
  if (kind == Kind::jittered_grid) {
    if (strata.size() == 0) {
      // default: equal per-axis counts when n is a perfect d-th power
      int root = int(std::round(std::pow(double(n), 1.0 / d)));
      long prod = 1;
      for (int i = 0; i < d; ++i) prod *= root;
      if (prod != n)
        throw std::invalid_argument(
            "sampler: jittered-grid needs explicit strata when N is not a "
            "perfect d-th power");
      strata = Eigen::VectorXi::Constant(d, root);
    }
    if (strata.size() != d)
      throw std::invalid_argument("sampler: strata dimension mismatch");
    long prod = 1;
    for (int i = 0; i < d; ++i) {
      if (strata(i) < 1) throw std::invalid_argument("sampler: strata must be >= 1");
      prod *= strata(i);
    }
    if (prod != n)
      throw std::invalid_argument("sampler: strata counts must multiply to N");
  }
  if (kind == Kind::shifted_lattice) {
    if (generator.size() == 0) generator = Eigen::VectorXi::Constant(d, 1);
    if (generator.size() != d)
      throw std::invalid_argument("sampler: generator dimension mismatch");
    for (int i = 0; i < d; ++i)
      if (std::gcd(std::abs(generator(i)), n) != 1)
        throw std::invalid_argument(
            "sampler: lattice generator component must be coprime to N");
  }
  if (kind == Kind::fixed_pattern_randomized) {
    int want_rows = (domain == Domain::sphere) ? 3 : d;
    if (base_pattern.rows() != want_rows || base_pattern.cols() != n)
      throw std::invalid_argument("sampler: base pattern must be " +
                                  std::to_string(want_rows) + " x N");
    if (domain == Domain::sphere) {
      for (int j = 0; j < n; ++j)
        if (std::abs(base_pattern.col(j).norm() - 1.0) > 1e-12)
          throw std::invalid_argument("sampler: base pattern not on the unit sphere");
    }
  }
}

Eigen::VectorXd uniform_shift(int d, double extent, std::uint64_t seed,
                              std::uint64_t realization) {
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i)
    s(i) = extent * rng::uniform(seed, realization, 0, rng::slot_shift, i);
  return s;
}

Eigen::Matrix3d uniform_rotation(std::uint64_t seed, std::uint64_t realization) {
  // subgroup-algorithm quaternion: uniform on SO(3)
  double u1 = rng::uniform(seed, realization, 0, rng::slot_rotation, 0);
  double u2 = rng::uniform(seed, realization, 0, rng::slot_rotation, 1);
  double u3 = rng::uniform(seed, realization, 0, rng::slot_rotation, 2);
  double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  double x = a * std::sin(2.0 * pi * u2);
  double y = a * std::cos(2.0 * pi * u2);
  double z = b * std::sin(2.0 * pi * u3);
  double w = b * std::cos(2.0 * pi * u3);
  return Eigen::Quaterniond(w, x, y, z).toRotationMatrix();
}

SamplePattern homogenize(const SamplePattern& base, const Eigen::VectorXd& shift,
                         double extent) {
  SamplePattern out = base;
  const int d = int(out.points.rows());
  if (shift.size() != d) throw std::invalid_argument("homogenize: shift dim");
  for (int j = 0; j < out.points.cols(); ++j)
    for (int i = 0; i < d; ++i) {
      double v = out.points(i, j) + shift(i);
      v = std::fmod(v, extent);
      if (v < 0) v += extent;
      out.points(i, j) = v;
    }
  return out;
}

SamplePattern homogenize(const SamplePattern& base, const Eigen::Matrix3d& rotation) {
  SamplePattern out = base;
  out.points = rotation * base.points;
  return out;
}

Eigen::MatrixXd fibonacci_sphere(int n) {
  Eigen::MatrixXd pts(3, n);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int j = 0; j < n; ++j) {
    double z = 1.0 - (2.0 * j + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = 2.0 * pi * j / golden;
    pts.col(j) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return pts;
}

namespace {

SamplePattern base_points(const SamplerSpec& spec, std::uint64_t seed,
                          std::uint64_t realization) {
  SamplePattern out;
  out.domain = spec.domain;
  const int n = spec.n;

  if (spec.domain == Domain::sphere) {
    out.points.resize(3, n);
    switch (spec.kind) {
      case Kind::iid_uniform:
        for (int j = 0; j < n; ++j) {
          double z = 1.0 - 2.0 * rng::uniform(seed, realization, j, rng::slot_coord, 0);
          double phi =
              2.0 * pi * rng::uniform(seed, realization, j, rng::slot_coord, 1);
          double r = std::sqrt(std::max(0.0, 1.0 - z * z));
          out.points.col(j) << r * std::cos(phi), r * std::sin(phi), z;
        }
        break;
      case Kind::fibonacci_rotated:
        out.points = fibonacci_sphere(n);
        break;
      case Kind::fixed_pattern_randomized:
        out.points = spec.base_pattern;
        break;
      default:
        throw std::logic_error("unreachable sphere kind");
    }
    return out;
  }

  const int d = spec.d;
  const double extent = spec.extent;
  out.points.resize(d, n);
  switch (spec.kind) {
    case Kind::iid_uniform:
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i)
          out.points(i, j) =
              extent * rng::uniform(seed, realization, j, rng::slot_coord, i);
      break;
    case Kind::jittered_grid: {
      for (int j = 0; j < n; ++j) {
        long rest = j;
        for (int i = 0; i < d; ++i) {
          int cell = int(rest % spec.strata(i));
          rest /= spec.strata(i);
          double h = extent / spec.strata(i);
          double u = rng::uniform(seed, realization, j, rng::slot_jitter, i);
          out.points(i, j) = h * (cell + u);
        }
      }
      break;
    }
    case Kind::shifted_lattice:
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) {
          double frac = std::fmod(double(j) * spec.generator(i) / n, 1.0);
          if (frac < 0) frac += 1.0;
          out.points(i, j) = extent * frac;
        }
      break;
    case Kind::fixed_pattern_randomized:
      out.points = spec.base_pattern;
      break;
    default:
      throw std::logic_error("unreachable torus/window kind");
  }
  return out;
}

}  // namespace

SamplePattern draw(const SamplerSpec& spec, std::uint64_t seed,
                   std::uint64_t realization) {
  SamplerSpec checked = spec;
  checked.validate();
  SamplePattern base = base_points(checked, seed, realization);
  if (checked.domain == Domain::sphere)
    return homogenize(base, uniform_rotation(seed, realization));
  return homogenize(base, uniform_shift(checked.d, checked.extent, seed, realization),
                    checked.extent);
}

}  // namespace homvar::samplers
