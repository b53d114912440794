#include "homvar/torus.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace homvar::torus {

using std::numbers::pi;

namespace {

double basis_norm(int d) { return std::pow(2.0 * pi, d / 2.0); }  // (2pi)^{d/2}

Eigen::Vector3i label_vec(const BlockLabel& label) {
  return {label.index[0], label.index[1], label.index[2]};
}

}  // namespace

std::vector<BlockLabel> enumerate_labels(int d, int L) {
  if (d < 1 || d > 3) throw std::invalid_argument("torus: d must be 1..3");
  if (L < 0) throw std::invalid_argument("torus: bandwidth must be >= 0");
  std::vector<BlockLabel> labels;
  auto push = [&](int a, int b, int c) {
    BlockLabel l;
    l.domain = Domain::torus;
    l.index = {a, b, c};
    labels.push_back(l);
  };
  for (int a = -L; a <= L; ++a) {
    if (d == 1) { push(a, 0, 0); continue; }
    for (int b = -L; b <= L; ++b) {
      if (d == 2) { push(a, b, 0); continue; }
      for (int c = -L; c <= L; ++c) push(a, b, c);
    }
  }
  return labels;
}

Truncation make_truncation(int L) {
  Truncation t;
  t.domain = Domain::torus;
  t.bandwidth = L;
  return t;
}

Complex BandlimitedFunction::trivial_coefficient() const {
  BlockLabel zero;
  zero.domain = Domain::torus;
  auto it = coefficients.find(zero);
  return it == coefficients.end() ? Complex(0, 0) : it->second;
}

Complex BandlimitedFunction::evaluate(const Eigen::VectorXd& p) const {
  if (p.size() != d) throw std::invalid_argument("torus evaluate: dim mismatch");
  Complex acc = 0;
  const double scale = 1.0 / basis_norm(d);
  for (const auto& [label, coeff] : coefficients) {
    double phase = 0;
    for (int i = 0; i < d; ++i) phase += label.index[i] * p(i);
    acc += coeff * Complex(std::cos(phase), std::sin(phase)) * scale;
  }
  return acc;
}

SpectralCoefficients pattern_coefficients(const Pattern& points, int L) {
  const int d = int(points.rows());
  const int N = int(points.cols());
  if (N < 1) throw std::invalid_argument("pattern_coefficients: empty pattern");
  auto labels = enumerate_labels(d, L);

  SpectralCoefficients out;
  out.domain = Domain::torus;
  out.truncation = make_truncation(L);
  const double scale = 1.0 / (double(N) * basis_norm(d));
  for (const auto& label : labels) {
    Eigen::Vector3i lam = label_vec(label);
    Complex acc = 0;
    for (int j = 0; j < N; ++j) {
      double phase = 0;
      for (int i = 0; i < d; ++i) phase += lam(i) * points(i, j);
      acc += Complex(std::cos(phase), -std::sin(phase));
    }
    out.blocks[label] = Eigen::VectorXcd::Constant(1, acc * scale);
  }
  return out;
}

BandlimitedFunction function_coefficients(
    const std::function<double(const Eigen::VectorXd&)>& f, int d, int L,
    int M) {
  if (M <= 2 * L)
    throw std::invalid_argument("function_coefficients: need M > 2L");
  BandlimitedFunction out;
  out.d = d;
  out.bandwidth = L;
  out.real_valued = true;

  // sample f on the regular M^d grid once
  const long total = long(std::pow(double(M), d));
  std::vector<double> values(total);
  Eigen::VectorXd p(d);
  const double h = 2.0 * pi / M;
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = 0; i < d; ++i) {
      p(i) = h * double(rest % M);
      rest /= M;
    }
    values[idx] = f(p);
  }

  // <f, b_lambda> via the grid quadrature: exact for bandwidth <= L < M/2
  auto labels = enumerate_labels(d, L);
  const double cell = std::pow(h, d);
  const double scale = cell / basis_norm(d);
  for (const auto& label : labels) {
    Eigen::Vector3i lam = label_vec(label);
    Complex acc = 0;
    for (long idx = 0; idx < total; ++idx) {
      long rest = idx;
      double phase = 0;
      for (int i = 0; i < d; ++i) {
        phase += lam(i) * (h * double(rest % M));
        rest /= M;
      }
      acc += values[idx] * Complex(std::cos(phase), -std::sin(phase));
    }
    out.coefficients[label] = acc * scale;
  }
  return out;
}

Complex mc_estimate(const BandlimitedFunction& f, const Pattern& points) {
  if (points.rows() != f.d)
    throw std::invalid_argument("mc_estimate: dimension mismatch");
  const int N = int(points.cols());
  if (N < 1) throw std::invalid_argument("mc_estimate: empty pattern");
  Complex acc = 0;
  for (int j = 0; j < N; ++j) acc += f.evaluate(points.col(j));
  return acc / double(N);
}

VariancePrediction torus_variance_formula(const PowerByBlock& F,
                                          const PowerByBlock& E_S) {
  if (F.domain != Domain::torus || E_S.domain != Domain::torus)
    throw std::invalid_argument("torus_variance_formula: wrong domain");
  return predict_variance(F, E_S);
}

PowerByBlock iid_expected_power(int d, int L, int N) {
  PowerByBlock out;
  out.domain = Domain::torus;
  out.truncation = make_truncation(L);
  const double flat = 1.0 / (double(N) * std::pow(2.0 * pi, d));
  for (const auto& label : enumerate_labels(d, L)) {
    BlockPower p;
    p.dim = 1.0;
    p.power = label.trivial() ? std::pow(2.0 * pi, -d) : flat;
    out.blocks[label] = p;
  }
  out.tail_known = true;  // same flat value extends to all lattice points
  return out;
}

PowerByBlock shifted_lattice_expected_power(int d, int L, int N,
                                            const Eigen::VectorXi& generator) {
  if (generator.size() != d)
    throw std::invalid_argument("shifted_lattice_expected_power: generator dim");
  for (int i = 0; i < d; ++i)
    if (std::gcd(std::abs(generator(i)), N) != 1)
      throw std::invalid_argument(
          "shifted_lattice_expected_power: generator component not coprime to N");
  PowerByBlock out;
  out.domain = Domain::torus;
  out.truncation = make_truncation(L);
  const double mass = std::pow(2.0 * pi, -d);
  for (const auto& label : enumerate_labels(d, L)) {
    long dot = 0;
    for (int i = 0; i < d; ++i) dot += long(label.index[i]) * generator(i);
    BlockPower p;
    p.dim = 1.0;
    dot %= N;
    p.power = (dot == 0) ? mass : 0.0;
    out.blocks[label] = p;
  }
  out.tail_known = true;
  return out;
}

PowerByBlock jittered_expected_power_1d(int L, int N) {
  PowerByBlock out;
  out.domain = Domain::torus;
  out.truncation = make_truncation(L);
  const double h = 2.0 * pi / N;
  for (const auto& label : enumerate_labels(1, L)) {
    BlockPower p;
    p.dim = 1.0;
    int lam = label.index[0];
    if (label.trivial()) {
      p.power = 1.0 / (2.0 * pi);
    } else {
      double x = lam * h;
      double k2 = (2.0 - 2.0 * std::cos(x)) / (x * x);  // |kappa(lambda)|^2
      bool on_comb = (std::abs(lam) % N) == 0;
      p.power = ((1.0 - k2) / N + (on_comb ? k2 : 0.0)) / (2.0 * pi);
    }
    out.blocks[label] = p;
  }
  out.tail_known = true;
  return out;
}

}  // namespace homvar::torus
