#include "homvar/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homvar {

using std::numbers::pi;

Complex Integrand::evaluate(const Eigen::VectorXd& p) const {
  if (domain == Domain::sphere) {
    if (p.size() != 3) throw std::invalid_argument("integrand: expected unit vector");
    Complex acc = 0;
    Eigen::Vector3d v = p;
    for (const auto& t : sh) acc += t.coef * sphere::eval_sh(t.l, t.m, v);
    return acc;
  }
  if (p.size() != d) throw std::invalid_argument("integrand: dimension mismatch");
  double acc = constant;
  const double b = beta();
  for (const auto& t : trig) {
    double phase = 0;
    for (int i = 0; i < d; ++i) phase += b * t.k(i) * p(i);
    acc += t.cos_coef * std::cos(phase) + t.sin_coef * std::sin(phase);
  }
  return {acc, 0.0};
}

namespace {

std::map<std::pair<int, int>, Complex> sh_coeffs(const std::vector<ShTerm>& sh) {
  std::map<std::pair<int, int>, Complex> acc;
  for (const auto& t : sh) {
    if (std::abs(t.m) > t.l) throw std::invalid_argument("sh term with |m| > l");
    acc[{t.l, t.m}] += t.coef;
  }
  return acc;
}

std::map<std::array<int, 3>, Complex> trig_amplitudes(const std::vector<TrigTerm>& trig) {
  // complex amplitude c_k with the convention f = sum_k Re(c_k) cos + Im(c_k) sin
  std::map<std::array<int, 3>, Complex> acc;
  for (const auto& t : trig) {
    if (t.k == Eigen::Vector3i::Zero())
      throw std::invalid_argument("trig term with k = 0; use the constant");
    acc[{t.k(0), t.k(1), t.k(2)}] += Complex(t.cos_coef, t.sin_coef);
  }
  return acc;
}

}  // namespace

Complex Integrand::mean() const {
  if (domain == Domain::sphere) {
    Complex c0 = 0;
    for (const auto& t : sh)
      if (t.l == 0) c0 += t.coef;
    return c0 / std::sqrt(4.0 * pi);
  }
  return {constant, 0.0};
}

double Integrand::uniform_variance() const {
  if (domain == Domain::sphere) {
    double acc = 0;
    for (const auto& [lm, c] : sh_coeffs(sh))
      if (lm.first > 0) acc += std::norm(c);
    return acc / (4.0 * pi);
  }
  // amplitudes at k and -k describe the same pair of basis functions; merge them
  std::map<std::array<int, 3>, Complex> merged;
  for (const auto& [k, c] : trig_amplitudes(trig)) {
    std::array<int, 3> neg = {-k[0], -k[1], -k[2]};
    if (merged.count(neg)) {
      merged[neg] += Complex(c.real(), -c.imag());
    } else {
      merged[k] += c;
    }
  }
  double acc = 0;
  for (const auto& [k, c] : merged) acc += 0.5 * std::norm(c);
  return acc;
}

int Integrand::max_bandwidth() const {
  int L = 0;
  for (const auto& t : trig)
    L = std::max({L, std::abs(t.k(0)), std::abs(t.k(1)), std::abs(t.k(2))});
  return L;
}

int Integrand::max_degree() const {
  int L = 0;
  for (const auto& t : sh) L = std::max(L, t.l);
  return L;
}

Complex Integrand::trivial_coefficient() const {
  if (domain == Domain::sphere) {
    Complex c0 = 0;
    for (const auto& t : sh)
      if (t.l == 0) c0 += t.coef;
    return c0;
  }
  return constant * std::pow(2.0 * pi, d / 2.0);
}

PowerByBlock Integrand::torus_power(int L) const {
  if (domain != Domain::torus)
    throw std::logic_error("torus_power: integrand is not on the torus");
  const double half = std::pow(2.0 * pi, d / 2.0) / 2.0;
  std::map<BlockLabel, Complex> coeffs;
  auto label_of = [&](const Eigen::Vector3i& k) {
    BlockLabel l;
    l.domain = Domain::torus;
    l.index = {k(0), k(1), k(2)};
    return l;
  };
  for (const auto& t : trig) {
    if (t.k == Eigen::Vector3i::Zero())
      throw std::invalid_argument("trig term with k = 0; use the constant");
    coeffs[label_of(t.k)] += half * Complex(t.cos_coef, -t.sin_coef);
    coeffs[label_of(Eigen::Vector3i(-t.k))] += half * Complex(t.cos_coef, t.sin_coef);
  }
  BlockLabel zero;
  zero.domain = Domain::torus;
  coeffs[zero] += constant * std::pow(2.0 * pi, d / 2.0);

  PowerByBlock out;
  out.domain = Domain::torus;
  out.truncation = torus::make_truncation(L);
  for (const auto& label : torus::enumerate_labels(d, L)) {
    BlockPower p;
    p.dim = 1.0;
    auto it = coeffs.find(label);
    p.power = (it == coeffs.end()) ? 0.0 : std::norm(it->second);
    out.blocks[label] = p;
  }
  out.tail_known = true;
  out.tail_power = 0.0;
  for (const auto& [label, c] : coeffs) {
    int inf = std::max({std::abs(label.index[0]), std::abs(label.index[1]),
                        std::abs(label.index[2])});
    if (inf > L) out.tail_power += std::norm(c);
  }
  return out;
}

torus::BandlimitedFunction Integrand::torus_function(int L) const {
  if (domain != Domain::torus)
    throw std::logic_error("torus_function: integrand is not on the torus");
  PowerByBlock unused = torus_power(L);  // validates terms
  (void)unused;
  torus::BandlimitedFunction f;
  f.d = d;
  f.bandwidth = L;
  f.real_valued = true;
  const double half = std::pow(2.0 * pi, d / 2.0) / 2.0;
  auto add = [&](const Eigen::Vector3i& k, Complex c) {
    int inf = std::max({std::abs(k(0)), std::abs(k(1)), std::abs(k(2))});
    if (inf > L) return;
    BlockLabel l;
    l.domain = Domain::torus;
    l.index = {k(0), k(1), k(2)};
    f.coefficients[l] += c;
  };
  for (const auto& t : trig) {
    add(t.k, half * Complex(t.cos_coef, -t.sin_coef));
    add(Eigen::Vector3i(-t.k), half * Complex(t.cos_coef, t.sin_coef));
  }
  add(Eigen::Vector3i::Zero(), constant * std::pow(2.0 * pi, d / 2.0));
  return f;
}

PowerByBlock Integrand::sphere_power(int lmax) const {
  if (domain != Domain::sphere)
    throw std::logic_error("sphere_power: integrand is not on the sphere");
  PowerByBlock out;
  out.domain = Domain::sphere;
  out.truncation = sphere::make_truncation(lmax);
  for (int l = 0; l <= lmax; ++l) {
    BlockLabel label;
    label.domain = Domain::sphere;
    label.index = {l, 0, 0};
    BlockPower p;
    p.dim = 2.0 * l + 1.0;
    out.blocks[label] = p;
  }
  out.tail_known = true;
  for (const auto& [lm, c] : sh_coeffs(sh)) {
    if (lm.first <= lmax) {
      BlockLabel label;
      label.domain = Domain::sphere;
      label.index = {lm.first, 0, 0};
      out.blocks[label].power += std::norm(c);
    } else {
      out.tail_power += std::norm(c);
    }
  }
  return out;
}

}  // namespace homvar
