#include "homvar/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homvar {

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::torus: return "torus";
    case Domain::sphere: return "sphere";
    case Domain::euclidean_shell: return "euclidean";
  }
  return "?";
}

Domain domain_from_name(const std::string& s) {
  if (s == "torus") return Domain::torus;
  if (s == "sphere") return Domain::sphere;
  if (s == "euclidean") return Domain::euclidean_shell;
  throw std::invalid_argument("unknown domain: " + s);
}

std::string label_name(const BlockLabel& label) {
  switch (label.domain) {
    case Domain::torus: {
      std::string s = "(" + std::to_string(label.index[0]);
      s += "," + std::to_string(label.index[1]);
      s += "," + std::to_string(label.index[2]) + ")";
      return s;
    }
    case Domain::sphere:
      return "l=" + std::to_string(label.index[0]);
    case Domain::euclidean_shell:
      return "shell" + std::to_string(label.index[0]);
  }
  return "?";
}

double block_dim(const BlockLabel& label) {
  switch (label.domain) {
    case Domain::torus: return 1.0;
    case Domain::sphere: return 2.0 * label.index[0] + 1.0;
    case Domain::euclidean_shell:
      throw std::logic_error("euclidean shells carry explicit sizes");
  }
  return 1.0;
}

PowerByBlock power_from_coefficients(const SpectralCoefficients& c) {
  PowerByBlock out;
  out.domain = c.domain;
  out.truncation = c.truncation;
  for (const auto& [label, coeffs] : c.blocks) {
    BlockPower p;
    p.power = coeffs.squaredNorm();
    p.dim = block_dim(label);
    out.blocks[label] = p;
  }
  return out;
}

Complex predict_expected(Complex w_trivial, Complex mean_sampler_trivial) {
  return w_trivial * std::conj(mean_sampler_trivial);
}

VariancePrediction predict_variance(const PowerByBlock& integrand,
                                    const PowerByBlock& sampler_expected) {
  if (integrand.domain != sampler_expected.domain)
    throw std::invalid_argument("predict_variance: domain mismatch");
  if (!(integrand.truncation == sampler_expected.truncation))
    throw std::invalid_argument("predict_variance: truncation mismatch");

  VariancePrediction pred;
  double max_sampler_power = 0.0;
  double se2 = 0.0;
  for (const auto& [label, pf] : integrand.blocks) {
    auto it = sampler_expected.blocks.find(label);
    if (it == sampler_expected.blocks.end()) {
      if (pf.power != 0.0 && !label.trivial())
        throw std::invalid_argument("predict_variance: sampler spectrum missing block " +
                                    label_name(label));
      continue;
    }
    const BlockPower& ps = it->second;
    if (label.trivial()) continue;  // Lambda \ {0}, structural exclusion
    max_sampler_power = std::max(max_sampler_power, ps.power);
    BlockContribution bc;
    bc.label = label;
    bc.power_integrand = pf.power;
    bc.power_sampler = ps.power;
    bc.se_sampler = ps.se;
    bc.dim = pf.dim;
    bc.contribution = pf.power * ps.power / pf.dim;
    pred.variance += bc.contribution;
    se2 += (pf.power / pf.dim) * (pf.power / pf.dim) * ps.se * ps.se;
    pred.contributions.push_back(bc);
  }
  // also track sampler powers at blocks the integrand lists as zero
  for (const auto& [label, ps] : sampler_expected.blocks)
    if (!label.trivial())
      max_sampler_power = std::max(max_sampler_power, ps.power);

  pred.tail_known = integrand.tail_known;
  pred.tail_estimate = integrand.tail_known
                           ? integrand.tail_power * max_sampler_power
                           : 0.0;
  pred.se = std::sqrt(se2);
  return pred;
}

}  // namespace homvar
