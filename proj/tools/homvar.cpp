#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homvar/group.hpp"
#include "homvar/harness.hpp"
#include "homvar/io.hpp"
#include "homvar/rng.hpp"

using namespace homvar;
using io::Json;

namespace {

// deterministic complex test vectors for the representation identities
Eigen::VectorXcd test_vector(int dim, std::uint64_t a, std::uint64_t b) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) {
    double re = 2.0 * rng::uniform(0x766572696679ULL, a, b, rng::slot_coord,
                                   std::uint64_t(2 * i)) -
                1.0;
    double im = 2.0 * rng::uniform(0x766572696679ULL, a, b, rng::slot_coord,
                                   std::uint64_t(2 * i + 1)) -
                1.0;
    v(i) = Complex(re, im);
  }
  return v;
}

std::string fmt_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

int run_verify_group(const std::string& selector, double tol) {
  auto catalog = builtin_group_catalog();
  bool found = false;
  bool all_pass = true;
  std::printf("%-6s %-8s %-26s %-22s %-22s %-9s %s\n", "group", "irrep",
              "identity", "value", "reference", "abs_err", "status");
  std::uint64_t entry_index = 0;
  for (const auto& entry : catalog) {
    ++entry_index;
    if (selector != "all" && entry.group->name != selector) continue;
    found = true;
    const double order = entry.group->order;
    for (size_t i = 0; i < entry.irreps.size(); ++i) {
      const UnitaryRep& rep = entry.irreps[i];
      auto row = [&](const char* identity, Complex value, Complex ref) {
        double err = std::abs(value - ref);
        bool ok = err <= tol * (1.0 + std::abs(ref));
        all_pass = all_pass && ok;
        std::printf("%-6s %-8s %-26s %-22s %-22s %-9.2e %s\n",
                    entry.group->name.c_str(), rep.name.c_str(), identity,
                    fmt_complex(value).c_str(), fmt_complex(ref).c_str(), err,
                    ok ? "PASS" : "FAIL");
      };
      const std::uint64_t tag = entry_index * 64 + i;
      Eigen::VectorXcd x = test_vector(rep.dim, tag, 0);
      Eigen::VectorXcd y = test_vector(rep.dim, tag, 1);
      Eigen::VectorXcd v = test_vector(rep.dim, tag, 2);
      Eigen::VectorXcd w = test_vector(rep.dim, tag, 3);

      Complex lhs = schur_bilinear_average(rep, x, y, v, w);
      // Lemma-1 right side: <x,v> conj(<y,w>) / dim, inner products linear in
      // the first argument
      Complex rhs = v.dot(x) * std::conj(w.dot(y)) / double(rep.dim);
      row("schur-average", lhs, rhs);

      if (entry.irreps.size() > 1) {
        const UnitaryRep& other = entry.irreps[(i + 1) % entry.irreps.size()];
        Eigen::VectorXcd v2 = test_vector(other.dim, tag, 4);
        Eigen::VectorXcd w2 = test_vector(other.dim, tag, 5);
        Complex cross = cross_rep_average(rep, other, x, y, v2, w2);
        row("cross-rep-average", cross, Complex(0.0, 0.0));
      }

      row("character-norm", Complex(character_norm(rep), 0.0),
          Complex(order, 0.0));

      Eigen::MatrixXcd M = corollary_coefficient_orthogonality(rep, v);
      Eigen::MatrixXcd expected = (order / double(rep.dim)) * v.squaredNorm() *
                                  Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
      double dev = (M - expected).cwiseAbs().maxCoeff();
      row("coefficient-orthogonality", Complex(dev, 0.0), Complex(0.0, 0.0));
    }
  }
  if (!found) {
    std::fprintf(stderr, "unknown group: %s\n", selector.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int workers = 0;
  bool dry_run = false;
};

bool needs_integrand(const std::string& command) {
  return command == "predict" || command == "simulate" || command == "compare";
}

int run_experiment(const std::string& command, const CommonOpts& opt,
                   bool has_seed, bool has_workers) {
  harness::ExperimentConfig cfg;
  try {
    std::ifstream in(opt.config_path);
    if (!in) {
      std::fprintf(stderr, "cannot open config file %s\n",
                   opt.config_path.c_str());
      return 2;
    }
    Json raw = Json::parse(in);
    if (needs_integrand(command) && !raw.contains("integrand")) {
      std::fprintf(stderr, "config has no integrand; %s needs one\n",
                   command.c_str());
      return 2;
    }
    cfg = io::parse_config(raw);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "bad JSON in %s: %s\n", opt.config_path.c_str(),
                 e.what());
    return 2;
  }
  if (has_seed) cfg.seed = opt.seed;
  if (has_workers) cfg.workers = opt.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  if (opt.dry_run) {
    std::printf("config OK: %s on %s, n=%d, realizations=%lld, seed=%llu\n",
                samplers::kind_name(cfg.sampler.kind).c_str(),
                domain_name(cfg.domain).c_str(), cfg.sampler.n,
                cfg.realizations,
                static_cast<unsigned long long>(cfg.seed));
    return 0;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    io::OutputRecorder rec(opt.out_dir);
    int exit_code = 0;

    if (command == "predict") {
      VariancePrediction pred = harness::predict(cfg);
      rec.write("prediction.json", io::prediction_to_json(pred).dump(2) + "\n");
      rec.write("prediction.csv", io::contributions_csv(pred));
      std::printf("predicted variance %.10e (se %.3e)%s\n", pred.variance,
                  pred.se, pred.formal ? " [FORMAL]" : "");
    } else if (command == "simulate") {
      harness::EmpiricalStatistics emp = harness::empirical_mc_statistics(cfg);
      rec.write("empirical.json", io::empirical_to_json(emp).dump(2) + "\n");
      std::printf("empirical mean %.10e%+.3ei  variance %.10e (se %.3e)\n",
                  emp.mean.real(), emp.mean.imag(), emp.variance,
                  emp.se_variance);
    } else if (command == "compare") {
      harness::VarianceReport rep = harness::compare(cfg);
      rec.write("report.json", io::report_to_json(rep).dump(2) + "\n");
      rec.write("report.csv", io::contributions_csv(rep.prediction));
      std::printf(
          "predicted %.10e  empirical %.10e  z_var %.3f  z_mean %.3f  "
          "tail %.2f%%  %s%s\n",
          rep.prediction.variance, rep.empirical.variance, rep.z_variance,
          rep.z_mean, 100.0 * rep.tail_fraction, rep.pass ? "PASS" : "FAIL",
          rep.formal ? " [FORMAL]" : "");
      exit_code = rep.pass ? 0 : 1;
    } else {  // spectrum
      if (cfg.domain == Domain::euclidean_shell) {
        euclidean::RadialSpectrum s =
            cfg.spectrum == harness::SpectrumSource::analytic
                ? harness::analytic_expected_radial_power(cfg)
                : harness::estimate_expected_radial_power(cfg);
        rec.write("spectrum.json", io::radial_to_json(s).dump(2) + "\n");
        rec.write("spectrum.csv", io::radial_csv(s));
        std::printf("wrote %d shells\n", s.shells() + 1);
      } else {
        PowerByBlock p = cfg.spectrum == harness::SpectrumSource::analytic
                             ? harness::analytic_expected_power(cfg)
                             : harness::estimate_expected_power(cfg);
        rec.write("spectrum.json", io::power_to_json(p).dump(2) + "\n");
        rec.write("spectrum.csv", io::power_csv(p));
        std::printf("wrote %zu blocks\n", p.blocks.size());
      }
    }

    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    Json manifest = io::make_manifest(command, io::config_to_json(cfg),
                                      cfg.seed, cfg.workers, ms, rec.entries());
    rec.write("manifest.json", manifest.dump(2) + "\n");
    return exit_code;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral variance analysis for homogeneous Monte Carlo"};
  app.require_subcommand(1);

  std::string group_selector = "all";
  double group_tol = 1e-9;
  CLI::App* verify = app.add_subcommand(
      "verify-group", "check representation-averaging identities");
  verify->add_option("--group", group_selector,
                     "catalog group name, or \"all\"");
  verify->add_option("--tolerance", group_tol, "absolute/relative tolerance");

  CommonOpts opt;
  std::vector<CLI::Option*> seed_opts, worker_opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required();
    seed_opts.push_back(
        sub->add_option("--seed", opt.seed, "override config seed"));
    worker_opts.push_back(
        sub->add_option("--workers", opt.workers, "override worker count"));
    sub->add_option("--out", opt.out_dir, "output directory (default: out)");
    sub->add_flag("--dry-run", opt.dry_run,
                  "validate the config and exit without computing");
  };
  CLI::App* predict = app.add_subcommand(
      "predict", "closed-form variance prediction from expected spectra");
  add_common(predict);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "empirical mean/variance over many realizations");
  add_common(simulate);
  CLI::App* compare = app.add_subcommand(
      "compare", "prediction vs empirical variance with z-scores");
  add_common(compare);
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "expected sampler power spectrum (analytic or estimated)");
  add_common(spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  bool has_seed = false, has_workers = false;
  for (auto* o : seed_opts) has_seed = has_seed || o->count() > 0;
  for (auto* o : worker_opts) has_workers = has_workers || o->count() > 0;

  if (app.got_subcommand(verify))
    return run_verify_group(group_selector, group_tol);
  if (app.got_subcommand(predict))
    return run_experiment("predict", opt, has_seed, has_workers);
  if (app.got_subcommand(simulate))
    return run_experiment("simulate", opt, has_seed, has_workers);
  if (app.got_subcommand(compare))
    return run_experiment("compare", opt, has_seed, has_workers);
  return run_experiment("spectrum", opt, has_seed, has_workers);
}
