#include "homvar/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace homvar::io {

namespace {

using std::numbers::pi;

void check_keys(const Json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("config: unknown key \"" + it.key() +
                                  "\" in " + where);
  }
}

template <typename T>
T get_as(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument("config: missing key \"" + std::string(key) +
                                "\" in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: bad value for \"" + std::string(key) +
                                "\" in " + where + ": " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return get_as<T>(j, where, key);
}

Eigen::VectorXi int_vector(const Json& j, const std::string& where,
                           const char* key, int expected_len) {
  auto v = get_as<std::vector<int>>(j, where, key);
  if (int(v.size()) != expected_len)
    throw std::invalid_argument("config: \"" + std::string(key) + "\" in " +
                                where + " must have " +
                                std::to_string(expected_len) + " entries");
  Eigen::VectorXi out(expected_len);
  for (int i = 0; i < expected_len; ++i) out(i) = v[size_t(i)];
  return out;
}

Eigen::MatrixXd point_matrix(const Json& j, const std::string& where,
                             int coord_dim) {
  if (!j.is_array())
    throw std::invalid_argument("config: " + where +
                                " must be an array of points");
  Eigen::MatrixXd m(coord_dim, long(j.size()));
  long col = 0;
  for (const auto& p : j) {
    std::vector<double> coords;
    try {
      coords = p.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad point in " + where + ": " +
                                  e.what());
    }
    if (int(coords.size()) != coord_dim)
      throw std::invalid_argument("config: point in " + where + " must have " +
                                  std::to_string(coord_dim) + " coordinates");
    for (int i = 0; i < coord_dim; ++i) m(i, col) = coords[size_t(i)];
    ++col;
  }
  return m;
}

Integrand parse_integrand(const Json& j, Domain domain, int d, double extent) {
  check_keys(j, "integrand", {"constant", "trig", "sh"});
  Integrand f;
  f.domain = domain;
  f.d = d;
  f.extent = extent;
  if (domain == Domain::sphere) {
    if (j.contains("constant") || j.contains("trig"))
      throw std::invalid_argument(
          "config: sphere integrands use \"sh\" terms only (constant = l=0)");
  } else if (j.contains("sh")) {
    throw std::invalid_argument(
        "config: \"sh\" terms are for sphere integrands");
  }
  f.constant = get_or<double>(j, "integrand", "constant", 0.0);
  if (j.contains("trig")) {
    for (const auto& t : j.at("trig")) {
      check_keys(t, "integrand.trig[]", {"k", "cos", "sin"});
      TrigTerm term;
      Eigen::VectorXi k = int_vector(t, "integrand.trig[]", "k", d);
      for (int i = 0; i < d; ++i) term.k(i) = k(i);
      term.cos_coef = get_or<double>(t, "integrand.trig[]", "cos", 0.0);
      term.sin_coef = get_or<double>(t, "integrand.trig[]", "sin", 0.0);
      f.trig.push_back(term);
    }
  }
  if (j.contains("sh")) {
    for (const auto& t : j.at("sh")) {
      check_keys(t, "integrand.sh[]", {"l", "m", "re", "im"});
      ShTerm term;
      term.l = get_as<int>(t, "integrand.sh[]", "l");
      term.m = get_as<int>(t, "integrand.sh[]", "m");
      term.coef = Complex(get_as<double>(t, "integrand.sh[]", "re"),
                          get_or<double>(t, "integrand.sh[]", "im", 0.0));
      f.sh.push_back(term);
    }
  }
  return f;
}

// Pattern file: plain text, one point per line, space-separated coordinates.
Eigen::MatrixXd load_pattern_text(const std::string& path, int coord_dim) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open pattern file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> coords;
    double v;
    while (ls >> v) coords.push_back(v);
    if (coords.empty()) continue;
    if (int(coords.size()) != coord_dim)
      throw std::invalid_argument("pattern file " + path + " line " +
                                  std::to_string(rows.size() + 1) + ": expected " +
                                  std::to_string(coord_dim) + " coordinates");
    rows.push_back(coords);
  }
  if (rows.empty())
    throw std::invalid_argument("pattern file " + path + " has no points");
  Eigen::MatrixXd m(coord_dim, long(rows.size()));
  for (size_t col = 0; col < rows.size(); ++col)
    for (int i = 0; i < coord_dim; ++i) m(i, long(col)) = rows[col][size_t(i)];
  return m;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

harness::ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object())
    throw std::invalid_argument("config: root must be a JSON object");
  check_keys(j, "root",
             {"schema", "domain", "d", "window", "integrand", "sampler",
              "truncation", "realizations", "seed", "workers", "spectrum",
              "iid_mode"});
  const auto schema = get_as<std::string>(j, "root", "schema");
  if (schema != kConfigSchema)
    throw std::invalid_argument("config: schema \"" + schema +
                                "\" is not \"" + kConfigSchema + "\"");

  harness::ExperimentConfig c;
  try {
    c.domain = domain_from_name(get_as<std::string>(j, "root", "domain"));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  const bool is_sphere = c.domain == Domain::sphere;
  const bool is_euclid = c.domain == Domain::euclidean_shell;
  int d = get_or<int>(j, "root", "d", is_sphere ? 3 : 1);
  if (is_sphere && d != 3)
    throw std::invalid_argument("config: sphere experiments are fixed to d=3");
  if (d < 1 || d > 3)
    throw std::invalid_argument("config: d must be 1, 2, or 3");

  double extent = 2.0 * pi;
  if (is_euclid) {
    if (!j.contains("window"))
      throw std::invalid_argument("config: euclidean runs need a \"window\"");
    const Json& w = j.at("window");
    check_keys(w, "window", {"extent", "periodic"});
    extent = get_as<double>(w, "window", "extent");
    if (!(extent > 0))
      throw std::invalid_argument("config: window extent must be positive");
    c.window.d = d;
    c.window.T = extent;
    c.window.periodic = get_or<bool>(w, "window", "periodic", true);
  } else if (j.contains("window")) {
    throw std::invalid_argument("config: \"window\" applies to euclidean only");
  }

  if (j.contains("integrand"))
    c.integrand = parse_integrand(j.at("integrand"), c.domain, d, extent);
  else {
    c.integrand.domain = c.domain;
    c.integrand.d = d;
    c.integrand.extent = extent;
  }

  if (!j.contains("sampler"))
    throw std::invalid_argument("config: missing \"sampler\"");
  const Json& s = j.at("sampler");
  check_keys(s, "sampler",
             {"kind", "n", "strata", "generator", "base_pattern",
              "base_pattern_file"});
  try {
    c.sampler.kind =
        samplers::kind_from_name(get_as<std::string>(s, "sampler", "kind"));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.sampler.domain = c.domain;
  c.sampler.d = d;
  c.sampler.extent = extent;
  c.sampler.n = get_as<int>(s, "sampler", "n");
  if (s.contains("strata"))
    c.sampler.strata = int_vector(s, "sampler", "strata", d);
  if (s.contains("generator"))
    c.sampler.generator = int_vector(s, "sampler", "generator", d);
  const int coord_dim = is_sphere ? 3 : d;
  if (s.contains("base_pattern") && s.contains("base_pattern_file"))
    throw std::invalid_argument(
        "config: give base_pattern or base_pattern_file, not both");
  if (s.contains("base_pattern"))
    c.sampler.base_pattern =
        point_matrix(s.at("base_pattern"), "sampler.base_pattern", coord_dim);
  if (s.contains("base_pattern_file")) {
    const auto path = get_as<std::string>(s, "sampler", "base_pattern_file");
    c.sampler.base_pattern = load_pattern_text(path, coord_dim);
  }

  if (!j.contains("truncation"))
    throw std::invalid_argument("config: missing \"truncation\"");
  const Json& t = j.at("truncation");
  if (c.domain == Domain::torus) {
    check_keys(t, "truncation", {"bandwidth"});
    c.bandwidth = get_as<int>(t, "truncation", "bandwidth");
  } else if (is_sphere) {
    check_keys(t, "truncation", {"max_degree"});
    c.max_degree = get_as<int>(t, "truncation", "max_degree");
  } else {
    check_keys(t, "truncation",
               {"shell_spacing", "shells", "directions", "grid_m"});
    c.shell_spacing = get_as<double>(t, "truncation", "shell_spacing");
    c.shell_count = get_as<int>(t, "truncation", "shells");
    c.directions = get_as<int>(t, "truncation", "directions");
    c.grid_m = get_or<int>(t, "truncation", "grid_m", 4096);
  }

  c.realizations = get_or<long long>(j, "root", "realizations", 2);
  c.seed = get_or<std::uint64_t>(j, "root", "seed", 0);
  c.workers = get_or<int>(j, "root", "workers", 1);
  const auto spectrum =
      get_or<std::string>(j, "root", "spectrum", "analytic");
  if (spectrum == "analytic")
    c.spectrum = harness::SpectrumSource::analytic;
  else if (spectrum == "estimate")
    c.spectrum = harness::SpectrumSource::estimate;
  else
    throw std::invalid_argument(
        "config: spectrum must be \"analytic\" or \"estimate\"");
  if (j.contains("iid_mode")) {
    if (!is_euclid)
      throw std::invalid_argument(
          "config: \"iid_mode\" applies to euclidean only");
    const auto mode = get_as<std::string>(j, "root", "iid_mode");
    if (mode == "stationary")
      c.iid_mode = euclidean::IidSpectrumMode::stationary;
    else if (mode == "exact-window")
      c.iid_mode = euclidean::IidSpectrumMode::exact_window;
    else
      throw std::invalid_argument(
          "config: iid_mode must be \"stationary\" or \"exact-window\"");
  }

  c.validate();
  return c;
}

harness::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
  return parse_config(j);
}

Json config_to_json(const harness::ExperimentConfig& c) {
  Json j;
  j["schema"] = kConfigSchema;
  j["domain"] = domain_name(c.domain);
  const bool is_sphere = c.domain == Domain::sphere;
  const bool is_euclid = c.domain == Domain::euclidean_shell;
  j["d"] = is_sphere ? 3 : c.sampler.d;
  if (is_euclid)
    j["window"] = {{"extent", c.window.T}, {"periodic", c.window.periodic}};

  Json f;
  if (is_sphere) {
    Json terms = Json::array();
    for (const auto& t : c.integrand.sh)
      terms.push_back({{"l", t.l},
                       {"m", t.m},
                       {"re", t.coef.real()},
                       {"im", t.coef.imag()}});
    f["sh"] = terms;
  } else {
    f["constant"] = c.integrand.constant;
    Json terms = Json::array();
    for (const auto& t : c.integrand.trig) {
      std::vector<int> k;
      for (int i = 0; i < c.integrand.d; ++i) k.push_back(t.k(i));
      terms.push_back({{"k", k}, {"cos", t.cos_coef}, {"sin", t.sin_coef}});
    }
    f["trig"] = terms;
  }
  j["integrand"] = f;

  Json s;
  s["kind"] = samplers::kind_name(c.sampler.kind);
  s["n"] = c.sampler.n;
  if (c.sampler.strata.size() > 0) {
    std::vector<int> v(c.sampler.strata.data(),
                       c.sampler.strata.data() + c.sampler.strata.size());
    s["strata"] = v;
  }
  if (c.sampler.generator.size() > 0) {
    std::vector<int> v(c.sampler.generator.data(),
                       c.sampler.generator.data() + c.sampler.generator.size());
    s["generator"] = v;
  }
  if (c.sampler.base_pattern.size() > 0) {
    Json pts = Json::array();
    for (long col = 0; col < c.sampler.base_pattern.cols(); ++col) {
      std::vector<double> p;
      for (long row = 0; row < c.sampler.base_pattern.rows(); ++row)
        p.push_back(c.sampler.base_pattern(row, col));
      pts.push_back(p);
    }
    s["base_pattern"] = pts;
  }
  j["sampler"] = s;

  Json t;
  if (c.domain == Domain::torus) {
    t["bandwidth"] = c.bandwidth;
  } else if (is_sphere) {
    t["max_degree"] = c.max_degree;
  } else {
    t["shell_spacing"] = c.shell_spacing;
    t["shells"] = c.shell_count;
    t["directions"] = c.directions;
    t["grid_m"] = c.grid_m;
  }
  j["truncation"] = t;

  j["realizations"] = c.realizations;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["spectrum"] =
      c.spectrum == harness::SpectrumSource::analytic ? "analytic" : "estimate";
  if (is_euclid)
    j["iid_mode"] = c.iid_mode == euclidean::IidSpectrumMode::stationary
                        ? "stationary"
                        : "exact-window";
  return j;
}

Json prediction_to_json(const VariancePrediction& p) {
  Json j;
  j["schema"] = "homvar-prediction/1";
  j["expected_value"] = {{"re", p.expected_value.real()},
                         {"im", p.expected_value.imag()}};
  j["variance"] = p.variance;
  j["se"] = p.se;
  j["tail_estimate"] = p.tail_estimate;
  j["tail_known"] = p.tail_known;
  j["dc_product"] = p.dc_product;
  j["formal"] = p.formal;
  Json rows = Json::array();
  for (const auto& bc : p.contributions)
    rows.push_back({{"label", label_name(bc.label)},
                    {"dim", bc.dim},
                    {"power_integrand", bc.power_integrand},
                    {"power_sampler", bc.power_sampler},
                    {"se_sampler", bc.se_sampler},
                    {"contribution", bc.contribution}});
  j["contributions"] = rows;
  return j;
}

Json empirical_to_json(const harness::EmpiricalStatistics& e) {
  Json j;
  j["schema"] = "homvar-empirical/1";
  j["mean"] = {{"re", e.mean.real()}, {"im", e.mean.imag()}};
  j["variance"] = e.variance;
  j["se_mean"] = e.se_mean;
  j["se_variance"] = e.se_variance;
  j["realizations"] = e.realizations;
  return j;
}

Json report_to_json(const harness::VarianceReport& r) {
  Json j;
  j["schema"] = "homvar-report/1";
  j["prediction"] = prediction_to_json(r.prediction);
  j["empirical"] = empirical_to_json(r.empirical);
  j["z_mean"] = r.z_mean;
  j["z_variance"] = r.z_variance;
  j["tail_fraction"] = r.tail_fraction;
  j["formal"] = r.formal;
  j["pass"] = r.pass;
  return j;
}

Json power_to_json(const PowerByBlock& p) {
  Json j;
  j["schema"] = "homvar-spectrum/1";
  j["domain"] = domain_name(p.domain);
  Json rows = Json::array();
  for (const auto& [label, bp] : p.blocks)
    rows.push_back({{"label", label_name(label)},
                    {"dim", bp.dim},
                    {"power", bp.power},
                    {"se", bp.se}});
  j["blocks"] = rows;
  j["tail_known"] = p.tail_known;
  if (p.tail_known) j["tail_power"] = p.tail_power;
  return j;
}

Json radial_to_json(const euclidean::RadialSpectrum& s) {
  Json j;
  j["schema"] = "homvar-spectrum/1";
  j["domain"] = "euclidean";
  j["shell_spacing"] = s.dlam;
  j["directions"] = s.directions;
  Json rows = Json::array();
  for (int k = 0; k <= s.shells(); ++k)
    rows.push_back({{"lambda", s.radii(k)},
                    {"power", s.power(k)},
                    {"shell_size", s.shell_size(k)},
                    {"se", s.se(k)}});
  j["shells"] = rows;
  return j;
}

std::string contributions_csv(const VariancePrediction& p) {
  std::string out = "label,dim,power_F,power_S_hat,se,contribution\n";
  for (const auto& bc : p.contributions) {
    out += quoted(label_name(bc.label)) + "," + fmt(bc.dim) + "," +
           fmt(bc.power_integrand) + "," + fmt(bc.power_sampler) + "," +
           fmt(bc.se_sampler) + "," + fmt(bc.contribution) + "\n";
  }
  return out;
}

std::string power_csv(const PowerByBlock& p) {
  std::string out = "label,dim,power,se\n";
  for (const auto& [label, bp] : p.blocks)
    out += quoted(label_name(label)) + "," + fmt(bp.dim) + "," +
           fmt(bp.power) + "," + fmt(bp.se) + "\n";
  return out;
}

std::string radial_csv(const euclidean::RadialSpectrum& s) {
  std::string out = "lambda,power,shell_size,se\n";
  for (int k = 0; k <= s.shells(); ++k)
    out += fmt(s.radii(k)) + "," + fmt(s.power(k)) + "," +
           fmt(s.shell_size(k)) + "," + fmt(s.se(k)) + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

OutputRecorder::OutputRecorder(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputRecorder::write(const std::string& name, const std::string& bytes) {
  const std::filesystem::path path = std::filesystem::path(dir_) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
  entries_.push_back({{"file", name},
                      {"bytes", bytes.size()},
                      {"fnv64", hex64(fnv1a64(bytes))}});
}

Json make_manifest(const std::string& command, const Json& config,
                   std::uint64_t seed, int workers, double duration_ms,
                   const std::vector<Json>& outputs) {
  Json j;
  j["schema"] = "homvar-manifest/1";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["workers"] = workers;
  j["duration_ms"] = duration_ms;
  j["outputs"] = outputs;
  return j;
}

}  // namespace homvar::io
