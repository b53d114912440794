#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "homvar/io.hpp"

using namespace homvar;
using io::Json;

namespace {

Json minimal_torus() {
  return Json::parse(R"({
    "schema": "homvar-config/1",
    "domain": "torus",
    "integrand": {"trig": [{"k": [1], "cos": 1.0}]},
    "sampler": {"kind": "iid-uniform", "n": 8},
    "truncation": {"bandwidth": 2}
  })");
}

Json minimal_euclid() {
  return Json::parse(R"({
    "schema": "homvar-config/1",
    "domain": "euclidean",
    "d": 1,
    "window": {"extent": 4.0},
    "integrand": {"trig": [{"k": [1], "cos": 1.0}]},
    "sampler": {"kind": "iid-uniform", "n": 8},
    "truncation": {"shell_spacing": 0.5, "shells": 6, "directions": 2},
    "iid_mode": "exact-window"
  })");
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("homvar-io-" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  harness::ExperimentConfig c = io::parse_config(minimal_torus());
  CHECK(c.domain == Domain::torus);
  CHECK(c.sampler.d == 1);
  CHECK(c.sampler.n == 8);
  CHECK(c.bandwidth == 2);
  CHECK(c.realizations == 2);
  CHECK(c.seed == 0);
  CHECK(c.workers == 1);
  CHECK(c.spectrum == harness::SpectrumSource::analytic);
  CHECK(c.integrand.trig.size() == 1);
  CHECK(c.integrand.extent == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("euclidean config wires the window through") {
  harness::ExperimentConfig c = io::parse_config(minimal_euclid());
  CHECK(c.domain == Domain::euclidean_shell);
  CHECK(c.window.T == doctest::Approx(4.0));
  CHECK(c.window.periodic);
  CHECK(c.sampler.extent == doctest::Approx(4.0));
  CHECK(c.integrand.extent == doctest::Approx(4.0));
  CHECK(c.shell_spacing == doctest::Approx(0.5));
  CHECK(c.shell_count == 6);
  CHECK(c.directions == 2);
  CHECK(c.grid_m == 4096);  // default
  CHECK(c.iid_mode == euclidean::IidSpectrumMode::exact_window);
}

TEST_CASE("unknown keys are named in the error") {
  Json bad = minimal_torus();
  bad["realisations"] = 10;
  try {
    (void)io::parse_config(bad);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("realisations") != std::string::npos);
  }

  Json nested = minimal_torus();
  nested["sampler"]["shape"] = 3;
  try {
    (void)io::parse_config(nested);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("shape") != std::string::npos);
    CHECK(std::string(e.what()).find("sampler") != std::string::npos);
  }

  Json term = minimal_torus();
  term["integrand"]["trig"][0]["q"] = 2;
  CHECK_THROWS_AS((void)io::parse_config(term), std::invalid_argument);
}

TEST_CASE("schema and domain mistakes are rejected") {
  Json bad = minimal_torus();
  bad["schema"] = "homvar-config/9";
  CHECK_THROWS_AS((void)io::parse_config(bad), std::invalid_argument);

  Json dom = minimal_torus();
  dom["domain"] = "plane";
  CHECK_THROWS_AS((void)io::parse_config(dom), std::invalid_argument);

  Json mode = minimal_torus();
  mode["iid_mode"] = "stationary";  // euclidean-only key
  CHECK_THROWS_AS((void)io::parse_config(mode), std::invalid_argument);

  Json win = minimal_torus();
  win["window"] = {{"extent", 1.0}};
  CHECK_THROWS_AS((void)io::parse_config(win), std::invalid_argument);

  Json sph = Json::parse(R"({
    "schema": "homvar-config/1",
    "domain": "sphere",
    "d": 2,
    "integrand": {"sh": [{"l": 1, "m": 0, "re": 1.0}]},
    "sampler": {"kind": "iid-uniform", "n": 8},
    "truncation": {"max_degree": 2}
  })");
  CHECK_THROWS_AS((void)io::parse_config(sph), std::invalid_argument);
  sph["d"] = 3;
  CHECK_NOTHROW((void)io::parse_config(sph));

  Json shmix = minimal_torus();
  shmix["integrand"]["sh"] = Json::array();
  CHECK_THROWS_AS((void)io::parse_config(shmix), std::invalid_argument);
}

TEST_CASE("canonical serialization round-trips") {
  for (const Json& j : {minimal_torus(), minimal_euclid()}) {
    harness::ExperimentConfig c = io::parse_config(j);
    Json canon = io::config_to_json(c);
    harness::ExperimentConfig c2 = io::parse_config(canon);
    CHECK(io::config_to_json(c2) == canon);
  }
}

TEST_CASE("inline base patterns become point matrices") {
  Json j = minimal_torus();
  j["sampler"]["kind"] = "fixed-pattern-randomized";
  j["sampler"]["n"] = 2;
  j["sampler"]["base_pattern"] = {{0.0}, {1.5}};
  harness::ExperimentConfig c = io::parse_config(j);
  REQUIRE(c.sampler.base_pattern.rows() == 1);
  REQUIRE(c.sampler.base_pattern.cols() == 2);
  CHECK(c.sampler.base_pattern(0, 1) == doctest::Approx(1.5));

  j["sampler"]["base_pattern"] = {{0.0, 1.0}, {1.5, 2.0}};  // wrong width
  CHECK_THROWS_AS((void)io::parse_config(j), std::invalid_argument);
}

TEST_CASE("pattern files are plain text, one point per line") {
  TempDir tmp;
  std::filesystem::path file = tmp.path / "points.txt";
  {
    std::ofstream out(file);
    out << "0.1 0.2\n\n0.3 0.4\n";
  }
  Json j = Json::parse(R"({
    "schema": "homvar-config/1",
    "domain": "torus",
    "d": 2,
    "integrand": {"trig": [{"k": [1, 0], "cos": 1.0}]},
    "sampler": {"kind": "fixed-pattern-randomized", "n": 2},
    "truncation": {"bandwidth": 1}
  })");
  j["sampler"]["base_pattern_file"] = file.string();
  harness::ExperimentConfig c = io::parse_config(j);
  REQUIRE(c.sampler.base_pattern.cols() == 2);
  CHECK(c.sampler.base_pattern(1, 1) == doctest::Approx(0.4));

  {
    std::ofstream out(file);
    out << "0.1 0.2\n0.3\n";
  }
  try {
    (void)io::parse_config(j);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  Json both = j;
  both["sampler"]["base_pattern"] = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS((void)io::parse_config(both), std::invalid_argument);

  j["sampler"]["base_pattern_file"] = (tmp.path / "missing.txt").string();
  CHECK_THROWS_AS((void)io::parse_config(j), std::invalid_argument);
}

TEST_CASE("fnv-1a matches its reference vectors") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("csv layouts are stable") {
  VariancePrediction p;
  BlockContribution bc;
  bc.label.domain = Domain::torus;
  bc.label.index = {1, 0, 0};
  bc.dim = 1.0;
  bc.power_integrand = 0.5;
  bc.power_sampler = 0.25;
  bc.contribution = 0.125;
  p.contributions.push_back(bc);
  std::string csv = io::contributions_csv(p);
  CHECK(csv.rfind("label,dim,power_F,power_S_hat,se,contribution\n", 0) == 0);
  CHECK(csv.find("\"(1,0,0)\",1,0.5,0.25,0,0.125\n") != std::string::npos);

  PowerByBlock pb;
  pb.domain = Domain::sphere;
  BlockLabel l;
  l.domain = Domain::sphere;
  l.index = {2, 0, 0};
  BlockPower bp;
  bp.dim = 5.0;
  bp.power = 0.75;
  pb.blocks[l] = bp;
  std::string pcsv = io::power_csv(pb);
  CHECK(pcsv.rfind("label,dim,power,se\n", 0) == 0);
  CHECK(pcsv.find("\"l=2\",5,0.75,0\n") != std::string::npos);

  euclidean::RadialSpectrum rs;
  rs.d = 1;
  rs.dlam = 0.5;
  rs.radii = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  rs.power = Eigen::VectorXd::Constant(3, 1.0);
  rs.se = Eigen::VectorXd::Zero(3);
  std::string rcsv = io::radial_csv(rs);
  CHECK(rcsv.rfind("lambda,power,shell_size,se\n", 0) == 0);
}

TEST_CASE("json artifacts carry their schemas and fields") {
  harness::VarianceReport r;
  r.prediction.variance = 0.5;
  r.z_variance = 1.0;
  Json j = io::report_to_json(r);
  CHECK(j.at("schema") == "homvar-report/1");
  CHECK(j.at("prediction").at("schema") == "homvar-prediction/1");
  CHECK(j.at("prediction").at("expected_value").contains("re"));
  CHECK(j.at("empirical").at("schema") == "homvar-empirical/1");
  CHECK(j.contains("z_mean"));
  CHECK(j.contains("tail_fraction"));
  CHECK(j.contains("pass"));

  euclidean::RadialSpectrum rs;
  rs.d = 1;
  rs.dlam = 0.5;
  rs.radii = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  rs.power = Eigen::VectorXd::Constant(3, 1.0);
  rs.se = Eigen::VectorXd::Zero(3);
  Json rj = io::radial_to_json(rs);
  CHECK(rj.at("schema") == "homvar-spectrum/1");
  CHECK(rj.at("shells").size() == 3);
}

TEST_CASE("output recorder writes files and digests them") {
  TempDir tmp;
  io::OutputRecorder rec((tmp.path / "out").string());
  rec.write("hello.txt", "payload");
  REQUIRE(rec.entries().size() == 1);
  const Json& e = rec.entries()[0];
  CHECK(e.at("file") == "hello.txt");
  CHECK(e.at("bytes") == 7);
  CHECK(e.at("fnv64") == io::hex64(io::fnv1a64("payload")));
  std::ifstream in(tmp.path / "out" / "hello.txt", std::ios::binary);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body == "payload");

  Json m = io::make_manifest("predict", Json::object(), 7, 2, 12.5,
                             rec.entries());
  CHECK(m.at("schema") == "homvar-manifest/1");
  CHECK(m.at("tool_version") == io::kToolVersion);
  CHECK(m.at("outputs").size() == 1);
}

TEST_CASE("config loading reports file problems") {
  CHECK_THROWS_AS((void)io::load_config("/nonexistent/config.json"),
                  std::invalid_argument);
  TempDir tmp;
  std::filesystem::path bad = tmp.path / "bad.json";
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS((void)io::load_config(bad.string()), std::invalid_argument);
}
