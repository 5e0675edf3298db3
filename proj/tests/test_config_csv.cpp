#include "ddrhc/config.hpp"
#include "ddrhc/csv.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ddrhc;

TEST_SUITE_BEGIN("config_csv");

namespace {

const char* kConstellationJson = R"({
  // comments are allowed in config files
  "scenario": "constellation",
  "schedule": {"Tc": 30.0, "Tt": 1.0, "H": 22, "d": 4},
  "constellation": {
    "inclination_deg": 53.0, "satellites": 40, "planes": 5, "phasing": 1,
    "semi_major_axis_km": 6921.0, "tracking_range_km": 3500.0,
    "max_in_neighborhood": 6, "max_thrust_n": 0.068,
    "specific_impulse_s": 1640.0, "initial_mass_kg": 260.0
  },
  "seeds": [1, 2],
  "output_dir": "out",
  "truth_mode": "nonlinear-mean-element",
  "periods": 12.0,
  "init_along_track_m": 2000.0,
  "init_sma_m": 500.0,
  "dt_max_s": 1240.0,
  "dt_min_s": 140.0
})";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("constellation config parses with comments") {
  const ExperimentConfig cfg = parse_config(kConstellationJson);
  CHECK(cfg.scenario == Scenario::kConstellation);
  CHECK(cfg.schedule.H == 22);
  CHECK(cfg.schedule.d == 4);
  REQUIRE(cfg.constellation.has_value());
  CHECK(cfg.constellation->total == 40);
  CHECK(cfg.constellation->a_bar == doctest::Approx(6921.0e3));
  CHECK(cfg.constellation->inclination == doctest::Approx(53.0 * M_PI / 180.0));
  CHECK(cfg.seeds == std::vector<uint64_t>{1, 2});
  CHECK(cfg.truth_mode == leo::TruthMode::kNonlinearMeanElement);
}

TEST_CASE("constellation block is required exactly for the constellation scenario") {
  CHECK_THROWS_AS(parse_config(R"({"scenario": "constellation",
      "schedule": {"Tc": 1, "Tt": 1, "H": 4, "d": 2}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "generic-network",
      "schedule": {"Tc": 1, "Tt": 1, "H": 4, "d": 2},
      "constellation": {"inclination_deg": 53.0, "satellites": 4, "planes": 2, "phasing": 1,
                        "semi_major_axis_km": 6921.0, "tracking_range_km": 100.0}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "generic-network",
      "schedule": {"Tc": 1, "Tt": 1, "H": 4, "d": 9}})"),
                  ValidationError);
}

TEST_CASE("csv writer is deterministic and keeps the header stable") {
  const std::string path_a = "/tmp/ddrhc_csv_a.csv";
  const std::string path_b = "/tmp/ddrhc_csv_b.csv";
  auto write = [](const std::string& path) {
    CsvWriter csv(path, {"step", "value"});
    for (int s = 0; s < 50; ++s)
      csv.row({static_cast<double>(s), std::sin(0.1 * s) * std::pow(10.0, s % 7 - 3)});
  };
  write(path_a);
  write(path_b);
  const std::string a = slurp(path_a), b = slurp(path_b);
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) == "step,value");
  CHECK(std::count(a.begin(), a.end(), '\n') == 51);
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, -1.5, 1.0 / 3.0, 6.9210001e6, 1.08262668e-3, -9.101e-7, 1e300}) {
    const std::string s = CsvWriter::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv row width is validated") {
  CsvWriter csv("/tmp/ddrhc_csv_w.csv", {"a", "b"});
  CHECK_THROWS_AS(csv.row({1.0}), ValidationError);
  csv.close();
  std::remove("/tmp/ddrhc_csv_w.csv");
}

TEST_SUITE_END();
