#include "ddrhc/experiment.hpp"
#include "ddrhc/io.hpp"
#include "ddrhc/verification.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ddrhc;

TEST_SUITE_BEGIN("io_experiment");

namespace {

size_t line_count(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("matrix csv round-trips") {
  const Mat m = verify::seeded_matrix(7, 7, 4, 3);
  const std::string path = "/tmp/ddrhc_io_matrix.csv";
  save_matrix_csv(path, m);
  CHECK(load_matrix_csv(path) == m);  // bitwise: writer emits round-trip doubles
  std::remove(path.c_str());
}

TEST_CASE("topology json fixtures") {
  const std::string path = "/tmp/ddrhc_io_topo.json";
  {
    std::ofstream out(path);
    out << R"({"agents": 3, "edges": [[0, 1], [1, 2]]})";
  }
  const Topology t = load_topology_json(path);
  CHECK(t.agent_count() == 3);
  CHECK(t.has_edge(0, 1, 0));
  CHECK(t.in_neighbors(2, 0) == std::vector<int>{1, 2});
  {
    std::ofstream out(path);
    out << R"({"agents": 2, "timeline": [[], [[0, 1]]]})";
  }
  const Topology tv = load_topology_json(path);
  CHECK_FALSE(tv.has_edge(0, 1, 0));
  CHECK(tv.has_edge(0, 1, 1));
  {
    std::ofstream out(path);
    out << R"({"agents": 2, "state_dims": [2, 3], "input_dims": [1, 1]})";
  }
  const ModelDims dims = load_dims_json(path);
  CHECK(dims.state_dims == std::vector<int>{2, 3});
  std::remove(path.c_str());
}

TEST_CASE("gain schedule export round-trips and carries provenance") {
  const Network net = verify::random_network(verify::covered_chain(4), 17);
  const WindowSpec w{0, 6, 2};
  RoundHarness h(net.agent_count(), window_link_predicate(net.topology, w), w.H + 2);
  const DistributedResult dist = synthesize_window_ti(net, w, h);
  const std::string path = "/tmp/ddrhc_io_gains.csv";
  export_gains_csv(path, dist.combined);
  const GainSchedule back = import_gains_csv(path);
  CHECK(back.window_start() == 0);
  CHECK(back.horizon() == 6);
  for (int tau = 0; tau < 6; ++tau)
    for (int i = 0; i < 4; ++i)
      for (int p : net.topology.out_neighbors(i, tau)) {
        const Mat* orig = dist.combined.find(p, i, tau);
        const Mat* round_tripped = back.find(p, i, tau);
        REQUIRE(orig);
        REQUIRE(round_tripped);
        CHECK(*orig == *round_tripped);
        CHECK(back.computed_by(p, i, tau) == i);  // column unit computed it
      }
  std::remove(path.c_str());
}

TEST_CASE("cost-to-go export writes one section per step") {
  const Network net = verify::random_network(verify::covered_chain(3), 19);
  const CentralizedResult res = synthesize_window(net, 0, 4);
  const std::string path = "/tmp/ddrhc_io_ctg.csv";
  export_cost_to_go_csv(path, res.cost_to_go);
  std::ifstream in(path);
  std::string line;
  int sections = 0;
  while (std::getline(in, line))
    if (line.rfind("# step,", 0) == 0) ++sections;
  CHECK(sections == 5);  // tau in [0, 4]
  std::remove(path.c_str());
}

TEST_CASE("constellation experiment artifacts honor the row-count contract") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kConstellation;
  cfg.schedule = {30.0, 1.0, 22, 4};
  leo::ConstellationConfig c;
  c.inclination = 53.0 * M_PI / 180.0;
  c.total = 40;
  c.planes = 5;
  c.phasing = 1;
  c.a_bar = 6921.0e3;
  c.tracking_range = 3500.0e3;
  cfg.constellation = c;
  cfg.periods = 0.05;  // a few steps: the contract, not the physics
  cfg.output_dir = "/tmp/ddrhc_io_run";
  cfg.trace = true;
  const ConstellationRunSummary s = run_constellation_experiment(cfg, 3, true);
  CHECK(line_count(cfg.output_dir + "/metrics_seed3.csv") == static_cast<size_t>(s.steps) + 2);
  CHECK(line_count(cfg.output_dir + "/sat0_seed3.csv") == static_cast<size_t>(s.steps) + 2);
  CHECK(line_count(cfg.output_dir + "/fleet_seed3.csv") == 41);  // header + one row per satellite
  CHECK(line_count(cfg.output_dir + "/trace_seed3.csv") > 1);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_SUITE_END();
