#pragma once

#include "ddrhc/centralized.hpp"
#include "ddrhc/gain_schedule.hpp"
#include "ddrhc/topology.hpp"

#include <string>

namespace ddrhc {

// Fixture and cross-check I/O. Matrices travel as plain CSV; topologies and
// model dimensions as JSON; block sequences as sectioned CSV (one `# block`
// header line per block followed by its rows).

Mat load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Mat& m);

/// {"agents": N, "edges": [[j, i], ...]} or {"agents": N, "timeline": [[[j, i], ...], ...]}.
Topology load_topology_json(const std::string& path);

/// Dimensions sidecar: {"state_dims": [...], "input_dims": [...]}.
struct ModelDims {
  std::vector<int> state_dims;
  std::vector<int> input_dims;
};
ModelDims load_dims_json(const std::string& path);

/// One section per block: `# block,<i>,<j>,<tau>,<computed_by>` then the rows.
void export_gains_csv(const std::string& path, const GainSchedule& gains);
GainSchedule import_gains_csv(const std::string& path);

/// One section per step: `# step,<tau>` then the symmetric matrix rows.
void export_cost_to_go_csv(const std::string& path, const CostToGo& ctg);

}  // namespace ddrhc
