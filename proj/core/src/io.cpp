#include "ddrhc/io.hpp"

#include "ddrhc/csv.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ddrhc {

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
}

}  // namespace

Mat load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_row(line));
    if (rows.back().size() != rows.front().size())
      throw ValidationError("ragged matrix rows in " + path);
  }
  if (rows.empty()) throw ValidationError("no matrix rows in " + path);
  Mat m(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void save_matrix_csv(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << CsvWriter::format_double(m(r, c));
    }
    out << '\n';
  }
}

Topology load_topology_json(const std::string& path) {
  const nlohmann::json j = load_json(path);
  const int n = j.at("agents").get<int>();
  auto parse_edges = [](const nlohmann::json& arr) {
    Topology::EdgeList edges;
    for (const auto& e : arr) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return edges;
  };
  if (j.contains("timeline")) {
    std::vector<Topology::EdgeList> steps;
    for (const auto& step : j.at("timeline")) steps.push_back(parse_edges(step));
    return Topology::timeline_graph(n, std::move(steps));
  }
  return Topology::static_graph(n, parse_edges(j.value("edges", nlohmann::json::array())));
}

ModelDims load_dims_json(const std::string& path) {
  const nlohmann::json j = load_json(path);
  ModelDims d;
  d.state_dims = j.at("state_dims").get<std::vector<int>>();
  d.input_dims = j.at("input_dims").get<std::vector<int>>();
  if (d.state_dims.size() != d.input_dims.size())
    throw ValidationError("state_dims and input_dims disagree in " + path);
  return d;
}

void export_gains_csv(const std::string& path, const GainSchedule& gains) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << "# gain schedule window_start=" << gains.window_start() << " horizon="
      << gains.horizon() << " used_prefix=" << gains.used_prefix() << '\n';
  for (const auto& [key, block] : gains) {
    const auto& [tau, i, j] = key;
    out << "# block," << i << ',' << j << ',' << tau << ',' << block.computed_by << '\n';
    for (int r = 0; r < block.K.rows(); ++r) {
      for (int c = 0; c < block.K.cols(); ++c) {
        if (c) out << ',';
        out << CsvWriter::format_double(block.K(r, c));
      }
      out << '\n';
    }
  }
}

GainSchedule import_gains_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# gain schedule", 0) != 0)
    throw ValidationError(path + " is not a gain schedule export");
  int window_start = 0, horizon = 0, used_prefix = 0;
  if (std::sscanf(line.c_str(), "# gain schedule window_start=%d horizon=%d used_prefix=%d",
                  &window_start, &horizon, &used_prefix) != 3)
    throw ValidationError("malformed gain schedule header in " + path);
  GainSchedule gains(window_start, horizon, used_prefix);

  int i = 0, j = 0, tau = 0, by = -1;
  std::vector<std::vector<double>> rows;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    if (rows.empty()) throw ValidationError("empty gain block in " + path);
    Mat K(rows.size(), rows.front().size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows[r].size(); ++c) K(r, c) = rows[r][c];
    gains.set(i, j, tau, std::move(K), by);
    rows.clear();
  };
  while (std::getline(in, line)) {
    if (line.rfind("# block,", 0) == 0) {
      flush();
      if (std::sscanf(line.c_str(), "# block,%d,%d,%d,%d", &i, &j, &tau, &by) != 4)
        throw ValidationError("malformed block header in " + path);
      open = true;
    } else if (!line.empty()) {
      rows.push_back(parse_row(line));
    }
  }
  flush();
  return gains;
}

void export_cost_to_go_csv(const std::string& path, const CostToGo& ctg) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << "# cost to go window_start=" << ctg.window_start << " horizon=" << ctg.horizon << '\n';
  for (int tau = ctg.window_start; tau <= ctg.window_start + ctg.horizon; ++tau) {
    out << "# step," << tau << '\n';
    const Mat& P = ctg.at(tau);
    for (int r = 0; r < P.rows(); ++r) {
      for (int c = 0; c < P.cols(); ++c) {
        if (c) out << ',';
        out << CsvWriter::format_double(P(r, c));
      }
      out << '\n';
    }
  }
}

}  // namespace ddrhc
