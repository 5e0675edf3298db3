#include "ddrhc/gain_schedule.hpp"

namespace ddrhc {

void GainSchedule::set(int i, int j, int tau, Mat K, int computed_by) {
  blocks_[{tau, i, j}] = Block{std::move(K), computed_by};
}

const Mat* GainSchedule::find(int i, int j, int tau) const {
  auto it = blocks_.find({tau, i, j});
  return it == blocks_.end() ? nullptr : &it->second.K;
}

int GainSchedule::computed_by(int i, int j, int tau) const {
  auto it = blocks_.find({tau, i, j});
  return it == blocks_.end() ? -1 : it->second.computed_by;
}

bool GainSchedule::has_step(int tau) const {
  auto it = blocks_.lower_bound({tau, 0, 0});
  return it != blocks_.end() && std::get<0>(it->first) == tau;
}

std::map<AgentPair, const Mat*> GainSchedule::step_blocks(int tau) const {
  std::map<AgentPair, const Mat*> out;
  for (auto it = blocks_.lower_bound({tau, 0, 0});
       it != blocks_.end() && std::get<0>(it->first) == tau; ++it)
    out[{std::get<1>(it->first), std::get<2>(it->first)}] = &it->second.K;
  return out;
}

bool GainSchedule::respects(const Topology& t) const {
  for (const auto& [key, block] : blocks_) {
    const auto& [tau, i, j] = key;
    if (!t.has_edge(j, i, tau) && !block.K.isZero(0.0)) return false;
  }
  return true;
}

Mat GainSchedule::dense(int tau, const std::vector<int>& u_off, const std::vector<int>& x_off) const {
  Mat K = Mat::Zero(u_off.back(), x_off.back());
  for (auto it = blocks_.lower_bound({tau, 0, 0});
       it != blocks_.end() && std::get<0>(it->first) == tau; ++it) {
    const int i = std::get<1>(it->first), j = std::get<2>(it->first);
    K.block(u_off[i], x_off[j], it->second.K.rows(), it->second.K.cols()) = it->second.K;
  }
  return K;
}

}  // namespace ddrhc
