#include "ddrhc/harness.hpp"

#include <algorithm>

namespace ddrhc {

RoundHarness::RoundHarness(int unit_count, LinkPredicate allowed, int max_rounds)
    : unit_count_(unit_count),
      max_rounds_(max_rounds),
      allowed_(std::move(allowed)),
      staged_(unit_count),
      deliverable_(unit_count),
      sent_this_round_(unit_count, 0),
      bytes_this_round_(unit_count, 0) {
  if (unit_count <= 0) throw ValidationError("harness needs at least one unit");
}

void RoundHarness::post(Message m) {
  if (round_ >= max_rounds_)
    throw SchedulingError("harness round budget of " + std::to_string(max_rounds_) +
                          " transmission rounds is exhausted");
  if (m.from < 0 || m.from >= unit_count_ || m.to < 0 || m.to >= unit_count_)
    throw ValidationError("message endpoint out of range");
  if (m.from == m.to)
    throw ProtocolError("self-addressed message from unit " + std::to_string(m.from));
  if (allowed_ && !allowed_(m.from, m.to, round_))
    throw ProtocolError("link " + std::to_string(m.from) + "->" + std::to_string(m.to) +
                        " is outside the coupling graph at round " + std::to_string(round_));
  m.round = round_;
  const size_t bytes = message_bytes(m);
  if (trace_enabled_) trace_.push_back({round_, m.from, m.to, m.kind, bytes});
  ++stats_.messages;
  stats_.total_bytes += bytes;
  sent_this_round_[m.from] += 1;
  bytes_this_round_[m.from] += bytes;
  stats_.max_unit_round_sent = std::max(stats_.max_unit_round_sent, sent_this_round_[m.from]);
  stats_.max_unit_round_bytes = std::max(stats_.max_unit_round_bytes, bytes_this_round_[m.from]);
  staged_[m.to].push_back(std::move(m));
}

void RoundHarness::advance() {
  for (int u = 0; u < unit_count_; ++u) {
    auto& in = staged_[u];
    std::stable_sort(in.begin(), in.end(), [](const Message& a, const Message& b) {
      return std::tie(a.from, a.kind) < std::tie(b.from, b.kind);
    });
    deliverable_[u] = std::move(in);
    in.clear();
  }
  std::fill(sent_this_round_.begin(), sent_this_round_.end(), 0);
  std::fill(bytes_this_round_.begin(), bytes_this_round_.end(), 0);
  ++round_;
  stats_.rounds = round_;
}

std::vector<Message> RoundHarness::collect(int unit) {
  if (unit < 0 || unit >= unit_count_) throw ValidationError("unit index out of range");
  auto out = std::move(deliverable_[unit]);
  deliverable_[unit].clear();
  return out;
}

std::vector<std::vector<Message>> round_exchange(RoundHarness& h,
                                                 std::vector<std::vector<Message>> outboxes) {
  for (auto& box : outboxes)
    for (auto& m : box) h.post(std::move(m));
  h.advance();
  std::vector<std::vector<Message>> inboxes(h.unit_count());
  for (int u = 0; u < h.unit_count(); ++u) inboxes[u] = h.collect(u);
  return inboxes;
}

}  // namespace ddrhc
