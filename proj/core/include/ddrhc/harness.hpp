#pragma once

#include "ddrhc/messages.hpp"
#include "ddrhc/types.hpp"

#include <functional>
#include <limits>

namespace ddrhc {

struct TraceRow {
  int round;
  int from;
  int to;
  MsgKind kind;
  size_t bytes;
};

struct HarnessStats {
  int rounds = 0;
  size_t messages = 0;
  size_t total_bytes = 0;
  int max_unit_round_sent = 0;       // max over (unit, round) of messages sent
  size_t max_unit_round_bytes = 0;   // max over (unit, round) of bytes sent
};

/// Deterministic round-based message exchange. Messages posted during round r
/// become visible exactly at round r+1; nothing is consumed in the round it
/// was sent. Link-restricted at the protocol level: a post whose (from, to)
/// the predicate rejects raises ProtocolError.
class RoundHarness {
 public:
  using LinkPredicate = std::function<bool(int from, int to, int round)>;

  explicit RoundHarness(int unit_count, LinkPredicate allowed = nullptr,
                        int max_rounds = std::numeric_limits<int>::max());

  int round() const { return round_; }
  int unit_count() const { return unit_count_; }

  /// Stages a message for delivery next round. Throws SchedulingError when
  /// the transmission-round budget (max_rounds) is already spent.
  void post(Message m);
  /// Ends the current round.
  void advance();
  /// Messages delivered to `unit` for the current round (posted last round),
  /// ordered by sender then kind. Moves them out.
  std::vector<Message> collect(int unit);

  void set_trace_enabled(bool on) { trace_enabled_ = on; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  const HarnessStats& stats() const { return stats_; }

 private:
  int unit_count_ = 0;
  int round_ = 0;
  int max_rounds_ = 0;
  LinkPredicate allowed_;
  std::vector<std::vector<Message>> staged_;     // posted this round, per receiver
  std::vector<std::vector<Message>> deliverable_;  // visible this round, per receiver
  bool trace_enabled_ = true;
  std::vector<TraceRow> trace_;
  HarnessStats stats_;
  std::vector<int> sent_this_round_;
  std::vector<size_t> bytes_this_round_;
};

/// One full exchange: posts every outbox (in unit order), closes the round,
/// and returns the inboxes visible in the new round.
std::vector<std::vector<Message>> round_exchange(RoundHarness& h,
                                                 std::vector<std::vector<Message>> outboxes);

}  // namespace ddrhc
