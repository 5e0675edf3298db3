#pragma once

#include "ddrhc/types.hpp"

#include <cstdint>
#include <string>

namespace ddrhc {

/// Message kinds mirror the transmit steps of the window algorithm plus the
/// hard-real-time state transfer used at actuation.
enum class MsgKind : uint8_t {
  kTerminalH = 0,  // Step 2: terminal sqrt(Q)H products
  kStepData = 1,   // Step 4.1: per-iteration model data, forwards, gains, P blocks
  kGainExport = 2, // Step 5: first-d gains to out-neighbors
  kState = 3,      // actuation-time state transfer (not part of synthesis rounds)
};

const char* to_string(MsgKind k);

enum class ItemTag : uint8_t {
  kSqrtQH = 0,  // value = Q_a(t)^{1/2} H_{a,b}(t)
  kModelR = 1,  // value = R_a(t)
  kModelB = 2,  // value = B_a(t)
  kModelA = 3,  // value = A_a(t)
  kGain = 4,    // value = K_{a,b}(t)
  kPBlock = 5,  // value = P_{sender,(a,b)}(t), with attached empirical loss
  kStateVec = 6,
};

struct PayloadItem {
  ItemTag tag;
  int t = 0;  // discrete time index the matrix refers to
  int a = 0;  // first agent index (owner / row agent)
  int b = 0;  // second agent index where applicable
  Mat value;
  double loss = 0.0;  // kPBlock only
};

struct Message {
  int round = -1;
  int from = -1;
  int to = -1;
  MsgKind kind = MsgKind::kStepData;
  std::vector<PayloadItem> items;
};

// Byte accounting: a fixed per-message header, a fixed per-item header, and
// 8 bytes per matrix entry. Enables the O(1) complexity measurements without
// a real wire format.
inline constexpr size_t kMessageHeaderBytes = 24;
inline constexpr size_t kItemHeaderBytes = 16;
inline constexpr size_t kBytesPerEntry = 8;

size_t matrix_bytes(const Mat& m);
size_t message_bytes(const Message& m);

}  // namespace ddrhc
