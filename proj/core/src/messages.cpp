#include "ddrhc/messages.hpp"

namespace ddrhc {

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::kTerminalH: return "terminal_h";
    case MsgKind::kStepData: return "step_data";
    case MsgKind::kGainExport: return "gain_export";
    case MsgKind::kState: return "state";
  }
  return "unknown";
}

size_t matrix_bytes(const Mat& m) { return kBytesPerEntry * static_cast<size_t>(m.size()); }

size_t message_bytes(const Message& m) {
  size_t b = kMessageHeaderBytes;
  for (const auto& item : m.items) b += kItemHeaderBytes + matrix_bytes(item.value);
  return b;
}

}  // namespace ddrhc
