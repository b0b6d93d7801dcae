#include "gazegrasp/event_log.hpp"

#include "gazegrasp/geometry.hpp"

#include <fstream>

namespace gazegrasp {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::GazeSample: return "GazeSample";
    case EventKind::Fixation: return "Fixation";
    case EventKind::Intent: return "Intent";
    case EventKind::IntentIgnored: return "IntentIgnored";
    case EventKind::Parse: return "Parse";
    case EventKind::Feedback: return "Feedback";
    case EventKind::Safety: return "Safety";
    case EventKind::StateChange: return "StateChange";
  }
  return "?";
}

nlohmann::json SessionEvent::to_json() const {
  return {{"seq", seq}, {"t", t}, {"kind", to_string(kind)}, {"data", data}};
}

const SessionEvent& EventLog::append(double t, EventKind kind, nlohmann::json data) {
  if (!events_.empty() && t < events_.back().t) throw ProtocolError("event log is append-only in time order");
  events_.push_back({next_seq_++, t, kind, std::move(data)});
  return events_.back();
}

std::string EventLog::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

void EventLog::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << to_jsonl();
}

}  // namespace gazegrasp
