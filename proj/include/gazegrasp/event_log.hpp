#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gazegrasp {

enum class EventKind { GazeSample, Fixation, Intent, IntentIgnored, Parse, Feedback, Safety, StateChange };
std::string_view to_string(EventKind kind) noexcept;

struct SessionEvent {
  std::uint64_t seq = 0;
  double t = 0.0;
  EventKind kind = EventKind::GazeSample;
  nlohmann::json data;

  nlohmann::json to_json() const;
};

// Append-only, ordered by (t, seq).
class EventLog {
 public:
  const SessionEvent& append(double t, EventKind kind, nlohmann::json data);

  const std::vector<SessionEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  void clear() { events_.clear(); next_seq_ = 0; }

  // One JSON object per line.
  std::string to_jsonl() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<SessionEvent> events_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace gazegrasp
