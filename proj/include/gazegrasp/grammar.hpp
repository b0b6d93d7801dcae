#pragma once

#include "gazegrasp/intent.hpp"
#include "gazegrasp/scene.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gazegrasp {

struct HandEmpty {
  bool operator==(const HandEmpty&) const = default;
};

struct Holding {
  std::string object_id;
  ContainerKind kind = ContainerKind::NonContainer;
  bool operator==(const Holding&) const = default;
};

using HandState = std::variant<HandEmpty, Holding>;

// Row key of the production table.
enum class HandKind { Empty, HoldingNonContainer, HoldingSmallContainer };
inline constexpr HandKind kAllHandKinds[] = {HandKind::Empty, HandKind::HoldingNonContainer,
                                             HandKind::HoldingSmallContainer};

HandKind hand_kind(const HandState& state);
std::string to_string(const HandState& state);  // "HandEmpty" or "Holding(cup)"
std::string_view to_string(HandKind kind) noexcept;  // file spelling
HandKind hand_kind_from_string(std::string_view name);

enum class SymbolKind { Reach, Grasp, Transport, Pour, Release, Home };

constexpr bool takes_target(SymbolKind kind) noexcept {
  return kind != SymbolKind::Release && kind != SymbolKind::Home;
}
std::string_view to_string(SymbolKind kind) noexcept;
SymbolKind symbol_kind_from_string(std::string_view name);

struct ActionSymbol {
  SymbolKind kind = SymbolKind::Home;
  std::string target;  // empty for Release and Home

  bool operator==(const ActionSymbol&) const = default;
};
std::string to_string(const ActionSymbol& symbol);  // "Reach(orange)", "Release"

struct ActionPlan {
  std::vector<ActionSymbol> sequence;
  IntentEvent provoking_intent;
};

enum class RejectReason { HandOccupied, NothingToRelease, NotGraspable, NoRuleApplies };
std::string_view to_string(RejectReason reason) noexcept;
RejectReason reject_reason_from_string(std::string_view name);

struct ExecutionFeedback {
  ActionSymbol completed;
  bool success = true;
  std::string cause;  // set on failure
};

// Ordering constraints: Grasp only right after Reach; Pour and Release only right after
// Transport; Home only as the last symbol. Empty sequences are invalid.
bool plan_order_valid(std::span<const SymbolKind> sequence);
bool plan_order_valid(const std::vector<ActionSymbol>& sequence);

using Production = std::variant<std::vector<SymbolKind>, RejectReason>;

// Hand-derived production table over (hand kind x target container kind).
class ActionGrammar {
 public:
  // The dining-table grammar.
  static ActionGrammar dining_table();
  static ActionGrammar from_json(const nlohmann::json& doc);
  static ActionGrammar load_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const Production& production(HandKind hand, ContainerKind target) const;

  // Plan for acting on the intent target, or the reason no plan exists.
  // Throws DomainError if the intent names an object not in the scene.
  std::variant<ActionPlan, RejectReason> parse(const HandState& state, const IntentEvent& intent,
                                               const Scene& scene) const;

 private:
  static constexpr std::size_t kCells = 3 * 4;
  static std::size_t cell(HandKind hand, ContainerKind target);
  std::array<Production, kCells> table_;
};

std::variant<ActionPlan, RejectReason> parse_action(const HandState& state, const IntentEvent& intent,
                                                    const Scene& scene);

// Hand-state transition on execution feedback. Throws ProtocolError for feedback that the
// current hand state could not have produced (e.g. a Release while empty-handed).
HandState advance_state(const HandState& state, const ExecutionFeedback& feedback, const Scene& scene);

// Progress through one accepted plan.
class PlanTracker {
 public:
  explicit PlanTracker(ActionPlan plan) : plan_(std::move(plan)) {}

  const ActionPlan& plan() const { return plan_; }
  std::size_t progress() const { return progress_; }
  bool finished() const { return aborted_ || progress_ == plan_.sequence.size(); }
  bool aborted() const { return aborted_; }
  const ActionSymbol* head() const;

  // Accepts feedback only for the head symbol; a failure aborts the rest of the plan.
  void feed(const ExecutionFeedback& feedback);
  void abort() { aborted_ = true; }

 private:
  ActionPlan plan_;
  std::size_t progress_ = 0;
  bool aborted_ = false;
};

}  // namespace gazegrasp
