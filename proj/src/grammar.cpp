#include "gazegrasp/grammar.hpp"

#include "json_util.hpp"

namespace gazegrasp {

HandKind hand_kind(const HandState& state) {
  if (std::holds_alternative<HandEmpty>(state)) return HandKind::Empty;
  const auto& h = std::get<Holding>(state);
  switch (h.kind) {
    case ContainerKind::NonContainer: return HandKind::HoldingNonContainer;
    case ContainerKind::SmallContainer: return HandKind::HoldingSmallContainer;
    default: break;
  }
  throw ProtocolError("hand holds non-graspable object '" + h.object_id + "'");
}

std::string to_string(const HandState& state) {
  if (const auto* h = std::get_if<Holding>(&state)) return "Holding(" + h->object_id + ")";
  return "HandEmpty";
}

std::string_view to_string(HandKind kind) noexcept {
  switch (kind) {
    case HandKind::Empty: return "Empty";
    case HandKind::HoldingNonContainer: return "HoldingNonContainer";
    case HandKind::HoldingSmallContainer: return "HoldingSmallContainer";
  }
  return "?";
}

HandKind hand_kind_from_string(std::string_view name) {
  for (auto k : kAllHandKinds)
    if (to_string(k) == name) return k;
  throw ParseError("hand: unknown hand state '" + std::string(name) + "'");
}

std::string_view to_string(SymbolKind kind) noexcept {
  switch (kind) {
    case SymbolKind::Reach: return "Reach";
    case SymbolKind::Grasp: return "Grasp";
    case SymbolKind::Transport: return "Transport";
    case SymbolKind::Pour: return "Pour";
    case SymbolKind::Release: return "Release";
    case SymbolKind::Home: return "Home";
  }
  return "?";
}

SymbolKind symbol_kind_from_string(std::string_view name) {
  for (auto k : {SymbolKind::Reach, SymbolKind::Grasp, SymbolKind::Transport, SymbolKind::Pour, SymbolKind::Release,
                 SymbolKind::Home})
    if (to_string(k) == name) return k;
  throw ParseError("plan: unknown action symbol '" + std::string(name) + "'");
}

std::string to_string(const ActionSymbol& symbol) {
  std::string out(to_string(symbol.kind));
  if (takes_target(symbol.kind)) out += "(" + symbol.target + ")";
  return out;
}

std::string_view to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::HandOccupied: return "HandOccupied";
    case RejectReason::NothingToRelease: return "NothingToRelease";
    case RejectReason::NotGraspable: return "NotGraspable";
    case RejectReason::NoRuleApplies: return "NoRuleApplies";
  }
  return "?";
}

RejectReason reject_reason_from_string(std::string_view name) {
  for (auto r : {RejectReason::HandOccupied, RejectReason::NothingToRelease, RejectReason::NotGraspable,
                 RejectReason::NoRuleApplies})
    if (to_string(r) == name) return r;
  throw ParseError("reject: unknown reason '" + std::string(name) + "'");
}

bool plan_order_valid(std::span<const SymbolKind> seq) {
  if (seq.empty()) return false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    switch (seq[i]) {
      case SymbolKind::Grasp:
        if (i == 0 || seq[i - 1] != SymbolKind::Reach) return false;
        break;
      case SymbolKind::Pour:
      case SymbolKind::Release:
        if (i == 0 || seq[i - 1] != SymbolKind::Transport) return false;
        break;
      case SymbolKind::Home:
        if (i + 1 != seq.size()) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

bool plan_order_valid(const std::vector<ActionSymbol>& sequence) {
  std::vector<SymbolKind> kinds;
  kinds.reserve(sequence.size());
  for (const auto& s : sequence) kinds.push_back(s.kind);
  return plan_order_valid(kinds);
}

std::size_t ActionGrammar::cell(HandKind hand, ContainerKind target) {
  return static_cast<std::size_t>(hand) * 4 + static_cast<std::size_t>(target);
}

const Production& ActionGrammar::production(HandKind hand, ContainerKind target) const {
  return table_[cell(hand, target)];
}

ActionGrammar ActionGrammar::dining_table() {
  using enum SymbolKind;
  using K = ContainerKind;
  ActionGrammar g;
  auto set = [&g](HandKind h, K t, Production p) { g.table_[cell(h, t)] = std::move(p); };
  const std::vector<SymbolKind> pick{Reach, Grasp};
  const std::vector<SymbolKind> drop{Transport, Release, Home};
  const std::vector<SymbolKind> pour{Transport, Pour};

  set(HandKind::Empty, K::NonContainer, pick);
  set(HandKind::Empty, K::SmallContainer, pick);
  set(HandKind::Empty, K::LargeContainer, RejectReason::NoRuleApplies);
  set(HandKind::Empty, K::Surface, RejectReason::NoRuleApplies);

  set(HandKind::HoldingNonContainer, K::NonContainer, RejectReason::HandOccupied);
  set(HandKind::HoldingNonContainer, K::SmallContainer, RejectReason::NoRuleApplies);
  set(HandKind::HoldingNonContainer, K::LargeContainer, drop);
  set(HandKind::HoldingNonContainer, K::Surface, drop);

  set(HandKind::HoldingSmallContainer, K::NonContainer, RejectReason::HandOccupied);
  set(HandKind::HoldingSmallContainer, K::SmallContainer, RejectReason::HandOccupied);
  set(HandKind::HoldingSmallContainer, K::LargeContainer, pour);
  set(HandKind::HoldingSmallContainer, K::Surface, drop);
  return g;
}

ActionGrammar ActionGrammar::from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("grammar: expected an array of productions");
  ActionGrammar g;
  std::array<bool, kCells> seen{};
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& row = doc[i];
    const std::string where = "grammar[" + std::to_string(i) + "]";
    if (!row.is_object()) throw ParseError(where + ": expected object");
    const auto hand = hand_kind_from_string(json_util::require<std::string>(row, "hand", where));
    const auto target = container_kind_from_string(json_util::require<std::string>(row, "target", where));
    const bool has_plan = row.contains("plan");
    const bool has_reject = row.contains("reject");
    if (has_plan == has_reject) throw ParseError(where + ": exactly one of 'plan' or 'reject' required");
    Production p;
    if (has_plan) {
      const auto& arr = row.at("plan");
      if (!arr.is_array()) throw ParseError(where + ".plan: expected array");
      std::vector<SymbolKind> seq;
      for (const auto& s : arr) {
        if (!s.is_string()) throw ParseError(where + ".plan: expected symbol names");
        seq.push_back(symbol_kind_from_string(s.get<std::string>()));
      }
      if (!plan_order_valid(seq)) throw ValidationError(where + ".plan: violates action ordering constraints");
      p = std::move(seq);
    } else {
      p = reject_reason_from_string(json_util::require<std::string>(row, "reject", where));
    }
    const auto c = cell(hand, target);
    if (seen[c])
      throw ValidationError(where + ": duplicate production for (" + std::string(to_string(hand)) + ", " +
                            std::string(to_string(target)) + ")");
    seen[c] = true;
    g.table_[c] = std::move(p);
  }
  for (auto h : kAllHandKinds)
    for (auto t : kAllContainerKinds)
      if (!seen[cell(h, t)])
        throw ValidationError("grammar: no production for (" + std::string(to_string(h)) + ", " +
                              std::string(to_string(t)) + ")");
  return g;
}

ActionGrammar ActionGrammar::load_file(const std::filesystem::path& path) {
  return from_json(json_util::parse(json_util::read_file(path), "grammar"));
}

nlohmann::json ActionGrammar::to_json() const {
  auto rows = nlohmann::json::array();
  for (auto h : kAllHandKinds) {
    for (auto t : kAllContainerKinds) {
      nlohmann::json row{{"hand", to_string(h)}, {"target", to_string(t)}};
      const auto& p = production(h, t);
      if (const auto* seq = std::get_if<std::vector<SymbolKind>>(&p)) {
        auto names = nlohmann::json::array();
        for (auto k : *seq) names.push_back(to_string(k));
        row["plan"] = std::move(names);
      } else {
        row["reject"] = to_string(std::get<RejectReason>(p));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::variant<ActionPlan, RejectReason> ActionGrammar::parse(const HandState& state, const IntentEvent& intent,
                                                            const Scene& scene) const {
  const auto& target = scene.at(intent.object_id);
  const auto& p = production(hand_kind(state), target.kind());
  if (const auto* reason = std::get_if<RejectReason>(&p)) return *reason;
  ActionPlan plan;
  plan.provoking_intent = intent;
  for (auto k : std::get<std::vector<SymbolKind>>(p))
    plan.sequence.push_back({k, takes_target(k) ? target.id : std::string{}});
  return plan;
}

std::variant<ActionPlan, RejectReason> parse_action(const HandState& state, const IntentEvent& intent,
                                                    const Scene& scene) {
  static const ActionGrammar grammar = ActionGrammar::dining_table();
  return grammar.parse(state, intent, scene);
}

HandState advance_state(const HandState& state, const ExecutionFeedback& feedback, const Scene& scene) {
  const auto& sym = feedback.completed;
  const bool empty = std::holds_alternative<HandEmpty>(state);
  auto protocol = [&](const char* why) {
    return ProtocolError(to_string(sym) + " feedback while " + to_string(state) + ": " + why);
  };
  switch (sym.kind) {
    case SymbolKind::Grasp: {
      if (!empty) throw protocol("grasp is only issued empty-handed");
      if (!feedback.success) return HandEmpty{};
      const auto& obj = scene.at(sym.target);
      if (!obj.graspable()) throw protocol("target is not graspable");
      return Holding{obj.id, obj.kind()};
    }
    case SymbolKind::Release:
      if (empty) throw protocol("nothing to release");
      return feedback.success ? HandState{HandEmpty{}} : state;
    case SymbolKind::Pour:
      if (empty || std::get<Holding>(state).kind != ContainerKind::SmallContainer)
        throw protocol("pour needs a held small container");
      return state;
    case SymbolKind::Transport:
      if (empty) throw protocol("transport needs a held object");
      return state;
    case SymbolKind::Reach:
    case SymbolKind::Home:
      return state;
  }
  return state;
}

const ActionSymbol* PlanTracker::head() const {
  if (finished()) return nullptr;
  return &plan_.sequence[progress_];
}

void PlanTracker::feed(const ExecutionFeedback& feedback) {
  const auto* h = head();
  if (!h) throw ProtocolError("feedback for " + to_string(feedback.completed) + " but no action is pending");
  if (!(*h == feedback.completed))
    throw ProtocolError("feedback for " + to_string(feedback.completed) + " but pending action is " + to_string(*h));
  if (feedback.success)
    ++progress_;
  else
    aborted_ = true;
}

}  // namespace gazegrasp
