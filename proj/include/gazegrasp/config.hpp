#pragma once

#include "gazegrasp/executor.hpp"
#include "gazegrasp/gaze.hpp"
#include "gazegrasp/grammar.hpp"
#include "gazegrasp/intent.hpp"
#include "gazegrasp/scene.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <variant>

namespace gazegrasp {

struct ReplayMode {
  std::filesystem::path trace;
};

struct LiveMode {
  unsigned short port = 0;
};

struct SessionConfig {
  Scene scene;
  ActionGrammar grammar = ActionGrammar::dining_table();
  CameraModel camera;
  FixationConfig fixation;
  IntentConfig intent;
  ArmConfig arm;
  ExecutorLimits limits;
  FaultConfig faults;
  double dt = 1.0 / 60.0;
  bool deterministic = true;  // replay-mode logs omit wall-clock fields
  std::variant<ReplayMode, LiveMode> mode;

  void validate() const;  // throws ValidationError
};

// Paths inside the document ("scene", "grammar") resolve against `base_dir`.
SessionConfig session_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
SessionConfig load_session_config(const std::filesystem::path& path);

CameraModel camera_from_json(const nlohmann::json& doc);
nlohmann::json camera_to_json(const CameraModel& camera);
FaultConfig faults_from_json(const nlohmann::json& doc);

}  // namespace gazegrasp
