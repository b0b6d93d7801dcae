// gazegrasp: replay, serve, validate, and author gaze-driven assist sessions.
#include "gazegrasp/config.hpp"
#include "gazegrasp/grammar.hpp"
#include "gazegrasp/scene.hpp"
#include "gazegrasp/scripted_user.hpp"
#include "gazegrasp/server.hpp"
#include "gazegrasp/session.hpp"
#include "gazegrasp/trace.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <pthread.h>
#include <thread>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw gazegrasp::Error("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

void print_summary(const gazegrasp::SessionReport& report) {
  for (const auto& t : report.tasks)
    std::cout << (t.completed ? "done " : "open ") << "attempts=" << t.attempts
              << " first_attempt=" << (t.first_attempt_success ? "yes" : "no") << "  " << t.label << "\n";
  std::cout << report.first_attempt_successes() << "/" << report.tasks.size()
            << " tasks succeeded on first attempt (sim " << report.sim_time << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaze-driven assistive reach-and-grasp simulator"};
  app.require_subcommand(1);

  std::string config_path, trace_path, report_path, log_path, scene_path, grammar_path, script_path, out_path;
  unsigned short port = 8080;

  auto* simulate = app.add_subcommand("simulate", "Replay a recorded gaze trace headless");
  simulate->add_option("--config", config_path, "Session config")->required();
  simulate->add_option("--trace", trace_path, "Gaze trace (JSON lines)")->required();
  simulate->add_option("--report", report_path, "Where to write the session report")->required();
  simulate->add_option("--log", log_path, "Where to write the event log");

  auto* serve = app.add_subcommand("serve", "Run a live session over WebSocket");
  serve->add_option("--config", config_path, "Session config")->required();
  serve->add_option("--port", port, "TCP port")->required();

  auto* validate = app.add_subcommand("validate", "Check a scene (and grammar) file");
  validate->add_option("--scene", scene_path, "Scene file")->required();
  validate->add_option("--grammar", grammar_path, "Grammar file");

  auto* author = app.add_subcommand("author", "Record a gaze trace from a scripted virtual user");
  author->add_option("--config", config_path, "Session config")->required();
  author->add_option("--script", script_path, "Gaze script")->required();
  author->add_option("--out", out_path, "Trace output")->required();
  author->add_option("--log", log_path, "Where to write the event log");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto scene = gazegrasp::load_scene_file(scene_path);
      std::cout << "scene ok: " << scene.objects.size() << " objects\n";
      if (!grammar_path.empty()) {
        gazegrasp::ActionGrammar::load_file(grammar_path);
        std::cout << "grammar ok\n";
      }
      return kExitOk;
    }
    if (*simulate) {
      auto cfg = gazegrasp::load_session_config(config_path);
      cfg.mode = gazegrasp::ReplayMode{trace_path};
      const auto result = gazegrasp::run_replay(cfg);
      write_json(report_path, result.report.to_json());
      if (!log_path.empty()) result.log.write(log_path);
      print_summary(result.report);
      return kExitOk;
    }
    if (*author) {
      const auto cfg = gazegrasp::load_session_config(config_path);
      const auto authored = gazegrasp::author_trace(cfg, gazegrasp::load_gaze_script(script_path));
      gazegrasp::write_trace(out_path, authored.samples);
      if (!log_path.empty()) authored.result.log.write(log_path);
      print_summary(authored.result.report);
      return kExitOk;
    }
    if (*serve) {
      auto cfg = gazegrasp::load_session_config(config_path);
      cfg.mode = gazegrasp::LiveMode{port};
      // Signals are taken synchronously by a watcher thread; workers inherit the mask.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      gazegrasp::LiveServer server(std::move(cfg), port);
      server.start();
      std::thread([&server, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
      }).detach();
      std::cout << "serving on ws://0.0.0.0:" << server.port() << "\n" << std::flush;
      server.wait();
      return kExitOk;
    }
  } catch (const gazegrasp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const gazegrasp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
