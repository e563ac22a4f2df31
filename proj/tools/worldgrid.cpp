// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

// worldgrid: command-line front end of the testbed simulator.
//
//   worldgrid [--scenario FILE] [--seed N] [--server HOST:PORT] COMMAND ...
//   worldgrid run SCENARIO --seed N --script FILE [--lb-log F] [--event-log F] [--via-http]
//   worldgrid serve [--scenario FILE] [--seed N] [--host H] [--port P] [--mode batch|interactive]
//                   [--scale X] [--rb ID,...]

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "worldgrid/gateway/commands.hpp"
#include "worldgrid/gateway/server.hpp"
#include "worldgrid/gateway/testbed.hpp"

namespace fs = std::filesystem;
using namespace worldgrid;
using namespace worldgrid::gateway;

namespace {

constexpr std::uint64_t kDefaultSeed = 7;

// Paths that do not exist as given are looked up among the shipped scenarios.
fs::path locate(const std::string& file) {
  const fs::path p(file);
  if (fs::exists(p) || p.is_absolute()) return p;
  const fs::path shipped = fs::path(WORLDGRID_SCENARIO_DIR) / p;
  return fs::exists(shipped) ? shipped : p;
}

std::string default_scenario() { return (fs::path(WORLDGRID_SCENARIO_DIR) / "worldgrid.scenario").string(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int report(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    std::cerr << "error: " << to_string(err->code()) << ": " << err->what() << '\n';
    return exit_status(err->code());
  }
  std::cerr << "error: " << e.what() << '\n';
  return 1;
}

int run_main(int argc, char** argv) {
  CLI::App app("Execute a command script against a fresh simulation", "worldgrid run");
  std::string scenario, script, lb_log = "lb.log", event_log = "events.log";
  std::uint64_t seed = kDefaultSeed;
  bool via_http = false;
  app.add_option("scenario", scenario)->required();
  app.add_option("--seed", seed);
  app.add_option("--script", script)->required();
  app.add_option("--lb-log", lb_log);
  app.add_option("--event-log", event_log);
  app.add_flag("--via-http", via_http, "drive the simulation through a loopback HTTP gateway");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageExit;
  }

  try {
    const auto script_path = locate(script);
    std::ifstream in(script_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read script " + script_path.string());
    std::ostringstream text;
    text << in.rdbuf();

    auto testbed = Testbed::load(locate(scenario).string(), seed);
    Api api(*testbed);
    ScriptOutcome outcome;
    if (via_http) {
      GatewayServer server(api, ServerConfig{"127.0.0.1", 0, false, 1.0});
      const int port = server.bind();
      server.start();
      HttpClient client("127.0.0.1", port);
      outcome = run_script(client, text.str(), script_path.parent_path(), std::cout, std::cerr);
      server.stop();
    } else {
      LocalClient client(api);
      outcome = run_script(client, text.str(), script_path.parent_path(), std::cout, std::cerr);
    }
    write_file(lb_log, testbed->wms().lb().export_text());
    write_file(event_log, testbed->fabric().event_log_text());
    if (outcome.unexpected > 0) {
      std::cerr << "error: " << outcome.unexpected << " of " << outcome.commands << " commands did not behave as scripted\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    return report(e);
  }
}

GatewayServer* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int serve_main(int argc, char** argv) {
  CLI::App app("Serve the /v1 gateway", "worldgrid serve");
  std::string scenario = default_scenario(), mode = "batch";
  std::uint64_t seed = kDefaultSeed;
  ServerConfig config;
  std::vector<std::string> rbs;
  app.add_option("--scenario", scenario);
  app.add_option("--seed", seed);
  app.add_option("--host", config.host);
  app.add_option("--port", config.port)->check(CLI::Range(0, 65535));
  app.add_option("--mode", mode)->check(CLI::IsMember({"batch", "interactive"}));
  app.add_option("--scale", config.scale, "virtual seconds per wall-clock second")->check(CLI::PositiveNumber);
  app.add_option("--rb", rbs, "broker ids in the order offered to clients")->delimiter(',');
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageExit;
  }
  try {
    config.interactive = mode == "interactive";
    auto testbed = Testbed::load(locate(scenario).string(), seed);
    Api api(*testbed, rbs);
    GatewayServer server(api, config);
    const int port = server.bind();
    std::cerr << "worldgrid gateway on http://" << config.host << ':' << port << "/v1 (" << mode << " mode)\n";
    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    server.run();
    g_server = nullptr;
    return 0;
  } catch (const std::exception& e) {
    return report(e);
  }
}

int command_main(int argc, char** argv) {
  std::string scenario = default_scenario();
  std::uint64_t seed = kDefaultSeed;
  std::string server;
  int i = 1;
  // Global options come before the command word.
  for (; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--", 0) != 0 || a == "--help") break;
    if (i + 1 >= argc) {
      std::cerr << "error: " << a << " needs a value\n";
      return kUsageExit;
    }
    const std::string v = argv[++i];
    if (a == "--scenario") {
      scenario = v;
    } else if (a == "--seed") {
      try {
        seed = std::stoull(v);
      } catch (const std::exception&) {
        std::cerr << "error: --seed needs a number\n";
        return kUsageExit;
      }
    } else if (a == "--server") {
      server = v;
    } else {
      std::cerr << "error: unknown option " << a << '\n';
      return kUsageExit;
    }
  }
  std::vector<std::string> args(argv + i, argv + argc);
  try {
    if (!server.empty()) {
      const auto colon = server.rfind(':');
      if (colon == std::string::npos) throw std::runtime_error("--server expects HOST:PORT");
      HttpClient client(server.substr(0, colon), std::stoi(server.substr(colon + 1)));
      return run_command(client, args, fs::current_path(), std::cout, std::cerr);
    }
    auto testbed = Testbed::load(locate(scenario).string(), seed);
    Api api(*testbed);
    LocalClient client(api);
    return run_command(client, args, fs::current_path(), std::cout, std::cerr);
  } catch (const std::exception& e) {
    return report(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2 && std::string(argv[1]) == "run") return run_main(argc - 1, argv + 1);
  if (argc >= 2 && std::string(argv[1]) == "serve") return serve_main(argc - 1, argv + 1);
  return command_main(argc, argv);
}
