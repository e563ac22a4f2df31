// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/gateway/commands.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace worldgrid::gateway {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path resolve(const fs::path& base, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

bool on_off(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw Error(ErrorCode::InvalidArgument, "expected on or off, got '" + v + "'");
}

// The command tree. Each leaf stores a callback that runs after parsing.
struct Commands {
  Commands(Client& c, fs::path b, std::ostream& o) : client(c), base(std::move(b)), out(o) {}

  Client& client;
  fs::path base;
  std::ostream& out;
  std::function<void()> action;

  // option storage
  std::string vo, subject, site, user, rb, ce, ui, file, job, state, lfn, se, from, path, cls, index, filter,
      target, service, outbound, inbound, out_file;
  bool unsigned_policy = false, events = false;
  SimTime seconds = 0, start = -1, duration = 0, limit = 86400;

  void print(const json& j) { out << j.dump(2, ' ', false, json::error_handler_t::replace) << '\n'; }

  void build(CLI::App& app) {
    app.require_subcommand(1);

    auto* vo_cmd = app.add_subcommand("vo", "VO membership")->require_subcommand(1);
    vo_cmd->add_subcommand("list", "list VOs and members")->callback([this] {
      action = [this] { print(client.call("GET", "/vos")); };
    });
    auto* add = vo_cmd->add_subcommand("add-member", "register a subject with a VO");
    add->add_option("--vo", vo)->required();
    add->add_option("--subject", subject)->required();
    add->add_flag("--unsigned", unsigned_policy, "the member has not signed the usage policy");
    add->callback([this] {
      action = [this] {
        print(client.call("POST", "/vos/" + vo + "/members", {}, {{"subject", subject}, {"signed", !unsigned_policy}}));
      };
    });

    auto* gm = app.add_subcommand("gridmap", "grid-mapfiles")->require_subcommand(1);
    auto* gen = gm->add_subcommand("gen", "print a site's generated grid-mapfile");
    gen->add_option("--site", site)->required();
    gen->callback([this] {
      action = [this] { out << client.call("GET", "/gridmap/" + site).at("mapfile").get<std::string>(); };
    });

    auto* submit = app.add_subcommand("submit", "submit a JDL file");
    submit->add_option("--user", user)->required();
    auto* rb_opt = submit->add_option("--rb", rb, "resource broker");
    auto* ce_opt = submit->add_option("--ce", ce, "direct submission to a CE");
    rb_opt->excludes(ce_opt);
    submit->add_option("--ui", ui);
    submit->add_option("file", file)->required();
    submit->callback([this] {
      action = [this] {
        json body{{"jdl", read_text(resolve(base, file))}, {"user", user}};
        if (!rb.empty()) body["rb"] = rb;
        if (!ce.empty()) body["ce"] = ce;
        if (!ui.empty()) body["ui"] = ui;
        print(client.call("POST", "/jobs", {}, body));
      };
    });

    auto* status = app.add_subcommand("status", "job status");
    status->add_option("job", job);
    status->add_option("--user", user);
    status->add_option("--state", state);
    status->add_flag("--events", events, "include the logging and bookkeeping trail");
    status->callback([this] {
      action = [this] {
        if (job.empty()) {
          Client::Query q;
          if (!user.empty()) q["owner"] = user;
          if (!state.empty()) q["state"] = state;
          print(client.call("GET", "/jobs", q));
          return;
        }
        auto j = client.call("GET", "/jobs/" + job);
        if (events) j["events"] = client.call("GET", "/jobs/" + job + "/events").at("events");
        print(j);
      };
    });

    auto* cancel = app.add_subcommand("cancel", "cancel a job");
    cancel->add_option("job", job)->required();
    cancel->callback([this] { action = [this] { print(client.call("DELETE", "/jobs/" + job)); }; });

    auto* output = app.add_subcommand("output", "list a finished job's output sandbox");
    output->add_option("job", job)->required();
    output->callback([this] { action = [this] { print(client.call("GET", "/jobs/" + job + "/output")); }; });

    auto* replica = app.add_subcommand("replica", "replica management")->require_subcommand(1);
    auto* cp = replica->add_subcommand("cp", "copy a file to an SE and register it");
    cp->add_option("--lfn", lfn)->required();
    cp->add_option("--se", se)->required();
    auto* from_opt = cp->add_option("--from", from, "source location such as wn:<site>; omit to replicate");
    cp->add_option("--path", path)->needs(from_opt);
    cp->callback([this] {
      action = [this] {
        json body{{"lfn", lfn}, {"se", se}};
        if (!from.empty()) {
          if (path.empty()) throw Error(ErrorCode::InvalidArgument, "--from needs --path");
          body["source"] = from;
          body["path"] = path;
        }
        print(client.call("POST", "/replicas", {}, body));
      };
    });
    auto* ls = replica->add_subcommand("ls", "list replicas of a logical file");
    ls->add_option("lfn", lfn)->required();
    ls->callback([this] { action = [this] { print(client.call("GET", "/replicas/" + lfn)); }; });

    auto* info = app.add_subcommand("info", "information service")->require_subcommand(1);
    auto* query = info->add_subcommand("query", "search the top-level index");
    query->add_option("--class", cls)->check(CLI::IsMember({"edg", "glue", "any"}));
    query->add_option("--index", index);
    query->add_option("filter", filter);
    query->callback([this] {
      action = [this] {
        Client::Query q;
        if (!cls.empty()) q["class"] = cls;
        if (!index.empty()) q["index"] = index;
        if (!filter.empty()) q["query"] = filter;
        print(client.call("GET", "/resources", q));
      };
    });

    auto* mon = app.add_subcommand("monitor", "monitoring map")->require_subcommand(1);
    auto* snap = mon->add_subcommand("snapshot", "print or save the status map");
    snap->add_option("--filter", filter, "vo=<name>, country=<code> or site=<id>");
    snap->add_option("--out", out_file);
    snap->callback([this] {
      action = [this] {
        Client::Query q;
        if (!filter.empty()) q["filter"] = filter;
        const auto map = client.call("GET", "/monitor/map", q);
        if (out_file.empty()) {
          print(map);
          return;
        }
        std::ofstream f(out_file, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_file);
        f << map.dump(2) << '\n';
        print({{"written", out_file}, {"t", map.at("t")}});
      };
    });

    auto* sim = app.add_subcommand("sim", "simulation control")->require_subcommand(1);
    auto* adv = sim->add_subcommand("advance", "advance the virtual clock");
    adv->add_option("seconds", seconds)->required()->check(CLI::NonNegativeNumber);
    adv->callback([this] { action = [this] { print(client.call("POST", "/sim/advance", {}, {{"seconds", seconds}})); }; });
    auto* wait = sim->add_subcommand("wait", "advance until every job is terminal");
    wait->add_option("limit", limit)->check(CLI::NonNegativeNumber);
    wait->callback([this] { action = [this] { print(client.call("POST", "/sim/advance", {}, {{"until_idle", limit}})); }; });
    sim->add_subcommand("time", "current virtual time")->callback([this] {
      action = [this] { print(client.call("GET", "/sim/time")); };
    });
    auto* fail = sim->add_subcommand("fail", "inject a service failure window");
    fail->add_option("--target", target)->required();
    fail->add_option("--service", service)->required();
    fail->add_option("--start", start);
    fail->add_option("--duration", duration)->required()->check(CLI::PositiveNumber);
    fail->callback([this] {
      action = [this] {
        json body{{"target", target}, {"service", service}, {"duration", duration}};
        if (start >= 0) body["start"] = start;
        print(client.call("POST", "/sim/failures", {}, body));
      };
    });
    auto* site_cmd = sim->add_subcommand("site", "change a site's connectivity policy");
    site_cmd->add_option("site", site)->required();
    site_cmd->add_option("--outbound", outbound)->check(CLI::IsMember({"on", "off"}));
    site_cmd->add_option("--inbound", inbound)->check(CLI::IsMember({"on", "off"}));
    site_cmd->callback([this] {
      action = [this] {
        json body = json::object();
        if (!outbound.empty()) body["wn_outbound"] = on_off(outbound);
        if (!inbound.empty()) body["inbound_ports_open"] = on_off(inbound);
        print(client.call("POST", "/sim/sites/" + site, {}, body));
      };
    });

    app.add_subcommand("brokers", "configured resource brokers")->callback([this] {
      action = [this] { print(client.call("GET", "/brokers")); };
    });
  }
};

}  // namespace

int run_command(Client& client, const std::vector<std::string>& args, const fs::path& base_dir, std::ostream& out,
                std::ostream& err) {
  Commands commands(client, base_dir, out);
  CLI::App app("WorldGrid testbed commands", "worldgrid");
  commands.build(app);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageExit;
  }
  try {
    if (commands.action) commands.action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << to_string(ErrorCode::BadRequest) << ": " << e.what() << '\n';
    return exit_status(ErrorCode::BadRequest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kTransportExit;
  }
}

std::vector<std::string> split_command_line(std::string_view line) {
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (in_word) words.push_back(std::exchange(current, {}));
      in_word = false;
      continue;
    }
    in_word = true;
    if (c == '\'') {
      const auto close = line.find('\'', i + 1);
      if (close == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "unterminated single quote");
      current.append(line.substr(i + 1, close - i - 1));
      i = close;
    } else if (c == '"') {
      ++i;
      for (; i < line.size() && line[i] != '"'; ++i) {
        if (line[i] == '\\' && i + 1 < line.size()) ++i;
        current.push_back(line[i]);
      }
      if (i >= line.size()) throw Error(ErrorCode::InvalidArgument, "unterminated double quote");
    } else if (c == '\\' && i + 1 < line.size()) {
      current.push_back(line[++i]);
    } else {
      current.push_back(c);
    }
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

ScriptOutcome run_script(Client& client, std::string_view script, const fs::path& base_dir, std::ostream& out,
                         std::ostream& err) {
  ScriptOutcome outcome;
  std::istringstream lines{std::string(script)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::string_view body(line);
    body.remove_prefix(first);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.remove_suffix(1);
    const bool expect_failure = body.front() == '!';
    if (expect_failure) body.remove_prefix(1);
    ++outcome.commands;
    out << "$ " << (expect_failure ? "!" : "") << body << '\n';
    int status = 0;
    try {
      status = run_command(client, split_command_line(body), base_dir, out, out);
    } catch (const Error& e) {
      out << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
      status = exit_status(e.code());
    }
    if ((status != 0) != expect_failure) {
      ++outcome.unexpected;
      err << fmt::format("script line {}: {} (exit {})\n", number,
                         expect_failure ? "expected a failure but the command succeeded" : "command failed", status);
    }
  }
  return outcome;
}

}  // namespace worldgrid::gateway
