// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "worldgrid/common/error.hpp"
#include "worldgrid/gateway/api.hpp"
#include "worldgrid/gateway/client.hpp"
#include "worldgrid/gateway/commands.hpp"
#include "worldgrid/gateway/server.hpp"

namespace worldgrid::gateway {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ApiResponse req(Api& api, std::string method, std::string path, json body = nullptr,
                std::map<std::string, std::string> query = {}) {
  return api.handle(ApiRequest{std::move(method), std::move(path), std::move(query),
                               body.is_null() ? std::string() : body.dump()});
}

std::string error_code(const ApiResponse& r) { return json::parse(r.body).at("code").get<std::string>(); }

class ApiTest : public ::testing::Test {
 protected:
  ApiTest() : tb(testing::small_testbed()), api(*tb) {}
  std::unique_ptr<Testbed> tb;
  Api api;
};

TEST_F(ApiTest, JobLifecycleOverTheContract) {
  auto r = req(api, "POST", "/jobs", {{"jdl", testing::tagged_jdl("alpha", "ATLAS")}, {"user", "/CN=alice"}});
  ASSERT_EQ(r.status, 201) << r.body;
  const auto id = json::parse(r.body).at("id").get<std::string>();
  EXPECT_EQ(json::parse(r.body).at("state"), "SUBMITTED");

  r = req(api, "POST", "/sim/advance", {{"until_idle", 7200}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body).at("idle"), true);

  r = req(api, "GET", "/jobs/" + id);
  ASSERT_EQ(r.status, 200);
  const auto job = json::parse(r.body);
  EXPECT_EQ(job.at("state"), "DONE_OK");
  EXPECT_TRUE(job.contains("jdl"));

  r = req(api, "GET", "/jobs/" + id + "/events");
  EXPECT_EQ(r.status, 200);
  EXPECT_GE(json::parse(r.body).at("events").size(), 6u);
  r = req(api, "GET", "/jobs/" + id + "/output");
  EXPECT_EQ(json::parse(r.body).at("files").size(), 1u);
  r = req(api, "GET", "/jobs", nullptr, {{"state", "DONE_OK"}});
  EXPECT_EQ(json::parse(r.body).at("jobs").size(), 1u);
  r = req(api, "DELETE", "/jobs/" + id);
  EXPECT_EQ(json::parse(r.body).at("cancelled"), false);
}

TEST_F(ApiTest, ErrorsMapToCodesAndStatuses) {
  auto r = req(api, "POST", "/jobs", {{"jdl", testing::tagged_jdl("alpha", "ATLAS")}, {"user", "/CN=bob"}});
  EXPECT_EQ(error_code(r), "VoMembershipError");
  EXPECT_EQ(r.status, http_status(ErrorCode::VoMembershipError));
  r = req(api, "GET", "/jobs/job-424242");
  EXPECT_EQ(error_code(r), "UnknownJob");
  EXPECT_EQ(r.status, 404);
  r = req(api, "GET", "/no/such/route");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(error_code(r), "NotFound");
  r = api.handle(ApiRequest{"POST", "/jobs", {}, "{not json"});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_code(r), "BadRequest");
  r = req(api, "POST", "/jobs", {{"user", "/CN=alice"}});
  EXPECT_EQ(r.status, 400);
  r = req(api, "GET", "/monitor/map", nullptr, {{"filter", "vo=gamma"}});
  EXPECT_EQ(error_code(r), "UnknownFilterValue");
  api.set_manual_clock(false);
  r = req(api, "POST", "/sim/advance", {{"seconds", 10}});
  EXPECT_EQ(error_code(r), "BadRequest");
}

TEST_F(ApiTest, ResourcesReplicasAndVos) {
  auto r = req(api, "GET", "/resources", nullptr, {{"class", "edg"}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body).at("entries").size(), 3u);
  r = req(api, "GET", "/resources", nullptr, {{"query", "(&(objectClass=EdgCE)(SiteName=EU-B))"}});
  EXPECT_EQ(json::parse(r.body).at("entries").size(), 1u);
  r = req(api, "GET", "/resources", nullptr, {{"query", "(broken"}});
  EXPECT_EQ(error_code(r), "FilterSyntax");

  r = req(api, "POST", "/replicas", {{"lfn", "lfn:/alpha/data/input.dat"}, {"se", "se.a.eu"}});
  EXPECT_EQ(r.status, 201) << r.body;
  r = req(api, "GET", "/replicas/lfn:/alpha/data/input.dat");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body).at("replicas").size(), 2u);

  r = req(api, "POST", "/vos/beta/members", {{"subject", "/CN=carol"}});
  EXPECT_EQ(r.status, 201);
  r = req(api, "GET", "/gridmap/US-A");
  EXPECT_NE(json::parse(r.body).at("mapfile").get<std::string>().find("/CN=carol"), std::string::npos);
  r = req(api, "POST", "/vos/gamma/members", {{"subject", "/CN=carol"}});
  EXPECT_EQ(error_code(r), "UnknownVo");
}

TEST_F(ApiTest, MalformedRequestsNeverEscapeAsExceptions) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> methods{"GET", "POST", "DELETE", "PUT"};
  const std::vector<std::string> paths{"/jobs", "/jobs/x", "/jobs/job-000001/events", "/replicas", "/replicas/lfn:",
                                       "/sim/advance", "/sim/failures", "/sim/sites/EU-A", "/vos/alpha/members",
                                       "/resources", "/monitor/map", "/gridmap/x", "/", ""};
  const std::vector<std::string> bodies{"", "{}", "[]", "null", "{\"seconds\": -5}", "{\"seconds\": \"x\"}",
                                        "{\"until\": 1e300}", "{\"jdl\": 5, \"user\": []}", "{\"target\": \"EU-A\"}",
                                        "{\"lfn\": \"bad\", \"se\": \"se.a.eu\"}", "\xff\xfe"};
  for (int i = 0; i < 2000; ++i) {
    ApiRequest request{methods[rng() % methods.size()], paths[rng() % paths.size()], {}, bodies[rng() % bodies.size()]};
    if (rng() % 3 == 0) request.query["class"] = rng() % 2 ? "glue" : "weird";
    ApiResponse r;
    ASSERT_NO_THROW(r = api.handle(request)) << request.method << " " << request.path << " " << request.body;
    ASSERT_GE(r.status, 200);
    ASSERT_LT(r.status, 600);
    if (r.status >= 400) {
      ASSERT_NO_THROW(error_code(r)) << r.body;
    }
  }
}

TEST(CommandLine, SplittingHonoursQuotes) {
  const std::vector<std::string> want{"info", "query", "(objectClass=GlueCE)", "a b", "c\"d", "e f"};
  EXPECT_EQ(split_command_line("info query '(objectClass=GlueCE)' \"a b\" c\\\"d e\\ f"), want);
  EXPECT_TRUE(split_command_line("   ").empty());
  EXPECT_THROW(split_command_line("echo 'unterminated"), Error);
}

TEST(CommandLine, ScriptsReportUnexpectedOutcomes) {
  auto tb = testing::small_testbed();
  Api api(*tb);
  LocalClient client(api);
  std::ostringstream out, err;
  const auto outcome = run_script(client,
                                  "# comment\nbrokers\n!vo add-member --vo gamma --subject /CN=x\n"
                                  "sim advance 30\n!sim time\nstatus job-000009\n",
                                  fs::current_path(), out, err);
  EXPECT_EQ(outcome.commands, 5u);
  EXPECT_EQ(outcome.unexpected, 2u);
  EXPECT_NE(out.str().find("$ brokers"), std::string::npos);
  EXPECT_NE(out.str().find("error: UnknownJob"), std::string::npos);
  EXPECT_NE(err.str().find("script line 6"), std::string::npos);
}

TEST(CommandLine, ExitStatusesFollowErrorCodes) {
  auto tb = testing::small_testbed();
  Api api(*tb);
  LocalClient client(api);
  std::ostringstream out, err;
  EXPECT_EQ(run_command(client, {"sim", "time"}, ".", out, err), 0);
  EXPECT_EQ(run_command(client, {"status", "job-000042"}, ".", out, err),
            exit_status(ErrorCode::UnknownJob));
  EXPECT_EQ(run_command(client, {"frobnicate"}, ".", out, err), kUsageExit);
  EXPECT_EQ(run_command(client, {"sim", "advance"}, ".", out, err), kUsageExit);
}

// Same script through the in-process client and through HTTP.
TEST(Server, HttpMatchesInProcess) {
  const std::string script =
      "submit --user /CN=alice --rb rb-main job.jdl\nsim advance 5\nstatus job-000001\n"
      "sim wait 7200\nstatus\ninfo query --class edg\nmonitor snapshot\n!status job-000002\n";
  const auto dir = fs::temp_directory_path() / "worldgrid-gateway-test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "job.jdl") << testing::tagged_jdl("alpha", "ATLAS");
  }
  std::string local_out, http_out, local_lb, http_lb;
  {
    auto tb = testing::small_testbed(4);
    Api api(*tb);
    LocalClient client(api);
    std::ostringstream out, err;
    EXPECT_EQ(run_script(client, script, dir, out, err).unexpected, 0u) << err.str();
    local_out = out.str();
    local_lb = tb->wms().lb().export_text();
  }
  {
    auto tb = testing::small_testbed(4);
    Api api(*tb);
    GatewayServer server(api, ServerConfig{"127.0.0.1", 0, false, 1.0});
    const int port = server.bind();
    ASSERT_GT(port, 0);
    server.start();
    HttpClient client("127.0.0.1", port);
    std::ostringstream out, err;
    EXPECT_EQ(run_script(client, script, dir, out, err).unexpected, 0u) << err.str();
    server.stop();
    http_out = out.str();
    http_lb = tb->wms().lb().export_text();
  }
  EXPECT_EQ(local_out, http_out);
  EXPECT_EQ(local_lb, http_lb);
  EXPECT_FALSE(local_lb.empty());
  fs::remove_all(dir);
}

TEST(Server, UnreachableServerIsATransportFailure) {
  HttpClient client("127.0.0.1", 1);
  std::ostringstream out, err;
  EXPECT_EQ(run_command(client, {"sim", "time"}, ".", out, err), kTransportExit);
}

TEST(Server, InteractiveClockAdvancesOnItsOwn) {
  auto tb = testing::small_testbed();
  Api api(*tb);
  GatewayServer server(api, ServerConfig{"127.0.0.1", 0, true, 100.0});
  server.bind();
  server.start();
  HttpClient client("127.0.0.1", server.port());
  const auto t0 = client.call("GET", "/sim/time").at("t").get<SimTime>();
  std::this_thread::sleep_for(std::chrono::milliseconds(400));
  const auto t1 = client.call("GET", "/sim/time").at("t").get<SimTime>();
  EXPECT_GT(t1, t0);
  try {
    client.call("POST", "/sim/advance", {}, {{"seconds", 5}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadRequest);
  }
  server.stop();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const auto cmd = std::string(WORLDGRID_CLI) + " " + args + " > " + stdout_file.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Binary, ExitCodesAndOutput) {
  const auto dir = fs::temp_directory_path() / "worldgrid-cli-test";
  fs::create_directories(dir);
  const auto out = dir / "out.txt";
  EXPECT_EQ(run_cli("vo list", out), 0);
  EXPECT_NE(testing::read_file(out.string()).find("datatag"), std::string::npos);
  const auto jdl = testing::shipped_dir() + "/jobs/atlsim.jdl";
  EXPECT_EQ(run_cli("submit --user '" + testing::kPat + "' --rb rb-pisa " + jdl, out),
            exit_status(ErrorCode::VoMembershipError));
  EXPECT_NE(testing::read_file(out.string()).find("error: VoMembershipError"), std::string::npos);
  EXPECT_EQ(run_cli("no-such-command", out), kUsageExit);
  EXPECT_EQ(run_cli("--scenario /nonexistent.scenario vo list", out), exit_status(ErrorCode::ScenarioParseError));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace worldgrid::gateway
