// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/gateway/api.hpp"

#include <algorithm>
#include <regex>

#include "worldgrid/infosys/schema.hpp"

namespace worldgrid::gateway {

using nlohmann::json;

json api_error(ErrorCode code, const std::string& message) {
  return {{"code", to_string(code)}, {"message", message}, {"status", http_status(code)}};
}

namespace {

// Request text is echoed into messages, so bytes that are not UTF-8 get
// replaced rather than failing the dump.
std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

ApiResponse ok(const json& body, int status = 200) { return {status, dump(body), "application/json"}; }
ApiResponse text(std::string body) { return {200, std::move(body), "text/plain"}; }

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    auto j = json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("malformed JSON: ") + e.what());
  }
}

std::string required_string(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string() || it->get<std::string>().empty())
    throw Error(ErrorCode::BadRequest, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::string optional_string(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::int64_t required_int(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_number_integer())
    throw Error(ErrorCode::BadRequest, std::string("missing integer field '") + key + "'");
  return it->get<std::int64_t>();
}

std::string query_param(const ApiRequest& r, const std::string& key) {
  const auto it = r.query.find(key);
  return it == r.query.end() ? std::string() : it->second;
}

json summary_json(const wms::JobSummary& s) {
  return {{"id", s.id},
          {"owner", s.owner},
          {"vo", s.vo},
          {"state", wms::to_string(s.state)},
          {"ce", s.assigned_ce ? json(*s.assigned_ce) : json(nullptr)},
          {"submitted_at", s.submitted_at},
          {"rb", s.rb},
          {"reason", s.reason}};
}

json event_json(const wms::LbEvent& e) {
  const auto state = [](const std::optional<wms::JobState>& s) {
    return s ? json(std::string(wms::to_string(*s))) : json(nullptr);
  };
  return {{"t", e.t},
          {"job", e.job},
          {"component", wms::to_string(e.component)},
          {"from", state(e.from)},
          {"to", state(e.to)},
          {"reason", e.reason}};
}

json entry_json(const infosys::DirectoryEntry& e) {
  json attrs = json::object();
  for (const auto& [name, values] : e.attributes) attrs[name] = values;
  return {{"dn", e.dn.to_string()},
          {"objectClasses", std::vector<std::string>(e.object_classes.begin(), e.object_classes.end())},
          {"attributes", std::move(attrs)},
          {"source", e.source_id},
          {"published_at", e.published_at}};
}

json pfn_json(const datamgmt::PhysicalFileName& p) {
  return {{"pfn", p.to_string()}, {"se", p.se}, {"path", p.path}, {"size", p.size}, {"protocol", p.protocol}};
}

bool parse_switch(const json& v, const char* key) {
  if (!v.is_boolean()) throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

Api::Api(Testbed& testbed, std::vector<std::string> brokers) : testbed_(testbed), brokers_(std::move(brokers)) {
  if (brokers_.empty()) brokers_ = testbed_.wms().broker_ids();
  for (const auto& b : brokers_) (void)testbed_.wms().broker(b);
  if (brokers_.empty()) throw Error(ErrorCode::InvalidArgument, "the gateway needs at least one broker");
}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return {http_status(e.code()), dump(api_error(e.code(), e.what())), "application/json"};
  } catch (const json::exception& e) {
    return {400, dump(api_error(ErrorCode::BadRequest, e.what())), "application/json"};
  } catch (const std::exception& e) {
    return {400, dump(api_error(ErrorCode::BadRequest, e.what())), "application/json"};
  }
}

ApiResponse Api::route(const ApiRequest& r) {
  static const std::regex job_re("^/jobs/([^/]+)$");
  static const std::regex job_events_re("^/jobs/([^/]+)/events$");
  static const std::regex job_output_re("^/jobs/([^/]+)/output$");
  static const std::regex replica_re("^/replicas/(.+)$");
  static const std::regex vo_members_re("^/vos/([^/]+)/members$");
  static const std::regex gridmap_re("^/gridmap/([^/]+)$");
  static const std::regex site_re("^/sim/sites/([^/]+)$");

  auto& tb = testbed_;
  auto& wms = tb.wms();
  const auto& path = r.path;
  std::smatch m;

  if (r.method == "POST" && path == "/jobs") {
    const auto body = parse_body(r.body);
    const auto jdl = required_string(body, "jdl");
    const auto user = required_string(body, "user");
    auto ui = optional_string(body, "ui");
    if (ui.empty()) {
      if (tb.fabric().scenario().uis.empty()) throw Error(ErrorCode::BadRequest, "no user interface configured");
      ui = tb.fabric().scenario().uis.front().id;
    }
    const auto ce = optional_string(body, "ce");
    std::string id;
    if (!ce.empty()) {
      id = wms.direct_submit(jdl, user, ce, ui);
    } else {
      auto rb = optional_string(body, "rb");
      if (rb.empty()) rb = brokers_.front();
      id = wms.submit(jdl, user, rb, ui);
    }
    return ok(summary_json(wms::summarize(wms.job(id))), 201);
  }
  if (r.method == "GET" && path == "/jobs") {
    std::optional<std::string> owner;
    std::optional<wms::JobState> state;
    if (auto o = query_param(r, "owner"); !o.empty()) owner = o;
    if (auto s = query_param(r, "state"); !s.empty()) state = wms::parse_job_state(s);
    json jobs = json::array();
    for (const auto& s : wms.jobs(owner, state)) jobs.push_back(summary_json(s));
    return ok({{"t", tb.now()}, {"jobs", std::move(jobs)}});
  }
  if (std::regex_match(path, m, job_events_re) && r.method == "GET") {
    json events = json::array();
    for (const auto& e : wms.lb_query(m[1].str())) events.push_back(event_json(e));
    return ok({{"id", m[1].str()}, {"events", std::move(events)}});
  }
  if (std::regex_match(path, m, job_output_re) && r.method == "GET") {
    json files = json::array();
    const auto& job = wms.job(m[1].str());
    for (const auto& f : wms.output(job.id)) files.push_back({{"name", f.name}, {"size", f.size}});
    return ok({{"id", job.id}, {"state", wms::to_string(job.state)}, {"files", std::move(files)}});
  }
  if (std::regex_match(path, m, job_re)) {
    if (r.method == "GET") {
      const auto& job = wms.job(m[1].str());
      auto j = summary_json(wms::summarize(job));
      j["jdl"] = jdl::serialize(job.jdl);
      j["attempts"] = job.attempts;
      return ok(j);
    }
    if (r.method == "DELETE") {
      const bool cancelled = wms.cancel(m[1].str());
      return ok({{"id", m[1].str()}, {"cancelled", cancelled}, {"state", wms::to_string(wms.job(m[1].str()).state)}});
    }
  }
  if (r.method == "GET" && path == "/resources") {
    const auto cls = query_param(r, "class");
    std::vector<infosys::QueryFilter> parts;
    if (cls == "edg") parts.push_back(infosys::QueryFilter::object_class(std::string(infosys::classes::kEdgCe)));
    else if (cls == "glue") parts.push_back(infosys::QueryFilter::object_class(std::string(infosys::classes::kGlueCe)));
    else if (!cls.empty() && cls != "any") throw Error(ErrorCode::BadRequest, "class must be edg, glue or any");
    if (auto q = query_param(r, "query"); !q.empty()) parts.push_back(infosys::QueryFilter::parse(q));
    const auto filter = parts.empty() ? infosys::QueryFilter::always()
                        : parts.size() == 1 ? parts.front()
                                            : infosys::QueryFilter::all_of(parts);
    auto index = query_param(r, "index");
    const auto tops = tb.top_indexes();
    if (index.empty()) {
      if (tops.empty()) throw Error(ErrorCode::AllIndexesDown, "no top-level index configured");
      index = tops.size() == 1 ? tops.front() : tb.info().effective_top(tops[0], tops[1]);
    } else if (!tb.info().has_node(index)) {
      throw Error(ErrorCode::UnknownNode, "unknown index " + index);
    } else if (!tb.info().reachable(index)) {
      throw Error(ErrorCode::AllIndexesDown, index + " is unreachable");
    }
    json entries = json::array();
    for (const auto& e : tb.info().view(index, tb.now()).search(filter)) entries.push_back(entry_json(e));
    return ok({{"index", index}, {"t", tb.now()}, {"entries", std::move(entries)}});
  }
  if (std::regex_match(path, m, replica_re) && r.method == "GET") {
    const auto lfn = datamgmt::LogicalFileName::parse(m[1].str());
    auto rc = query_param(r, "catalog");
    if (rc.empty()) rc = tb.default_catalog();
    json replicas = json::array();
    for (const auto& p : tb.replicas(rc).list_replicas(lfn)) replicas.push_back(pfn_json(p));
    return ok({{"lfn", lfn.to_string()}, {"catalog", rc}, {"replicas", std::move(replicas)}});
  }
  if (r.method == "POST" && path == "/replicas") {
    const auto body = parse_body(r.body);
    const auto lfn = datamgmt::LogicalFileName::parse(required_string(body, "lfn"));
    const auto se = required_string(body, "se");
    auto rc = optional_string(body, "catalog");
    if (rc.empty()) rc = tb.default_catalog();
    auto& manager = tb.replicas(rc);
    const auto source = optional_string(body, "source");
    const auto t = source.empty() ? manager.replicate(lfn, se)
                                  : manager.copy_and_register(source, required_string(body, "path"), se, lfn);
    auto j = pfn_json(t.pfn);
    j["lfn"] = lfn.to_string();
    j["copied"] = t.copied;
    j["duration"] = t.duration;
    return ok(j, t.copied ? 201 : 200);
  }
  if (r.method == "GET" && path == "/monitor/map") {
    const auto filter = monitor::MapFilter::parse(query_param(r, "filter"));
    return {200, monitor::export_map(tb.monitor().aggregate(filter, tb.now())), "application/json"};
  }
  if (r.method == "GET" && path == "/vos") {
    json vos = json::array();
    for (const auto& vo : tb.security().vos()) {
      json members = json::array();
      for (const auto& s : vo.members) members.push_back({{"subject", s}, {"signed", vo.has_signed(s)}});
      vos.push_back({{"name", vo.name}, {"members", std::move(members)}});
    }
    return ok({{"vos", std::move(vos)}});
  }
  if (std::regex_match(path, m, vo_members_re) && r.method == "POST") {
    const auto body = parse_body(r.body);
    const auto subject = required_string(body, "subject");
    bool signed_policy = true;
    if (const auto it = body.find("signed"); it != body.end()) signed_policy = parse_switch(*it, "signed");
    tb.security().add_member(m[1].str(), subject, signed_policy);
    return ok({{"vo", m[1].str()}, {"subject", subject}, {"signed", signed_policy}}, 201);
  }
  if (std::regex_match(path, m, gridmap_re) && r.method == "GET") {
    return ok({{"site", m[1].str()}, {"mapfile", tb.security().mapfile(m[1].str()).serialize()}});
  }
  if (r.method == "GET" && path == "/brokers") {
    json out = json::array();
    for (const auto& id : brokers_) {
      const auto& b = wms.broker(id);
      out.push_back({{"id", b.id},
                     {"info_primary", b.info_primary},
                     {"info_backup", b.info_backup},
                     {"replica_catalog", b.replica_catalog},
                     {"glue_aware", b.glue_aware},
                     {"strict_data", b.strict_data},
                     {"default_rank", jdl::to_string(*b.default_rank)}});
    }
    return ok({{"brokers", std::move(out)}});
  }
  if (r.method == "POST" && path == "/sim/advance") {
    if (!manual_clock_) throw Error(ErrorCode::BadRequest, "the clock advances on its own in interactive mode");
    const auto body = parse_body(r.body);
    if (body.contains("until_idle")) {
      const auto limit = required_int(body, "until_idle");
      if (limit < 0) throw Error(ErrorCode::BadRequest, "until_idle must be >= 0");
      const bool idle = tb.run_until_idle(limit);
      return ok({{"t", tb.now()}, {"idle", idle}});
    }
    SimTime until = 0;
    if (body.contains("until")) until = required_int(body, "until");
    else until = tb.now() + required_int(body, "seconds");
    if (until < tb.now()) throw Error(ErrorCode::BadRequest, "cannot advance into the past");
    tb.advance(until);
    return ok({{"t", tb.now()}});
  }
  if (r.method == "GET" && path == "/sim/time") return ok({{"t", tb.now()}});
  if (r.method == "POST" && path == "/sim/failures") {
    const auto body = parse_body(r.body);
    fabric::FailureSpec f;
    f.target = required_string(body, "target");
    f.service = fabric::parse_service_kind(required_string(body, "service"));
    f.start = body.contains("start") ? required_int(body, "start") : tb.now();
    f.end = body.contains("end") ? required_int(body, "end") : f.start + required_int(body, "duration");
    tb.inject_failure(f);
    return ok({{"target", f.target}, {"service", fabric::to_string(f.service)}, {"start", f.start}, {"end", f.end}},
              201);
  }
  if (std::regex_match(path, m, site_re) && r.method == "POST") {
    const auto body = parse_body(r.body);
    const auto site = m[1].str();
    (void)tb.fabric().site(site);
    if (const auto it = body.find("wn_outbound"); it != body.end())
      tb.fabric().set_wn_outbound(site, parse_switch(*it, "wn_outbound"));
    if (const auto it = body.find("inbound_ports_open"); it != body.end())
      tb.fabric().set_inbound_ports(site, parse_switch(*it, "inbound_ports_open"));
    const auto& s = tb.fabric().site(site);
    return ok({{"site", site}, {"wn_outbound", s.wn_outbound}, {"inbound_ports_open", s.inbound_ports_open}});
  }
  if (r.method == "GET" && path == "/sim/lb") return text(wms.lb().export_text());
  if (r.method == "GET" && path == "/sim/events") return text(tb.fabric().event_log_text());

  throw Error(ErrorCode::NotFound, r.method + " " + std::string(kApiPrefix) + path + " is not part of the API");
}

}  // namespace worldgrid::gateway
