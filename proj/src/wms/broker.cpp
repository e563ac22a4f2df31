// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/wms/broker.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "worldgrid/common/error.hpp"
#include "worldgrid/infosys/schema.hpp"

namespace worldgrid::wms {

BrokerConfig BrokerConfig::from_spec(const fabric::BrokerSpec& spec) {
  return {spec.id,          spec.info_primary, spec.info_backup, spec.replica_catalog, spec.glue_aware,
          spec.strict_data, jdl::parse_expression(spec.default_rank)};
}

infosys::QueryFilter candidate_filter(bool glue_aware) {
  return infosys::QueryFilter::object_class(std::string(glue_aware ? infosys::classes::kGlueCe : infosys::classes::kEdgCe));
}

jdl::ValueMap resource_values(const infosys::DirectoryEntry& entry) {
  static const infosys::Schema schema = infosys::worldgrid_schema();
  jdl::ValueMap out;
  for (const auto& [name, values] : entry.attributes) {
    const auto type = schema.type_of(name);
    if (type == infosys::AttrType::StringList || (!type && values.size() != 1)) {
      out[name] = jdl::Value::string_list(values);
      continue;
    }
    if (values.empty()) continue;
    const auto& v = values.front();
    if (type == infosys::AttrType::Integer) {
      std::int64_t n = 0;
      const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
      if (res.ec == std::errc{} && res.ptr == v.data() + v.size()) out[name] = n;
    } else if (type == infosys::AttrType::Boolean) {
      if (iequals(v, "true")) out[name] = true;
      else if (iequals(v, "false")) out[name] = false;
    } else {
      out[name] = v;
    }
  }
  return out;
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.data_close != b.data_close) return a.data_close;
  if (a.rank.has_value() != b.rank.has_value()) return a.rank.has_value();
  if (a.rank && *a.rank != *b.rank) return *a.rank > *b.rank;
  return a.ce < b.ce;
}

MatchResult rank_candidates(const BrokerConfig& config, const MatchRequest& request,
                            std::span<const infosys::DirectoryEntry> entries, const AccessCheck& access,
                            const ReplicaCheck& replicas) {
  if (!request.jdl) throw Error(ErrorCode::InvalidArgument, "match request without a job description");
  const auto& doc = *request.jdl;
  const auto filter = candidate_filter(config.glue_aware);
  const auto self = doc.self_attributes();
  const jdl::Expr* rank_expr = doc.rank ? doc.rank.get() : config.default_rank.get();

  MatchResult result;
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (!filter.matches(entry)) continue;
    const auto ce = entry.first("CEId");
    if (!ce || request.exclude.contains(*ce) || !seen.insert(*ce).second) continue;
    const auto* vos = entry.values("AuthorizedVOs");
    if (!vos || std::find(vos->begin(), vos->end(), request.vo) == vos->end()) continue;
    if (access && !access(entry)) continue;
    const auto values = resource_values(entry);
    if (!jdl::requirements_satisfied(doc, values)) continue;

    Candidate c{*ce, std::nullopt, true};
    if (!doc.input_data.empty()) {
      const auto* close = entry.values("CloseSEs");
      c.data_close = close && replicas && replicas(doc.input_data, *close);
    }
    if (config.strict_data && !c.data_close) continue;
    if (rank_expr) {
      const auto v = jdl::evaluate(*rank_expr, jdl::EvalEnv{&values, &self});
      if (v.is_number() && !std::isnan(v.as_number())) c.rank = v.as_number();
    }
    result.ranked.push_back(std::move(c));
  }
  if (result.ranked.empty())
    throw Error(ErrorCode::NoMatchingResources, "no computing element satisfies the job");
  std::sort(result.ranked.begin(), result.ranked.end(), ranks_before);
  return result;
}

}  // namespace worldgrid::wms
