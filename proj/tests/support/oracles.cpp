// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace worldgrid::testing {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

const RefValue kUndef{RefUndefined{}};

bool is_num(const RefValue& v) { return std::holds_alternative<std::int64_t>(v.v) || std::holds_alternative<double>(v.v); }
double num(const RefValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*i);
  return std::get<double>(v.v);
}

// Tri-state comparison result: -1/0/1, or nullopt when incomparable.
std::optional<int> order(const RefValue& a, const RefValue& b, bool equality_only_for_bool, bool& bool_pair) {
  bool_pair = false;
  const auto* ai = std::get_if<std::int64_t>(&a.v);
  const auto* bi = std::get_if<std::int64_t>(&b.v);
  if (ai && bi) return (*ai > *bi) - (*ai < *bi);
  if (is_num(a) && is_num(b)) {
    const double x = num(a), y = num(b);
    return (x > y) - (x < y);
  }
  const auto* as = std::get_if<std::string>(&a.v);
  const auto* bs = std::get_if<std::string>(&b.v);
  if (as && bs) return (*as > *bs) - (*as < *bs);
  const auto* ab = std::get_if<bool>(&a.v);
  const auto* bb = std::get_if<bool>(&b.v);
  if (ab && bb) {
    bool_pair = true;
    (void)equality_only_for_bool;
    return *ab == *bb ? 0 : 1;
  }
  return std::nullopt;
}

RefValue compare(const std::string& op, const RefValue& a, const RefValue& b) {
  bool bool_pair = false;
  const auto c = order(a, b, true, bool_pair);
  if (!c) return kUndef;
  if (bool_pair && op != "==" && op != "!=") return kUndef;
  if (op == "==") return {*c == 0};
  if (op == "!=") return {*c != 0};
  if (op == "<") return {*c < 0};
  if (op == "<=") return {*c <= 0};
  if (op == ">") return {*c > 0};
  return {*c >= 0};
}

RefValue arith(const std::string& op, const RefValue& a, const RefValue& b) {
  if (!is_num(a) || !is_num(b)) return kUndef;
  const auto* ai = std::get_if<std::int64_t>(&a.v);
  const auto* bi = std::get_if<std::int64_t>(&b.v);
  if (ai && bi) {
    // Exact arithmetic in long double range is not enough for 64-bit
    // products, so use 128-bit intermediates.
    const __int128 x = *ai, y = *bi;
    __int128 r = 0;
    if (op == "+") r = x + y;
    else if (op == "-") r = x - y;
    else if (op == "*") r = x * y;
    else {
      if (y == 0) return kUndef;
      r = x / y;
    }
    if (r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min()) return kUndef;
    return {static_cast<std::int64_t>(r)};
  }
  const double x = num(a), y = num(b);
  double r = 0;
  if (op == "+") r = x + y;
  else if (op == "-") r = x - y;
  else if (op == "*") r = x * y;
  else {
    if (y == 0.0) return kUndef;
    r = x / y;
  }
  if (std::isnan(r)) return kUndef;
  return {r};
}

bool is_true(const RefValue& v) { return std::holds_alternative<bool>(v.v) && std::get<bool>(v.v); }
bool is_false(const RefValue& v) { return std::holds_alternative<bool>(v.v) && !std::get<bool>(v.v); }

}  // namespace

RefValue ref_evaluate(const RefExpr& e, const RefAd& other) {
  switch (e.kind) {
    case RefExpr::Kind::Lit:
      return e.literal;
    case RefExpr::Kind::Other: {
      // Attribute names are case-insensitive.
      for (const auto& [k, v] : other)
        if (lower(k) == lower(e.name)) return v;
      return kUndef;
    }
    case RefExpr::Kind::Not: {
      const auto v = ref_evaluate(e.kids[0], other);
      if (const auto* b = std::get_if<bool>(&v.v)) return {!*b};
      return kUndef;
    }
    case RefExpr::Kind::Neg: {
      const auto v = ref_evaluate(e.kids[0], other);
      if (const auto* i = std::get_if<std::int64_t>(&v.v)) {
        if (*i == std::numeric_limits<std::int64_t>::min()) return kUndef;
        return {-*i};
      }
      if (const auto* d = std::get_if<double>(&v.v)) return {-*d};
      return kUndef;
    }
    case RefExpr::Kind::Bin: {
      const auto l = ref_evaluate(e.kids[0], other);
      const auto r = ref_evaluate(e.kids[1], other);
      if (e.op == "&&") {
        if (is_false(l) || is_false(r)) return {false};
        if (is_true(l) && is_true(r)) return {true};
        return kUndef;
      }
      if (e.op == "||") {
        if (is_true(l) || is_true(r)) return {true};
        if (is_false(l) && is_false(r)) return {false};
        return kUndef;
      }
      if (e.op == "+" || e.op == "-" || e.op == "*" || e.op == "/") return arith(e.op, l, r);
      return compare(e.op, l, r);
    }
    case RefExpr::Kind::List: {
      RefList items;
      for (const auto& k : e.kids) items.push_back(ref_evaluate(k, other));
      return {items};
    }
    case RefExpr::Kind::Member: {
      auto value = ref_evaluate(e.kids[0], other);
      auto list = ref_evaluate(e.kids[1], other);
      const bool value_is_list = std::holds_alternative<RefList>(value.v);
      const bool list_is_list = std::holds_alternative<RefList>(list.v);
      if (!list_is_list && value_is_list) std::swap(value, list);
      if (!std::holds_alternative<RefList>(list.v)) return kUndef;
      if (std::holds_alternative<RefUndefined>(value.v) || std::holds_alternative<RefList>(value.v)) return kUndef;
      for (const auto& item : std::get<RefList>(list.v))
        if (is_true(compare("==", value, item))) return {true};
      return {false};
    }
  }
  return kUndef;
}

std::string ref_value_text(const RefValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RefUndefined>) {
          return "undefined";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return x < 0 ? "(-" + std::to_string(-x) + ")" : std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream s;
          s.precision(17);
          s << std::showpoint << (x < 0 ? -x : x);
          return x < 0 ? "(-" + s.str() + ")" : s.str();
        } else if constexpr (std::is_same_v<T, std::string>) {
          return "\"" + x + "\"";
        } else {
          std::string out = "{";
          for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + ref_value_text(x[i]);
          return out + "}";
        }
      },
      v.v);
}

std::string ref_render(const RefExpr& e) {
  switch (e.kind) {
    case RefExpr::Kind::Lit: return ref_value_text(e.literal);
    case RefExpr::Kind::Other: return "other." + e.name;
    case RefExpr::Kind::Not: return "(!" + ref_render(e.kids[0]) + ")";
    case RefExpr::Kind::Neg: return "(-" + ref_render(e.kids[0]) + ")";
    case RefExpr::Kind::Bin: return "(" + ref_render(e.kids[0]) + " " + e.op + " " + ref_render(e.kids[1]) + ")";
    case RefExpr::Kind::List: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.kids.size(); ++i) out += (i ? ", " : "") + ref_render(e.kids[i]);
      return out + "}";
    }
    case RefExpr::Kind::Member: return "member(" + ref_render(e.kids[0]) + ", " + ref_render(e.kids[1]) + ")";
  }
  return {};
}

namespace {

RefValue random_literal(std::mt19937_64& rng) {
  static const std::int64_t ints[] = {0, 1, 2, 3, -1, -7, 10, 4611686018427387904LL};
  static const double reals[] = {0.0, 0.5, 1.5, 2.0, -2.5, 1000000.5};
  static const char* strings[] = {"a", "b", "A", "ATLAS", ""};
  switch (rng() % 5) {
    case 0: return {ints[rng() % std::size(ints)]};
    case 1: return {reals[rng() % std::size(reals)]};
    case 2: return {std::string(strings[rng() % std::size(strings)])};
    case 3: return {rng() % 2 == 0};
    default: return rng() % 3 == 0 ? kUndef : RefValue{static_cast<std::int64_t>(rng() % 5)};
  }
}

RefExpr leaf(std::mt19937_64& rng) {
  RefExpr e;
  if (rng() % 3 == 0) {
    static const char* names[] = {"Count", "Ratio", "Name", "Flag", "Tags", "Missing", "count"};
    e.kind = RefExpr::Kind::Other;
    e.name = names[rng() % std::size(names)];
  } else {
    e.literal = random_literal(rng);
  }
  return e;
}

}  // namespace

RefExpr random_expr(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || rng() % 4 == 0) return leaf(rng);
  static const char* ops[] = {"==", "!=", "<", "<=", ">", ">=", "&&", "||", "+", "-", "*", "/"};
  RefExpr e;
  switch (rng() % 6) {
    case 0:
      e.kind = RefExpr::Kind::Not;
      e.kids.push_back(random_expr(rng, depth - 1));
      break;
    case 1:
      e.kind = RefExpr::Kind::Neg;
      e.kids.push_back(random_expr(rng, depth - 1));
      break;
    case 2: {
      e.kind = RefExpr::Kind::Member;
      e.kids.push_back(random_expr(rng, depth - 1));
      RefExpr list;
      if (rng() % 2 == 0) {
        list.kind = RefExpr::Kind::List;
        const auto n = rng() % 4;
        for (std::size_t i = 0; i < n; ++i) list.kids.push_back(leaf(rng));
      } else {
        list.kind = RefExpr::Kind::Other;
        list.name = "Tags";
      }
      e.kids.push_back(std::move(list));
      if (rng() % 5 == 0) std::swap(e.kids[0], e.kids[1]);
      break;
    }
    default:
      e.kind = RefExpr::Kind::Bin;
      e.op = ops[rng() % std::size(ops)];
      e.kids.push_back(random_expr(rng, depth - 1));
      e.kids.push_back(random_expr(rng, depth - 1));
  }
  return e;
}

RefAd random_ad(std::mt19937_64& rng) {
  RefAd ad;
  if (rng() % 5) ad["Count"] = {static_cast<std::int64_t>(rng() % 9) - 2};
  if (rng() % 5) ad["Ratio"] = {static_cast<double>(rng() % 7) / 2.0};
  if (rng() % 5) ad["Name"] = {std::string(rng() % 2 ? "ATLAS" : "a")};
  if (rng() % 5) ad["Flag"] = {rng() % 2 == 0};
  if (rng() % 5) {
    RefList tags;
    if (rng() % 2) tags.push_back({std::string("ATLAS")});
    if (rng() % 2) tags.push_back({std::string("CMS")});
    if (rng() % 2) tags.push_back({static_cast<std::int64_t>(2)});
    ad["Tags"] = {tags};
  }
  return ad;
}

// ---------------------------------------------------------------------------

std::string oracle_rank_text(OracleJob::Rank rank) {
  switch (rank) {
    case OracleJob::Rank::FreeCpus: return "other.FreeCPUs";
    case OracleJob::Rank::FewestWaiting: return "-other.WaitingJobs";
    case OracleJob::Rank::Constant: return "1";
    case OracleJob::Rank::Missing: return "other.NoSuchAttribute";
    case OracleJob::Rank::Mixed: return "other.FreeCPUs / other.WaitingJobs";
  }
  return {};
}

std::optional<std::string> oracle_choose(const std::vector<OracleCe>& ces, const OracleJob& job) {
  struct Scored {
    std::string id;
    bool close;
    std::optional<double> rank;
  };
  std::vector<Scored> pool;
  std::set<std::string> seen;
  for (const auto& ce : ces) {
    if (job.glue_aware && !ce.glue) continue;
    if (job.exclude.count(ce.id) || seen.count(ce.id)) continue;
    seen.insert(ce.id);
    if (std::find(ce.vos.begin(), ce.vos.end(), job.vo) == ce.vos.end()) continue;
    if (!ce.access) continue;
    if (std::find(ce.tags.begin(), ce.tags.end(), job.tag) == ce.tags.end()) continue;
    if (ce.free < job.min_free) continue;
    bool close = true;
    if (job.has_input) {
      close = false;
      for (const auto& se : ce.close_ses) close = close || job.replica_ses.count(se) > 0;
    }
    if (job.strict && !close) continue;
    std::optional<double> rank;
    switch (job.rank) {
      case OracleJob::Rank::FreeCpus: rank = ce.free; break;
      case OracleJob::Rank::FewestWaiting: rank = -ce.waiting; break;
      case OracleJob::Rank::Constant: rank = 1; break;
      case OracleJob::Rank::Missing: break;
      case OracleJob::Rank::Mixed:
        if (ce.waiting != 0) rank = ce.free / ce.waiting;
        break;
    }
    pool.push_back({ce.id, close, rank});
  }
  if (pool.empty()) return std::nullopt;
  const auto keep = [&](auto pred) {
    if (std::any_of(pool.begin(), pool.end(), pred)) std::erase_if(pool, [&](const Scored& s) { return !pred(s); });
  };
  keep([](const Scored& s) { return s.close; });
  keep([](const Scored& s) { return s.rank.has_value(); });
  if (pool.front().rank) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : pool) best = std::max(best, *s.rank);
    std::erase_if(pool, [&](const Scored& s) { return *s.rank != best; });
  }
  std::string chosen = pool.front().id;
  for (const auto& s : pool) chosen = std::min(chosen, s.id);
  return chosen;
}

BrokerCase random_broker_case(std::mt19937_64& rng, int max_ces) {
  static const std::vector<std::string> vos{"alpha", "beta", "gamma"};
  static const std::vector<std::string> tags{"ATLAS", "CMS", "CMSIM-125"};
  static const std::vector<std::string> ses{"se1", "se2", "se3", "se4"};
  const auto pick = [&](const std::vector<std::string>& from) {
    std::vector<std::string> out;
    for (const auto& x : from)
      if (rng() % 2) out.push_back(x);
    return out;
  };
  BrokerCase c;
  const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_ces));
  for (int i = 0; i < n; ++i) {
    OracleCe ce;
    ce.id = "ce" + std::to_string(rng() % 100) + "." + std::to_string(i) + ":2119/pbs-long";
    ce.vos = pick(vos);
    ce.tags = pick(tags);
    ce.total = 1 + static_cast<int>(rng() % 8);
    ce.free = static_cast<int>(rng() % static_cast<std::uint64_t>(ce.total + 1));
    ce.waiting = rng() % 3 == 0 ? 0 : static_cast<int>(rng() % 6);
    ce.close_ses = pick(ses);
    ce.glue = rng() % 3 == 0;
    ce.access = rng() % 6 != 0;
    c.ces.push_back(std::move(ce));
  }
  auto& job = c.job;
  job.vo = vos[rng() % vos.size()];
  job.tag = tags[rng() % tags.size()];
  job.min_free = static_cast<int>(rng() % 3);
  job.rank = static_cast<OracleJob::Rank>(rng() % 5);
  job.has_input = rng() % 2;
  if (job.has_input)
    for (const auto& se : pick(ses)) job.replica_ses.insert(se);
  job.strict = rng() % 4 == 0;
  job.glue_aware = rng() % 4 == 0;
  if (rng() % 4 == 0 && !c.ces.empty()) job.exclude.insert(c.ces[rng() % c.ces.size()].id);
  return c;
}

// ---------------------------------------------------------------------------

std::vector<FifoRun> fifo_replay(int cpus, const std::vector<FifoJob>& jobs) {
  std::vector<FifoRun> runs(jobs.size());
  std::vector<bool> started(jobs.size(), false);
  std::size_t next = 0;  // FIFO head
  std::int64_t t = 0;
  std::size_t done = 0;
  while (done < jobs.size()) {
    int busy = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (started[i] && runs[i].end > t) ++busy;
    while (next < jobs.size() && jobs[next].arrival <= t && busy < cpus) {
      runs[next] = {t, t + jobs[next].duration};
      started[next] = true;
      ++busy;
      ++next;
    }
    done = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (started[i] && runs[i].end <= t + 1) ++done;
    ++t;
  }
  return runs;
}

int free_cpus_at(int cpus, const std::vector<FifoRun>& runs, std::int64_t t) {
  int busy = 0;
  for (const auto& r : runs)
    if (r.start <= t && t < r.end) ++busy;
  return cpus - busy;
}

// ---------------------------------------------------------------------------

AuthOutcome auth_table(bool trusted, bool valid, bool revoked, bool crl_fresh) {
  // Rows indexed by (trusted, valid, revoked) as bits 2..0.
  static const AuthOutcome table[8] = {
      AuthOutcome::UntrustedCa,  // untrusted, expired, revoked
      AuthOutcome::UntrustedCa,  // untrusted, expired, clean
      AuthOutcome::UntrustedCa,  // untrusted, valid, revoked
      AuthOutcome::UntrustedCa,  // untrusted, valid, clean
      AuthOutcome::Expired,      // trusted, expired, revoked
      AuthOutcome::Expired,      // trusted, expired, clean
      AuthOutcome::Revoked,      // trusted, valid, revoked
      AuthOutcome::Accepted,     // trusted, valid, clean
  };
  const int row = (trusted ? 4 : 0) | (valid ? 2 : 0) | (revoked ? 0 : 1);
  const auto outcome = table[row];
  if (outcome == AuthOutcome::Accepted && !crl_fresh) return AuthOutcome::StaleCrl;
  return outcome;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> split_dn(const std::string& dn) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream s(dn);
  std::string part;
  while (std::getline(s, part, ',')) {
    const auto a = part.find_first_not_of(' ');
    const auto b = part.find_last_not_of(' ');
    part = part.substr(a, b - a + 1);
    const auto eq = part.find('=');
    out.emplace_back(lower(part.substr(0, eq)), part.substr(eq + 1));
  }
  return out;
}

}  // namespace

std::vector<std::string> oracle_search(const std::vector<OracleEntry>& entries, const std::string& base, bool subtree,
                                       const std::vector<std::pair<std::string, std::string>>& equalities) {
  const auto b = split_dn(base);
  std::vector<std::string> out;
  for (const auto& e : entries) {
    const auto d = split_dn(e.dn);
    bool in_scope = false;
    if (!subtree) {
      in_scope = d == b;
    } else if (d.size() >= b.size()) {
      in_scope = std::equal(b.rbegin(), b.rend(), d.rbegin());
    }
    if (!in_scope) continue;
    bool ok = true;
    for (const auto& [attr, value] : equalities) {
      if (lower(attr) == "objectclass") {
        ok = ok && e.classes.count(lower(value)) > 0;
        continue;
      }
      const auto it = e.attributes.find(lower(attr));
      ok = ok && it != e.attributes.end() && std::find(it->second.begin(), it->second.end(), value) != it->second.end();
    }
    if (ok) out.push_back(e.dn);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string model_path(const std::string& lfn) {
  // lfn:/<vo>/<path>  ->  /grid/<vo>/<path>
  return "/grid/" + lfn.substr(5);
}

}  // namespace

bool ReplicaModel::gridftp_up(const std::string& site) const {
  const auto it = gridftp_.find(site);
  return it == gridftp_.end() || it->second;
}

void ReplicaModel::preload(const std::string& lfn, const std::string& se, std::int64_t size) {
  replicas_[lfn][se] = size;
  files_[se][model_path(lfn)] = size;
}

std::int64_t ReplicaModel::used(const std::string& se) const {
  std::int64_t total = 0;
  if (const auto it = files_.find(se); it != files_.end())
    for (const auto& [path, size] : it->second) total += size;
  return total;
}

bool ReplicaModel::store(const std::string& lfn, const std::string& se, std::int64_t size, Outcome& out) {
  if (const auto it = replicas_.find(lfn); it != replicas_.end() && !it->second.empty() &&
                                           it->second.begin()->second != size) {
    out.error = "SizeMismatch";
    return false;
  }
  const auto path = model_path(lfn);
  std::int64_t existing = 0;
  if (const auto f = files_[se].find(path); f != files_[se].end()) existing = f->second;
  if (used(se) - existing + size > ses_.at(se).capacity) {
    out.error = "NoSpace";
    return false;
  }
  files_[se][path] = size;
  replicas_[lfn][se] = size;
  out.copied = true;
  out.se = se;
  return true;
}

ReplicaModel::Outcome ReplicaModel::copy(const std::string& source, const std::string& path, const std::string& se,
                                         const std::string& lfn) {
  Outcome out;
  if (!ses_.count(se)) return {"UnknownSe"};
  std::optional<std::int64_t> size;
  if (source.rfind("se:", 0) == 0) {
    const auto host = source.substr(3);
    if (const auto f = files_.find(host); f != files_.end())
      if (const auto p = f->second.find(path); p != f->second.end()) size = p->second;
  } else if (const auto s = sources_.find(source); s != sources_.end()) {
    if (const auto p = s->second.find(path); p != s->second.end()) size = p->second;
  }
  if (!size) return {"SourceMissing"};
  if (source.rfind("wn:", 0) == 0) {
    const auto it = outbound_.find(source.substr(3));
    if (it != outbound_.end() && !it->second) return {"ConnectivityDenied"};
  }
  if (source.rfind("se:", 0) == 0 && !gridftp_up(ses_.at(source.substr(3)).site)) return {"ConnectivityDenied"};
  if (!gridftp_up(ses_.at(se).site)) return {"ConnectivityDenied"};
  if (const auto it = replicas_.find(lfn); it != replicas_.end())
    if (const auto r = it->second.find(se); r != it->second.end()) {
      if (r->second != *size) return {"SizeMismatch"};
      return {"", false, se};
    }
  store(lfn, se, *size, out);
  return out;
}

ReplicaModel::Outcome ReplicaModel::replicate(const std::string& lfn, const std::string& se) {
  Outcome out;
  const auto it = replicas_.find(lfn);
  if (it == replicas_.end() || it->second.empty()) return {"UnknownLfn"};
  if (!ses_.count(se)) return {"UnknownSe"};
  if (it->second.count(se)) return {"", false, se};
  const auto& dest = ses_.at(se);
  if (!gridftp_up(dest.site)) return {"ConnectivityDenied"};
  std::string best;
  int best_tier = 99;
  for (const auto& [host, size] : it->second) {  // host order is ascending
    const auto& src = ses_.at(host);
    if (!gridftp_up(src.site)) continue;
    const int tier = src.site == dest.site ? 0 : (src.continent == dest.continent ? 1 : 2);
    if (tier < best_tier) {
      best_tier = tier;
      best = host;
    }
  }
  if (best.empty()) return {"ConnectivityDenied"};
  store(lfn, se, it->second.at(best), out);
  return out;
}

ReplicaModel::Outcome ReplicaModel::unregister(const std::string& lfn, const std::string& se) {
  const auto it = replicas_.find(lfn);
  if (it == replicas_.end() || !it->second.count(se)) return {"UnknownPair"};
  it->second.erase(se);
  if (it->second.empty()) replicas_.erase(it);
  return {"", false, se};
}

std::map<std::string, std::set<std::string>> ReplicaModel::catalogue() const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [lfn, where] : replicas_)
    for (const auto& [se, size] : where) out[lfn].insert(se);
  return out;
}

}  // namespace worldgrid::testing
