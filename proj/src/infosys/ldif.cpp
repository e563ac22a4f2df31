// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/ldif.hpp"

#include <charconv>
#include <optional>

#include "worldgrid/common/error.hpp"

namespace worldgrid::infosys {

namespace {

struct PendingRecord {
  std::optional<DistinguishedName> dn;
  ObjectClassSet classes;
  AttributeMap attributes;
  std::string source;
  SimTime published_at = 0;
  std::size_t first_line = 0;
  bool active = false;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::LdifSyntax, "ldif line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<DirectoryEntry> parse_ldif(std::string_view text, std::string_view default_source) {
  std::vector<DirectoryEntry> out;
  PendingRecord rec;
  std::size_t line_no = 0;

  const auto flush = [&] {
    if (!rec.active) return;
    if (!rec.dn) fail(rec.first_line, "record without dn");
    out.push_back(DirectoryEntry{*rec.dn, std::move(rec.classes), std::move(rec.attributes),
                                 rec.source.empty() ? std::string(default_source) : rec.source,
                                 rec.published_at});
    rec = PendingRecord{};
  };

  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail(line_no, "expected 'name: value'");
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    if (key.empty()) fail(line_no, "empty attribute name");
    if (!rec.active) {
      rec.active = true;
      rec.first_line = line_no;
    }
    if (iequals(key, "dn")) {
      if (rec.dn) fail(line_no, "second dn in one record");
      try {
        rec.dn = DistinguishedName::parse(value);
      } catch (const Error& e) {
        fail(line_no, e.what());
      }
    } else if (iequals(key, "objectClass")) {
      if (value.empty()) fail(line_no, "empty objectClass");
      rec.classes.emplace(value);
    } else if (iequals(key, "x-source")) {
      rec.source = std::string(value);
    } else if (iequals(key, "x-published-at")) {
      SimTime t = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), t);
      if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) fail(line_no, "bad x-published-at");
      rec.published_at = t;
    } else {
      if (value.empty()) fail(line_no, "empty value for " + std::string(key));
      rec.attributes[std::string(key)].emplace_back(value);
    }
  }
  flush();
  return out;
}

std::string write_ldif_entry(const DirectoryEntry& e) {
  std::string out = "dn: " + e.dn.to_string() + "\n";
  for (const auto& cls : e.object_classes) out += "objectClass: " + cls + "\n";
  for (const auto& [name, vals] : e.attributes)
    for (const auto& v : vals) out += name + ": " + v + "\n";
  if (!e.source_id.empty()) out += "x-source: " + e.source_id + "\n";
  out += "x-published-at: " + std::to_string(e.published_at) + "\n";
  return out;
}

std::string write_ldif(std::span<const DirectoryEntry> entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += "\n";
    out += write_ldif_entry(e);
  }
  return out;
}

}  // namespace worldgrid::infosys
