// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/dn.hpp"

#include <algorithm>

#include "worldgrid/common/error.hpp"
#include "worldgrid/common/types.hpp"

namespace worldgrid::infosys {

Rdn::Rdn(std::string_view attribute, std::string_view value)
    : attribute_(to_lower(trim(attribute))), value_(trim(value)) {
  if (attribute_.empty()) throw Error(ErrorCode::InvalidArgument, "empty RDN attribute");
  if (value_.empty()) throw Error(ErrorCode::InvalidArgument, "empty RDN value for " + attribute_);
  if (value_.find(',') != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "RDN value may not contain ','");
  if (attribute_.find_first_of("=,() ") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "bad RDN attribute '" + attribute_ + "'");
}

std::string Rdn::to_string() const { return attribute_ + "=" + value_; }

DistinguishedName::DistinguishedName(std::vector<Rdn> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "empty distinguished name");
}

DistinguishedName DistinguishedName::parse(std::string_view text) {
  std::vector<Rdn> parts;
  while (true) {
    const auto comma = text.find(',');
    const auto piece = trim(text.substr(0, comma));
    const auto eq = piece.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, "malformed RDN '" + std::string(piece) + "'");
    parts.emplace_back(piece.substr(0, eq), piece.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return DistinguishedName(std::move(parts));
}

bool DistinguishedName::is_within(const DistinguishedName& base) const noexcept {
  if (base.components_.size() > components_.size()) return false;
  return std::equal(base.components_.rbegin(), base.components_.rend(), components_.rbegin());
}

DistinguishedName DistinguishedName::child(Rdn leaf) const {
  std::vector<Rdn> parts;
  parts.reserve(components_.size() + 1);
  parts.push_back(std::move(leaf));
  parts.insert(parts.end(), components_.begin(), components_.end());
  return DistinguishedName(std::move(parts));
}

std::string DistinguishedName::to_string() const {
  std::string out;
  for (const auto& rdn : components_) {
    if (!out.empty()) out += ", ";
    out += rdn.to_string();
  }
  return out;
}

}  // namespace worldgrid::infosys
