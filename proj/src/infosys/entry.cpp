// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/entry.hpp"

namespace worldgrid::infosys {

std::optional<std::string> DirectoryEntry::first(std::string_view name) const {
  const auto it = attributes.find(name);
  if (it == attributes.end() || it->second.empty()) return std::nullopt;
  return it->second.front();
}

const std::vector<std::string>* DirectoryEntry::values(std::string_view name) const {
  const auto it = attributes.find(name);
  return it == attributes.end() ? nullptr : &it->second;
}

}  // namespace worldgrid::infosys
