// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "worldgrid/infosys/entry.hpp"

namespace worldgrid::infosys {

// Line-oriented source records:
//
//   dn: ceid=ce.example.org:2119/jobmanager-pbs-long, mds-vo-name=Site, o=grid
//   objectClass: EdgCE
//   FreeCPUs: 4
//   x-published-at: 120
//
// Records are separated by blank lines, '#' starts a comment line.
// `x-published-at` and `x-source` are metadata, not attributes. Throws
// Error(LdifSyntax) carrying the line number.
std::vector<DirectoryEntry> parse_ldif(std::string_view text, std::string_view default_source = {});

// Canonical rendering: attributes in name order, metadata last.
std::string write_ldif(std::span<const DirectoryEntry> entries);
std::string write_ldif_entry(const DirectoryEntry& entry);

}  // namespace worldgrid::infosys
