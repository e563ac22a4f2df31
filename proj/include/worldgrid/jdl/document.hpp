// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "worldgrid/jdl/eval.hpp"

namespace worldgrid::jdl {

// A parsed job description. Attributes the parser does not know about are
// kept under their original spelling and are visible through `self`.
struct JdlDocument {
  std::string executable;
  std::string arguments;
  std::string std_output;
  std::string std_error;
  std::vector<std::string> input_sandbox;
  std::vector<std::string> output_sandbox;
  std::vector<std::string> input_data;
  std::string virtual_organisation;
  ExprPtr requirements;
  ExprPtr rank;  // may be null
  std::vector<std::pair<std::string, ExprPtr>> extra;

  const Expr* find_extra(std::string_view name) const;

  // All attributes as expressions, for evaluation through `self`.
  ExprMap self_attributes() const;
};

// `Name = value;` list, optionally wrapped in `[ ]`. Throws
// Error(SyntaxError) or Error(DuplicateAttribute), both positioned.
JdlDocument parse_jdl(std::string_view text);

// Canonical form: one attribute per line, sorted by name.
std::string serialize(const JdlDocument& doc);

bool structurally_equal(const JdlDocument& a, const JdlDocument& b);

// Requirements evaluate to exactly true; Undefined does not satisfy.
bool requirements_satisfied(const JdlDocument& doc, const ValueMap& resource);

}  // namespace worldgrid::jdl
