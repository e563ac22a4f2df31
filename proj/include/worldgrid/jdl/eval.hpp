// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>

#include "worldgrid/jdl/expr.hpp"

namespace worldgrid::jdl {

using ExprMap = std::map<std::string, ExprPtr, CaseInsensitiveLess>;

// `other` is the candidate resource, `self` the job's own attributes. Absent
// names evaluate to Undefined.
struct EvalEnv {
  const ValueMap* other = nullptr;
  const ExprMap* self = nullptr;
};

// Three-valued evaluation. Never throws for well-formed trees: type errors,
// division by zero and overflow all yield Undefined. `&&` is false if either
// side is false and `||` is true if either side is true, even when the other
// side is Undefined.
Value evaluate(const Expr& expr, const EvalEnv& env);

}  // namespace worldgrid::jdl
