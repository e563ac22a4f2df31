// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "worldgrid/gateway/client.hpp"

namespace worldgrid::gateway {

// Exit status for usage errors and transport failures.
inline constexpr int kUsageExit = 2;
inline constexpr int kTransportExit = 3;

// Runs one user command (`submit ...`, `status ...`, `sim advance 60`, ...)
// through the client. Results go to `out` as JSON or plain text; failures
// print `error: <Code>: <message>` to `err`. Relative input files resolve
// against `base_dir`. Returns the process exit status.
int run_command(Client& client, const std::vector<std::string>& args, const std::filesystem::path& base_dir,
                std::ostream& out, std::ostream& err);

// Shell-style word splitting: whitespace separates, single quotes are
// literal, double quotes honour backslash escapes. Throws InvalidArgument on
// an unterminated quote.
std::vector<std::string> split_command_line(std::string_view line);

struct ScriptOutcome {
  std::size_t commands = 0;
  std::size_t unexpected = 0;  // failures not marked with '!', or '!' lines that succeeded
};

// One command per line; '#' starts a comment line. A leading '!' marks a
// command that is expected to fail. Each command is echoed as `$ <line>`.
ScriptOutcome run_script(Client& client, std::string_view script, const std::filesystem::path& base_dir,
                         std::ostream& out, std::ostream& err);

}  // namespace worldgrid::gateway
