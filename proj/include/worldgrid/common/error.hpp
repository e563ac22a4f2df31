// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace worldgrid {

// Every module error maps to exactly one code. The gateway turns codes into
// HTTP statuses and the CLI into exit codes.
enum class ErrorCode {
  InvalidArgument,
  // infosys
  DuplicateSourceId,
  UnknownNode,
  CycleDetected,
  AllIndexesDown,
  FilterSyntax,
  LdifSyntax,
  // auth
  UnknownVo,
  UntrustedCa,
  Expired,
  Revoked,
  StaleCrl,
  NotAuthorized,
  UnknownSubject,
  // jdl
  SyntaxError,
  DuplicateAttribute,
  // wms
  ParseError,
  VoMembershipError,
  NoMatchingResources,
  GatekeeperDown,
  SandboxTransferFailed,
  UnknownJob,
  UnknownBroker,
  UnknownCe,
  IllegalTransition,
  // datamgmt
  NoSpace,
  ConnectivityDenied,
  SourceMissing,
  UnknownLfn,
  UnknownPair,
  UnknownSe,
  SizeMismatch,
  // fabric
  ScenarioParseError,
  UnknownSite,
  // monitor
  UnknownFilterValue,
  // gateway
  BadRequest,
  NotFound,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept;

// HTTP status used when the code crosses the gateway.
int http_status(ErrorCode code) noexcept;

// Process exit status used by the CLI. Always nonzero.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace worldgrid
