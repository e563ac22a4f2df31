// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/common/error.hpp"

namespace worldgrid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateSourceId: return "DuplicateSourceId";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::AllIndexesDown: return "AllIndexesDown";
    case ErrorCode::FilterSyntax: return "FilterSyntax";
    case ErrorCode::LdifSyntax: return "LdifSyntax";
    case ErrorCode::UnknownVo: return "UnknownVo";
    case ErrorCode::UntrustedCa: return "UntrustedCa";
    case ErrorCode::Expired: return "Expired";
    case ErrorCode::Revoked: return "Revoked";
    case ErrorCode::StaleCrl: return "StaleCrl";
    case ErrorCode::NotAuthorized: return "NotAuthorized";
    case ErrorCode::UnknownSubject: return "UnknownSubject";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateAttribute: return "DuplicateAttribute";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VoMembershipError: return "VoMembershipError";
    case ErrorCode::NoMatchingResources: return "NoMatchingResources";
    case ErrorCode::GatekeeperDown: return "GatekeeperDown";
    case ErrorCode::SandboxTransferFailed: return "SandboxTransferFailed";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::UnknownBroker: return "UnknownBroker";
    case ErrorCode::UnknownCe: return "UnknownCe";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::NoSpace: return "NoSpace";
    case ErrorCode::ConnectivityDenied: return "ConnectivityDenied";
    case ErrorCode::SourceMissing: return "SourceMissing";
    case ErrorCode::UnknownLfn: return "UnknownLfn";
    case ErrorCode::UnknownPair: return "UnknownPair";
    case ErrorCode::UnknownSe: return "UnknownSe";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ScenarioParseError: return "ScenarioParseError";
    case ErrorCode::UnknownSite: return "UnknownSite";
    case ErrorCode::UnknownFilterValue: return "UnknownFilterValue";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::NotFound); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownVo:
    case ErrorCode::UnknownSubject:
    case ErrorCode::UnknownJob:
    case ErrorCode::UnknownBroker:
    case ErrorCode::UnknownCe:
    case ErrorCode::UnknownLfn:
    case ErrorCode::UnknownPair:
    case ErrorCode::UnknownSe:
    case ErrorCode::UnknownSite:
    case ErrorCode::UnknownFilterValue:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::UntrustedCa:
    case ErrorCode::Expired:
    case ErrorCode::Revoked:
    case ErrorCode::StaleCrl:
      return 401;
    case ErrorCode::NotAuthorized:
    case ErrorCode::VoMembershipError:
    case ErrorCode::ConnectivityDenied:
      return 403;
    case ErrorCode::DuplicateSourceId:
    case ErrorCode::CycleDetected:
    case ErrorCode::DuplicateAttribute:
    case ErrorCode::IllegalTransition:
    case ErrorCode::SizeMismatch:
      return 409;
    case ErrorCode::NoSpace:
      return 507;
    case ErrorCode::AllIndexesDown:
    case ErrorCode::GatekeeperDown:
    case ErrorCode::NoMatchingResources:
    case ErrorCode::SandboxTransferFailed:
      return 503;
    case ErrorCode::SourceMissing:
      return 410;
    case ErrorCode::InvalidArgument:
    case ErrorCode::FilterSyntax:
    case ErrorCode::LdifSyntax:
    case ErrorCode::SyntaxError:
    case ErrorCode::ParseError:
    case ErrorCode::ScenarioParseError:
    case ErrorCode::BadRequest:
      return 400;
  }
  return 500;
}

int exit_status(ErrorCode code) noexcept {
  return 10 + static_cast<int>(code);
}

}  // namespace worldgrid
