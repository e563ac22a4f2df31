// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>

#include "oracles.hpp"
#include "worldgrid/gateway/testbed.hpp"

namespace worldgrid::testing {

std::string shipped_scenario_path();
std::string shipped_dir();
std::string read_file(const std::string& path);

// Shipped-scenario subjects.
inline const std::string kMaria = "/C=IT/O=INFN/OU=Personal Certificate/L=Padova/CN=Maria Rossi";
inline const std::string kLuca = "/C=IT/O=INFN/OU=Personal Certificate/L=Milano/CN=Luca Bianchi";  // unsigned
inline const std::string kGiulia = "/C=IT/O=INFN/OU=Personal Certificate/L=Pisa/CN=Giulia Neri";   // revoked
inline const std::string kJan = "/C=CH/O=CERN/OU=GRID/CN=Jan Novak";
inline const std::string kAlex = "/DC=org/DC=doegrids/OU=People/CN=Alex Smith";
inline const std::string kPat = "/DC=org/DC=doegrids/OU=People/CN=Pat Outsider";
inline const std::string kSam = "/O=Grid/O=Globus/OU=uchicago.edu/CN=Sam Lee";

// Two EDG sites (EU-A, EU-B) and one VDT site (US-A), one broker, one
// catalogue; `extra` lines are appended before parsing.
std::string small_scenario_text(const std::string& extra = {});
std::unique_ptr<gateway::Testbed> small_testbed(std::uint64_t seed = 1, const std::string& extra = {});
std::unique_ptr<gateway::Testbed> shipped_testbed(std::uint64_t seed = 7);

// JDL for a job needing `tag`, run by a member of `vo`.
std::string tagged_jdl(const std::string& vo, const std::string& tag, const std::string& extra = {});

// Runs the production matchmaker over directory entries and JDL built
// from the case. Entries are shuffled with `shuffle_seed`.
std::optional<std::string> production_choose(const BrokerCase& c, std::uint64_t shuffle_seed);

// Plays one seeded random sequence of copy, replicate, unregister and
// connectivity changes against both the replica manager and the reference
// model. Returns a description of the first disagreement.
std::optional<std::string> replica_sequence_mismatch(std::uint64_t seed, int steps = 25);

}  // namespace worldgrid::testing
