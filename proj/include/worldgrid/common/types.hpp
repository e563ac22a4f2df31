// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace worldgrid {

// Virtual time in whole seconds.
using SimTime = std::int64_t;

enum class Flavor { EDG, VDT };
enum class Continent { EU, US };

std::string_view to_string(Flavor f) noexcept;
std::string_view to_string(Continent c) noexcept;
Flavor parse_flavor(std::string_view text);
Continent parse_continent(std::string_view text);

// ASCII helpers shared by the text formats.
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
std::string_view trim(std::string_view s) noexcept;

struct CaseInsensitiveLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept;
};

}  // namespace worldgrid
