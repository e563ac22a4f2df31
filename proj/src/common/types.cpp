// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/common/types.hpp"

#include <algorithm>
#include <cctype>

#include "worldgrid/common/error.hpp"

namespace worldgrid {

std::string_view to_string(Flavor f) noexcept {
  return f == Flavor::EDG ? "EDG" : "VDT";
}

std::string_view to_string(Continent c) noexcept {
  return c == Continent::EU ? "EU" : "US";
}

Flavor parse_flavor(std::string_view text) {
  if (iequals(text, "EDG")) return Flavor::EDG;
  if (iequals(text, "VDT")) return Flavor::VDT;
  throw Error(ErrorCode::InvalidArgument, "unknown flavor '" + std::string(text) + "'");
}

Continent parse_continent(std::string_view text) {
  if (iequals(text, "EU")) return Continent::EU;
  if (iequals(text, "US")) return Continent::US;
  throw Error(ErrorCode::InvalidArgument, "unknown continent '" + std::string(text) + "'");
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

std::string_view trim(std::string_view s) noexcept {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool CaseInsensitiveLess::operator()(std::string_view a, std::string_view b) const noexcept {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](unsigned char x, unsigned char y) {
                                        return std::tolower(x) < std::tolower(y);
                                      });
}

}  // namespace worldgrid
