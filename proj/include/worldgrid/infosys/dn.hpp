// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace worldgrid::infosys {

// One `attribute=value` step of a distinguished name. The attribute is
// stored lowercased; the value is kept verbatim.
class Rdn {
 public:
  Rdn(std::string_view attribute, std::string_view value);

  const std::string& attribute() const noexcept { return attribute_; }
  const std::string& value() const noexcept { return value_; }

  std::string to_string() const;

  friend bool operator==(const Rdn&, const Rdn&) = default;
  friend auto operator<=>(const Rdn&, const Rdn&) = default;

 private:
  std::string attribute_;
  std::string value_;
};

// Leaf-first sequence of RDNs. Equality and containment are decided one
// component at a time, never on the rendered string, so `hostname=grid001`
// is unrelated to `mds-hostname=grid001`.
class DistinguishedName {
 public:
  explicit DistinguishedName(std::vector<Rdn> components);

  // "leaf=a, parent=b, o=grid"
  static DistinguishedName parse(std::string_view text);

  const std::vector<Rdn>& components() const noexcept { return components_; }
  const Rdn& leaf() const noexcept { return components_.front(); }
  std::size_t depth() const noexcept { return components_.size(); }

  // True when this name equals `base` or extends it towards the leaves.
  bool is_within(const DistinguishedName& base) const noexcept;

  DistinguishedName child(Rdn leaf) const;

  std::string to_string() const;

  friend bool operator==(const DistinguishedName&, const DistinguishedName&) = default;

 private:
  std::vector<Rdn> components_;
};

// Total order used for deterministic result and serialization order:
// lexicographic on the rendered form.
struct DnOrder {
  bool operator()(const DistinguishedName& a, const DistinguishedName& b) const {
    return a.to_string() < b.to_string();
  }
};

}  // namespace worldgrid::infosys
