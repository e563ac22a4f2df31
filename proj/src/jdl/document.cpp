// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/jdl/document.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <set>

#include "parser.hpp"
#include "worldgrid/common/error.hpp"

namespace worldgrid::jdl {

namespace {

using detail::Tok;

enum class Field {
  Executable, Arguments, StdOutput, StdError, InputSandbox, OutputSandbox, InputData,
  VirtualOrganisation, Requirements, Rank, Other,
};

struct FieldName {
  Field field;
  std::string_view name;
};

constexpr FieldName kFields[] = {
    {Field::Executable, "Executable"},
    {Field::Arguments, "Arguments"},
    {Field::StdOutput, "StdOutput"},
    {Field::StdError, "StdError"},
    {Field::InputSandbox, "InputSandbox"},
    {Field::OutputSandbox, "OutputSandbox"},
    {Field::InputData, "InputData"},
    {Field::VirtualOrganisation, "VirtualOrganisation"},
    {Field::Requirements, "Requirements"},
    {Field::Rank, "Rank"},
};

Field classify(std::string_view name) {
  for (const auto& f : kFields)
    if (iequals(f.name, name)) return f.field;
  return Field::Other;
}

const std::string* string_literal(const Expr& e) {
  const auto* lit = std::get_if<Literal>(&e.node);
  if (lit == nullptr || !lit->value.is_string()) return nullptr;
  return &lit->value.as_string();
}

std::optional<std::vector<std::string>> string_list(const Expr& e) {
  if (const auto* s = string_literal(e)) return std::vector<std::string>{*s};
  const auto* list = std::get_if<ListExpr>(&e.node);
  if (list == nullptr) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& item : list->items) {
    const auto* s = string_literal(*item);
    if (s == nullptr) return std::nullopt;
    out.push_back(*s);
  }
  return out;
}

std::string list_text(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + Value(items[i]).to_string();
  return out + "}";
}

}  // namespace

const Expr* JdlDocument::find_extra(std::string_view name) const {
  for (const auto& [n, e] : extra)
    if (iequals(n, name)) return e.get();
  return nullptr;
}

ExprMap JdlDocument::self_attributes() const {
  ExprMap m;
  m["Executable"] = make_literal(Value(executable));
  if (!arguments.empty()) m["Arguments"] = make_literal(Value(arguments));
  if (!std_output.empty()) m["StdOutput"] = make_literal(Value(std_output));
  if (!std_error.empty()) m["StdError"] = make_literal(Value(std_error));
  if (!virtual_organisation.empty()) m["VirtualOrganisation"] = make_literal(Value(virtual_organisation));
  m["InputSandbox"] = make_literal(Value::string_list(input_sandbox));
  m["OutputSandbox"] = make_literal(Value::string_list(output_sandbox));
  m["InputData"] = make_literal(Value::string_list(input_data));
  m["Requirements"] = requirements;
  if (rank) m["Rank"] = rank;
  for (const auto& [name, e] : extra) m[name] = e;
  return m;
}

JdlDocument parse_jdl(std::string_view text) {
  detail::Parser p(detail::tokenize(text));
  JdlDocument doc;
  std::set<std::string, CaseInsensitiveLess> seen;

  const bool bracketed = p.at(Tok::LBracket);
  if (bracketed) p.take();

  while (p.at(Tok::Ident)) {
    const auto name_tok = p.take();
    if (!seen.insert(name_tok.text).second)
      throw Error(ErrorCode::DuplicateAttribute,
                  fmt::format("line {}, column {}: attribute '{}' given twice", name_tok.line, name_tok.column,
                              name_tok.text));
    p.expect(Tok::Assign, "'=' after attribute name");
    const auto value_tok = p.peek();
    auto value = p.expression();

    const auto need_string = [&](std::string& dest) {
      const auto* s = string_literal(*value);
      if (s == nullptr) detail::syntax_error(value_tok.line, value_tok.column, name_tok.text + " must be a string");
      dest = *s;
    };
    const auto need_list = [&](std::vector<std::string>& dest) {
      auto items = string_list(*value);
      if (!items)
        detail::syntax_error(value_tok.line, value_tok.column, name_tok.text + " must be a string or list of strings");
      dest = std::move(*items);
    };

    switch (classify(name_tok.text)) {
      case Field::Executable: need_string(doc.executable); break;
      case Field::Arguments: need_string(doc.arguments); break;
      case Field::StdOutput: need_string(doc.std_output); break;
      case Field::StdError: need_string(doc.std_error); break;
      case Field::VirtualOrganisation: need_string(doc.virtual_organisation); break;
      case Field::InputSandbox: need_list(doc.input_sandbox); break;
      case Field::OutputSandbox: need_list(doc.output_sandbox); break;
      case Field::InputData: need_list(doc.input_data); break;
      case Field::Requirements: doc.requirements = value; break;
      case Field::Rank: doc.rank = value; break;
      case Field::Other: doc.extra.emplace_back(name_tok.text, value); break;
    }

    if (p.at(Tok::Semi)) {
      p.take();
    } else if (!p.at(Tok::End) && !p.at(Tok::RBracket)) {
      p.fail_here("expected ';' after attribute value");
    }
  }
  if (bracketed) p.expect(Tok::RBracket, "']'");
  if (!p.at(Tok::End)) p.fail_here("expected attribute name");

  if (doc.executable.empty()) {
    const auto& end = p.peek();
    detail::syntax_error(end.line, end.column, "Executable is required");
  }
  if (!doc.requirements) doc.requirements = make_literal(Value(true));
  return doc;
}

std::string serialize(const JdlDocument& doc) {
  std::vector<std::pair<std::string, std::string>> attrs;
  const auto add_string = [&](std::string_view name, const std::string& v) {
    if (!v.empty()) attrs.emplace_back(name, Value(v).to_string());
  };
  const auto add_list = [&](std::string_view name, const std::vector<std::string>& v) {
    if (!v.empty()) attrs.emplace_back(name, list_text(v));
  };
  add_string("Executable", doc.executable);
  add_string("Arguments", doc.arguments);
  add_string("StdOutput", doc.std_output);
  add_string("StdError", doc.std_error);
  add_string("VirtualOrganisation", doc.virtual_organisation);
  add_list("InputSandbox", doc.input_sandbox);
  add_list("OutputSandbox", doc.output_sandbox);
  add_list("InputData", doc.input_data);
  if (doc.requirements) attrs.emplace_back("Requirements", to_string(*doc.requirements));
  if (doc.rank) attrs.emplace_back("Rank", to_string(*doc.rank));
  for (const auto& [name, e] : doc.extra) attrs.emplace_back(name, to_string(*e));

  std::stable_sort(attrs.begin(), attrs.end(),
                   [](const auto& a, const auto& b) { return CaseInsensitiveLess{}(a.first, b.first); });
  std::string out;
  for (const auto& [name, text] : attrs) out += name + " = " + text + ";\n";
  return out;
}

bool structurally_equal(const JdlDocument& a, const JdlDocument& b) {
  const auto expr_eq = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return structurally_equal(*x, *y);
  };
  if (a.executable != b.executable || a.arguments != b.arguments || a.std_output != b.std_output ||
      a.std_error != b.std_error || a.input_sandbox != b.input_sandbox || a.output_sandbox != b.output_sandbox ||
      a.input_data != b.input_data || a.virtual_organisation != b.virtual_organisation ||
      !expr_eq(a.requirements, b.requirements) || !expr_eq(a.rank, b.rank) || a.extra.size() != b.extra.size())
    return false;
  // Extra attributes compare as a set; serialization reorders them.
  for (const auto& [name, e] : a.extra) {
    const auto it = std::find_if(b.extra.begin(), b.extra.end(), [&](const auto& kv) { return kv.first == name; });
    if (it == b.extra.end() || !expr_eq(e, it->second)) return false;
  }
  return true;
}

bool requirements_satisfied(const JdlDocument& doc, const ValueMap& resource) {
  if (!doc.requirements) return true;
  const auto self = doc.self_attributes();
  return evaluate(*doc.requirements, EvalEnv{&resource, &self}).is_true();
}

}  // namespace worldgrid::jdl
