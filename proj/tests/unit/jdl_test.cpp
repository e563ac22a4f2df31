// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "worldgrid/common/error.hpp"
#include "worldgrid/jdl/document.hpp"
#include "worldgrid/jdl/eval.hpp"

namespace worldgrid::jdl {
namespace {

Value to_value(const testing::RefValue& r) {
  return std::visit(
      [](const auto& v) -> Value {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, testing::RefUndefined>) {
          return Undefined{};
        } else if constexpr (std::is_same_v<T, testing::RefList>) {
          Value::List items;
          for (const auto& item : v) items.push_back(to_value(item));
          return Value(std::move(items));
        } else {
          return Value(v);
        }
      },
      r.v);
}

Value eval_text(std::string_view text, const ValueMap& other = {}, const ExprMap* self = nullptr) {
  return evaluate(*parse_expression(text), EvalEnv{&other, self});
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

// Random expressions, rendered fully parenthesised, parsed by production
// code and compared against the reference evaluator.
TEST(Evaluator, AgreesWithReferenceOnRandomExpressions) {
  std::mt19937_64 rng(42);
  int defined = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto expr = testing::random_expr(rng, 4);
    const auto ad = testing::random_ad(rng);
    ValueMap other;
    for (const auto& [k, v] : ad) other[k] = to_value(v);
    const auto text = testing::ref_render(expr);
    const auto want = to_value(testing::ref_evaluate(expr, ad));
    const auto got = evaluate(*parse_expression(text), EvalEnv{&other, nullptr});
    ASSERT_EQ(got, want) << text << "\nwant " << want.to_string() << " got " << got.to_string();
    if (!want.is_undefined()) ++defined;
  }
  EXPECT_GT(defined, 1000);  // the generator is not degenerate
}

TEST(Evaluator, RenderedExpressionsRoundTripThroughTheParser) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto expr = parse_expression(testing::ref_render(testing::random_expr(rng, 4)));
    const auto again = parse_expression(to_string(*expr));
    ASSERT_TRUE(structurally_equal(*expr, *again)) << to_string(*expr);
  }
}

TEST(Evaluator, ThreeValuedLogic) {
  EXPECT_EQ(eval_text("false && other.Missing"), Value(false));
  EXPECT_EQ(eval_text("other.Missing && false"), Value(false));
  EXPECT_EQ(eval_text("true || other.Missing"), Value(true));
  EXPECT_TRUE(eval_text("true && other.Missing").is_undefined());
  EXPECT_TRUE(eval_text("!5").is_undefined());
  EXPECT_TRUE(eval_text("true < false").is_undefined());
  EXPECT_EQ(eval_text("true != false"), Value(true));
}

TEST(Evaluator, ArithmeticEdges) {
  EXPECT_TRUE(eval_text("1 / 0").is_undefined());
  EXPECT_TRUE(eval_text("4611686018427387904 * 4").is_undefined());
  EXPECT_EQ(eval_text("7 / 2"), Value(std::int64_t{3}));
  EXPECT_EQ(eval_text("7 / 2.0"), Value(3.5));
  EXPECT_EQ(eval_text("2 == 2.0"), Value(true));
  EXPECT_TRUE(eval_text("\"a\" + 1").is_undefined());
  EXPECT_EQ(eval_text("\"ATLAS\" == \"atlas\""), Value(false));
}

TEST(Evaluator, MemberAcceptsEitherArgumentOrder) {
  ValueMap other{{"RunTimeEnvironment", Value::string_list({"ATLAS", "CMSIM-125"})}};
  EXPECT_EQ(eval_text("Member(\"ATLAS\", other.RunTimeEnvironment)", other), Value(true));
  EXPECT_EQ(eval_text("member(other.RunTimeEnvironment, \"CMSIM-125\")", other), Value(true));
  EXPECT_EQ(eval_text("Member(\"CMS\", other.RunTimeEnvironment)", other), Value(false));
  EXPECT_TRUE(eval_text("Member(\"CMS\", other.Missing)", other).is_undefined());
}

TEST(Evaluator, AttributeNamesIgnoreCaseAndSelfRefsResolve) {
  ValueMap other{{"FreeCPUs", Value(3)}};
  EXPECT_EQ(eval_text("other.freecpus", other), Value(std::int64_t{3}));
  const auto doc = parse_jdl("Executable = \"x\"; Threshold = 2; Requirements = other.FreeCPUs > Threshold;");
  EXPECT_TRUE(requirements_satisfied(doc, other));
  const auto loop = parse_jdl("Executable = \"x\"; A = B; B = A; Requirements = A;");
  EXPECT_FALSE(requirements_satisfied(loop, other));
}

TEST(Document, ParsesTheStandardFields) {
  const auto doc = parse_jdl(R"([
    Executable = "atlsim";
    InputSandbox = {"/home/grid/atlsim.mac"};
    OutputSandbox = "atlsim.out";
    InputData = {"lfn:/datatag/a", "lfn:/datatag/b"};
    VirtualOrganisation = "datatag";
    Rank = other.FreeCPUs;
    MaxCpuTime = 60
  ])");
  EXPECT_EQ(doc.executable, "atlsim");
  EXPECT_EQ(doc.output_sandbox, std::vector<std::string>{"atlsim.out"});
  EXPECT_EQ(doc.input_data.size(), 2u);
  ASSERT_NE(doc.find_extra("maxcputime"), nullptr);
  EXPECT_EQ(to_string(*doc.requirements), "true");
}

TEST(Document, SerializeRoundTrips) {
  const auto doc = parse_jdl(
      "Executable = \"cmsim\"; Arguments = \"a b\"; InputData = {\"lfn:/v/x\"}; "
      "Requirements = Member(\"CMS\", other.RunTimeEnvironment) && other.FreeCPUs >= 1; "
      "Rank = -other.WaitingJobs; Note = \"quote \\\" inside\";");
  const auto text = serialize(doc);
  const auto again = parse_jdl(text);
  EXPECT_TRUE(structurally_equal(doc, again));
  EXPECT_EQ(serialize(again), text);
}

TEST(Document, ErrorsCarryCodes) {
  EXPECT_EQ(code_of([] { parse_jdl("Executable = \"a\"; executable = \"b\";"); }), ErrorCode::DuplicateAttribute);
  EXPECT_EQ(code_of([] { parse_jdl("Arguments = \"a\";"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_jdl("Executable = 5;"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_jdl("Executable = \"a\"; Requirements = (1 +;"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_jdl("Executable = \"a\"; Requirements = Frobnicate(1);"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_jdl("Executable = \"a\" Rank = 1;"); }), ErrorCode::SyntaxError);
}

TEST(Document, RandomGarbageNeverCrashes) {
  std::mt19937_64 rng(99);
  const std::string alphabet = "Executable=\"{};,()&|!<>+-*/ aZ09.[]\n";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const auto len = rng() % 60;
    for (std::size_t j = 0; j < len; ++j) text += alphabet[rng() % alphabet.size()];
    try {
      parse_jdl(text);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::DuplicateAttribute) << text;
    }
  }
}

}  // namespace
}  // namespace worldgrid::jdl
