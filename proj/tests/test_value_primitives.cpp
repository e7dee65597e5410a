#include <gtest/gtest.h>

#include "igi/primitive_set.hpp"
#include "igi/value.hpp"

using namespace igi;

TEST(Value, NullEqualsOnlyNull) {
  EXPECT_EQ(Value::null(), Value::null());
  EXPECT_NE(Value::null(), Value(std::int64_t{0}));
  EXPECT_NE(Value::null(), Value(IntArray{}));
  EXPECT_NE(Value::null(), Value(std::string()));
  EXPECT_NE(Value::null(), Value(false));
  EXPECT_FALSE(Value::null().type().has_value());
}

TEST(Value, TagsAndDeepEquality) {
  EXPECT_EQ(Value(IntArray{1, 2}), Value(IntArray{1, 2}));
  EXPECT_NE(Value(IntArray{1, 2}), Value(IntArray{1, 2, 3}));
  EXPECT_NE(Value(std::int64_t{1}), Value(true));
  EXPECT_EQ(*Value(std::string("a")).type(), SemType::String);
  EXPECT_EQ(*Value(IntArray{}).type(), SemType::IntArray);
}

TEST(Value, Rendering) {
  EXPECT_EQ(to_string(Value(IntArray{1, -2})), "[1,-2]");
  EXPECT_EQ(to_string(Value::null()), "NULL");
  EXPECT_EQ(to_string(Value(true)), "true");
  EXPECT_EQ(to_string(Value(std::string("a\"b"))), "\"a\\\"b\"");
}

TEST(Value, TypeNamesRoundTrip) {
  for (SemType t : {SemType::Integer, SemType::IntArray, SemType::Boolean, SemType::String})
    EXPECT_EQ(parse_type_name(type_name(t)), t);
  EXPECT_FALSE(parse_type_name("Float").has_value());
}

TEST(PrimitiveSet, ToyWithConstants) {
  auto ps = builtin_primitive_set("toy", {Value(std::int64_t{0}), Value(std::int64_t{1})});
  std::vector<std::string> symbols;
  for (const auto& p : ps.primitives()) symbols.push_back(p.symbol);
  EXPECT_EQ(symbols, (std::vector<std::string>{"ADD", "SUB", "EQ", "ITE", "0", "1"}));
  EXPECT_EQ(ps.terminals_of(SemType::Integer).size(), 2u);
  EXPECT_FALSE(ps.has_terminal(SemType::Boolean));
}

TEST(PrimitiveSet, ListDslHas38FunctionsAndNoConstants) {
  auto ps = builtin_primitive_set("dsl-lm");
  EXPECT_EQ(ps.size(), 38u);
  for (const auto& p : ps.primitives()) EXPECT_FALSE(p.is_terminal());
}

TEST(PrimitiveSet, StringDslHas16Functions) {
  EXPECT_EQ(builtin_primitive_set("dsl-st").size(), 16u);
}

TEST(PrimitiveSet, RestrictionToSingleton) {
  auto ps = builtin_primitive_set("dsl-st", {}, std::vector<std::string>{"CAT"});
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].symbol, "CAT");
}

TEST(PrimitiveSet, Errors) {
  EXPECT_THROW(builtin_primitive_set("lisp"), PrimitiveError);
  EXPECT_THROW(builtin_primitive_set("toy", {}, std::vector<std::string>{"HEAD"}), PrimitiveError);
  EXPECT_THROW(builtin_primitive_set("toy", {Value::null()}), PrimitiveError);
  // a constant whose symbol collides with another constant
  EXPECT_THROW(builtin_primitive_set("toy", {Value(std::int64_t{1}), Value(std::int64_t{1})}), PrimitiveError);
}

TEST(PrimitiveSet, InputsAppendedInOrder) {
  auto ps = builtin_primitive_set("toy").with_inputs({SemType::Integer, SemType::Integer});
  ASSERT_TRUE(ps.find("IN0") && ps.find("IN1"));
  EXPECT_EQ(ps[*ps.find("IN1")].input_index, 1);
  EXPECT_EQ(ps.num_inputs(), 2u);
}

TEST(PrimitiveSet, MinimalCompletions) {
  auto ps = builtin_primitive_set("toy", {Value(std::int64_t{0})}).with_inputs({SemType::Integer});
  EXPECT_EQ(ps.min_size(SemType::Integer), 1u);
  EXPECT_EQ(ps.min_size(SemType::Boolean), 3u);  // EQ(t,t)
  EXPECT_EQ(ps.min_completion_size(*ps.find("ITE")), 6u);
  EXPECT_EQ(ps.min_depth(SemType::Boolean), 2u);
  EXPECT_EQ(ps.min_completion_depth(*ps.find("ITE")), 3u);
  auto lm = builtin_primitive_set("dsl-lm");
  EXPECT_EQ(lm.min_size(SemType::IntArray), kUnreachable);
}
