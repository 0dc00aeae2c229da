#include <gtest/gtest.h>

#include "cset_transport/error.hpp"
#include "cset_transport/theory.hpp"

using namespace cst;

namespace {

constexpr const char* kSGraph = R"(
theory SGraph {
  ob E, V
  hom src: E -> V
  hom tgt: E -> V
  hom inv: E -> E
  eq inv.inv = id(E)   # involution
  eq inv.src = tgt
  eq inv.tgt = src
}
)";

template <typename F>
std::string validation_message(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Theory, ParsesGraph) {
  auto t = parse_theory("theory Graph { ob E, V  hom src, tgt: E -> V }");
  EXPECT_EQ(t.objects().size(), 2u);
  EXPECT_EQ(t.generators().size(), 2u);
  EXPECT_TRUE(t.equations().empty());
  EXPECT_EQ(t, builtin_theory(BuiltinTheory::Graph));
}

TEST(Theory, ParsesSetTheory) {
  auto t = parse_theory("theory Set { ob X }");
  EXPECT_EQ(t.objects(), std::vector<std::string>{"X"});
  EXPECT_TRUE(t.generators().empty());
}

TEST(Theory, ParsesSymmetricGraph) {
  auto t = parse_theory(kSGraph);
  EXPECT_EQ(t.generators().size(), 3u);
  ASSERT_EQ(t.equations().size(), 3u);
  EXPECT_TRUE(t.equations()[0].rhs.steps.empty());
  EXPECT_EQ(t.equations()[0].rhs.dom, "E");
  EXPECT_EQ(t.equations()[1].lhs.steps, (std::vector<std::string>{"inv", "src"}));
  EXPECT_EQ(t, builtin_theory(BuiltinTheory::SGraph));
}

TEST(Theory, SyntaxErrorsCarryPositions) {
  try {
    parse_theory("theory T {\n  ob E\n  hom f E -> E\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_theory("theory T { ob E $ }"), ParseError);
  EXPECT_THROW(parse_theory("theory T { ob E } extra"), ParseError);
}

TEST(Theory, RejectsUndeclaredNames) {
  EXPECT_NE(validation_message([] { parse_theory("theory T { ob V  hom f: W -> V }"); }).find("undeclared object"),
            std::string::npos);
  EXPECT_THROW(parse_theory("theory T { ob V  hom f: V -> V  eq g = f }"), ParseError);
}

TEST(Theory, RejectsNonComposableEquations) {
  auto msg = validation_message([] {
    validate_theory(TheoryPresentation("T", {"E", "V"}, {{"src", "E", "V"}},
                                       {{Path{"E", {"src", "src"}}, Path{"E", {"src"}}}}));
  });
  EXPECT_NE(msg.find("non-composable"), std::string::npos);
}

TEST(Theory, RejectsEndpointMismatch) {
  auto msg = validation_message([] {
    validate_theory(TheoryPresentation("T", {"E", "V"}, {{"src", "E", "V"}}, {{Path{"E", {}}, Path{"V", {}}}}));
  });
  EXPECT_NE(msg.find("equation endpoint mismatch"), std::string::npos);
  msg = validation_message([] {
    validate_theory(
        TheoryPresentation("T", {"E", "V"}, {{"src", "E", "V"}}, {{Path{"E", {"src"}}, Path{"E", {}}}}));
  });
  EXPECT_NE(msg.find("equation endpoint mismatch"), std::string::npos);
}

TEST(Theory, RejectsDuplicates) {
  auto msg = validation_message([] {
    validate_theory(TheoryPresentation("T", {"V", "V"}, {{"f", "V", "V"}, {"f", "V", "V"}}, {}));
  });
  EXPECT_NE(msg.find("duplicate object"), std::string::npos);
  EXPECT_NE(msg.find("duplicate generator"), std::string::npos);
}

TEST(Theory, BuiltinsShapes) {
  auto rg = builtin_theory(BuiltinTheory::RGraph);
  ASSERT_TRUE(rg.find_generator("refl"));
  EXPECT_EQ(rg.generators()[*rg.find_generator("refl")].dom, "V");
  EXPECT_EQ(rg.equations().size(), 2u);
  EXPECT_EQ(rg.equations()[0].lhs, (Path{"V", {"refl", "src"}}));
  EXPECT_EQ(rg.equations()[0].rhs, (Path{"V", {}}));

  auto d2 = builtin_theory(BuiltinTheory::Delta2);
  EXPECT_EQ(d2.objects(), (std::vector<std::string>{"T", "E", "V"}));
  EXPECT_EQ(d2.generators().size(), 5u);
  EXPECT_EQ(d2.equations().size(), 3u);

  EXPECT_EQ(builtin_theory(BuiltinTheory::SRGraph).equations().size(), 6u);
  EXPECT_EQ(builtin_theory(BuiltinTheory::One).objects().size(), 1u);
  EXPECT_EQ(builtin_theory(BuiltinTheory::Two).objects().size(), 2u);
  EXPECT_EQ(builtin_theory(BuiltinTheory::DDS).generators().size(), 1u);
  EXPECT_THROW(builtin_theory("Hypergraph"), Error);
}

TEST(Theory, BuiltinsValidateAndRoundTrip) {
  for (auto name : builtin_theory_names()) {
    SCOPED_TRACE(std::string(name));
    auto t = builtin_theory(name);
    EXPECT_NO_THROW(validate_theory(t));
    EXPECT_EQ(parse_theory(render_theory(t)), t);
  }
}
