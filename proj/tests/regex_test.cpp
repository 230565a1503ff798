#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "rpq/automaton.hpp"
#include "rpq/error.hpp"
#include "rpq/regex.hpp"
#include "support/oracle.hpp"

namespace rpq {
namespace {

RegexAst a(const std::string& n) { return RegexAst::atom(Label::forward(n)); }
RegexAst ai(const std::string& n) { return RegexAst::atom(Label::inverse(n)); }

TEST(RegexTest, ConcatWithStar) {
    EXPECT_EQ(parse_regex("a* b b"), RegexAst::concat({RegexAst::star(a("a")), a("b"), a("b")}));
}

TEST(RegexTest, InverseAtom) {
    EXPECT_EQ(parse_regex("a* b^-1"), RegexAst::concat({RegexAst::star(a("a")), ai("b")}));
}

TEST(RegexTest, AdjacencyAndGrouping) {
    EXPECT_EQ(parse_regex("a c(a|b)"), parse_regex("a c (a|b)"));
    EXPECT_EQ(parse_regex("ac"), a("ac"));
    EXPECT_EQ(parse_regex("a c (a|b)"), RegexAst::concat({a("a"), a("c"), RegexAst::alt({a("a"), a("b")})}));
    EXPECT_EQ(parse_regex("x?"), RegexAst::opt(a("x")));
    EXPECT_EQ(parse_regex("(a)"), a("a"));
}

TEST(RegexTest, InverseDistributesOverGroups) {
    EXPECT_EQ(parse_regex("(a b)^-1"), RegexAst::concat({ai("b"), ai("a")}));
    EXPECT_EQ(parse_regex("(a|b^-1)^-1"), RegexAst::alt({ai("a"), a("b")}));
    EXPECT_EQ(parse_regex("(a*)^-1"), RegexAst::star(ai("a")));
    EXPECT_EQ(parse_regex("a^-1^-1"), a("a"));
}

TEST(RegexTest, QuotedLabels) {
    EXPECT_EQ(parse_regex("\"up-regulation\""), a("up-regulation"));
    EXPECT_EQ(parse_regex(R"("x\"y")"), a("x\"y"));
    EXPECT_EQ(print(a("up-regulation")), "\"up-regulation\"");
}

TEST(RegexTest, ClassMacroExpands) {
    const auto classes = load_classes(std::filesystem::path(RPQ_DATA_DIR) / "classes.txt");
    const auto ast = parse_regex("$C+ \"acetylation\" $A+", classes);
    ASSERT_EQ(ast.kind(), RegexAst::Kind::concat);
    ASSERT_EQ(ast.children().size(), 3U);
    const auto& c = ast.children()[0];
    ASSERT_EQ(c.kind(), RegexAst::Kind::plus);
    ASSERT_EQ(c.child().kind(), RegexAst::Kind::alt);
    EXPECT_EQ(c.child().children().size(), 7U);
    EXPECT_EQ(c.child().children().front(), a("interaction"));
    EXPECT_EQ(ast.children()[1], a("acetylation"));
    EXPECT_EQ(ast.children()[2].child().children().size(), 9U);
    // 7 + 9 + 1 with no overlap between C and A.
    EXPECT_EQ(distinct_labels(ast).size(), 17U);
}

TEST(RegexTest, ClassFileErrors) {
    std::istringstream bad("C interaction\n");
    EXPECT_THROW(read_classes(bad), ParseError);
    std::istringstream empty_alt("C = a||b\n");
    EXPECT_THROW(read_classes(empty_alt), ParseError);
    EXPECT_THROW(parse_regex("$NOPE"), ParseError);
}

TEST(RegexTest, ErrorsCarryColumn) {
    const auto column = [](std::string_view text) -> std::size_t {
        try {
            parse_regex(text);
        } catch (const ParseError& e) {
            return e.position();
        }
        return 9999;
    };
    EXPECT_EQ(column("a (b"), 4U);
    EXPECT_EQ(column("a | | b"), 4U);
    EXPECT_EQ(column("a ^-2"), 2U);
    EXPECT_EQ(column(""), 0U);
    EXPECT_EQ(column("a)"), 1U);
    EXPECT_THROW(parse_regex(".^-1"), ParseError);
    EXPECT_THROW(parse_regex("*a"), ParseError);
}

TEST(RegexTest, LabelSetsAndFlags) {
    const auto ast = parse_regex("a* (b^-1 | c) a");
    EXPECT_EQ(distinct_labels(ast), (std::set<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(uses_inverse(ast));
    EXPECT_FALSE(uses_wildcard(ast));
    EXPECT_TRUE(uses_wildcard(parse_regex("a . b")));
    EXPECT_EQ(ast.size(), 7U);
}

TEST(RegexProperty, PrintParseRoundTrip) {
    SplitMix64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto ast = rpqtest::random_regex(rng, 4, {.labels = 4, .inverse = true, .wildcard = true});
        const auto text = print(ast);
        EXPECT_EQ(parse_regex(text), ast) << text;
    }
}

TEST(RegexProperty, DistinctLabelsAreAtomNames) {
    SplitMix64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const auto ast = rpqtest::random_regex(rng, 4);
        std::set<std::string> names;
        for (const auto& name : rpqtest::label_pool()) {
            if (print(ast).find(name) != std::string::npos) names.insert(name);
        }
        EXPECT_EQ(distinct_labels(ast), names) << print(ast);
        EXPECT_EQ(Query::multi_source(ast).label_count(), names.size());
    }
}

} // namespace
} // namespace rpq
