#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "rpq/error.hpp"
#include "rpq/graph.hpp"
#include "support/oracle.hpp"

namespace rpq {
namespace {

using rpqtest::fixture;

std::vector<Neighbor> lookup(const LabeledGraph& g, const std::string& node, SymbolSet wanted) {
    normalize(wanted);
    return g.extended_neighbors(*g.find_node(node), wanted);
}

Neighbor nb(const LabeledGraph& g, Label l, const std::string& node) { return {std::move(l), *g.find_node(node)}; }

TEST(GraphTest, DuplicateTriplesCollapse) {
    std::istringstream in("1\ta\t2\n1\ta\t2\n1\tb\t4\n");
    const auto g = read_graph(in);
    EXPECT_EQ(g.edge_count(), 2U);
    EXPECT_EQ(g.node_count(), 3U);
}

TEST(GraphTest, EmptyInput) {
    std::istringstream in("");
    const auto g = read_graph(in);
    EXPECT_EQ(g.edge_count(), 0U);
    EXPECT_EQ(g.node_count(), 0U);
    const auto stats = label_stats(g);
    EXPECT_TRUE(stats.counts.empty());
    EXPECT_EQ(stats.edge_count, 0U);
    EXPECT_EQ(stats.node_count, 0U);
}

TEST(GraphTest, CommentsAndBlankLines) {
    std::istringstream in("# header\n\n1\ta\t2\n   \n# trailing\n");
    EXPECT_EQ(read_graph(in).edge_count(), 1U);
}

TEST(GraphTest, MalformedLineReportsLineNumber) {
    std::istringstream in("1\ta\t2\n1\ta\n");
    try {
        read_graph(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 2U);
    }
    std::istringstream empty_field("1\t\t2\n");
    EXPECT_THROW(read_graph(empty_field), ParseError);
}

TEST(GraphTest, MissingFileIsIoError) {
    EXPECT_THROW(load_graph("/nonexistent/graph.tsv"), IoError);
}

TEST(GraphTest, FixtureShape) {
    const auto g = fixture();
    EXPECT_EQ(g.node_count(), 9U);
    EXPECT_EQ(g.edge_count(), 15U);
    EXPECT_EQ(g.label_count(), 3U);
    EXPECT_TRUE(g.has_edge(*g.find_node("9"), "a", *g.find_node("2")));
    EXPECT_FALSE(g.has_edge(*g.find_node("2"), "a", *g.find_node("9")));
}

TEST(GraphTest, FixtureFileMatchesTranscription) {
    const auto path = std::filesystem::path(RPQ_DATA_DIR) / "fixture.tsv";
    const auto from_file = load_graph(path);
    const auto expected = fixture();
    ASSERT_EQ(from_file.edge_count(), expected.edge_count());
    for (const auto& e : rpqtest::fixture_edges()) {
        EXPECT_TRUE(from_file.has_edge(*from_file.find_node(e.src), e.label, *from_file.find_node(e.dst)))
            << e.src << ' ' << e.label << ' ' << e.dst;
    }
}

TEST(GraphTest, ExtendedNeighborsOnFixture) {
    const auto g = fixture();
    EXPECT_EQ(lookup(g, "5", {Symbol::of(Label::inverse("b"))}),
              (std::vector<Neighbor>{nb(g, Label::inverse("b"), "4")}));
    EXPECT_EQ(lookup(g, "1", {Symbol::of(Label::forward("a")), Symbol::of(Label::forward("b"))}),
              (std::vector<Neighbor>{nb(g, Label::forward("a"), "2"), nb(g, Label::forward("b"), "4")}));
    EXPECT_TRUE(lookup(g, "1", {}).empty());
    EXPECT_TRUE(lookup(g, "1", {Symbol::of(Label::forward("zzz"))}).empty());
    EXPECT_TRUE(g.extended_neighbors(NodeId{1000}, SymbolSet{Symbol::any()}).empty());
}

TEST(GraphTest, WildcardCoversForwardLabelsOnly) {
    const auto g = fixture();
    const auto all = lookup(g, "2", {Symbol::any()});
    EXPECT_EQ(all.size(), g.out_degree(*g.find_node("2")));
    for (const auto& n : all) EXPECT_FALSE(n.label.is_inverse());
}

TEST(GraphTest, LabelStatsOnFixture) {
    const auto stats = label_stats(fixture());
    EXPECT_EQ(stats.counts, (std::map<std::string, std::uint64_t>{{"a", 6}, {"b", 6}, {"c", 3}}));
    EXPECT_EQ(stats.edge_count, 15U);
    EXPECT_EQ(stats.node_count, 9U);
}

TEST(GraphTest, SingleEdgeStats) {
    LabeledGraph::Builder b;
    b.add_edge("x", "z", "y");
    const auto stats = label_stats(std::move(b).build());
    EXPECT_EQ(stats.counts, (std::map<std::string, std::uint64_t>{{"z", 1}}));
}

TEST(GraphTest, EmptyNamesRejected) {
    LabeledGraph::Builder b;
    EXPECT_THROW(b.add_edge("", "a", "b"), ParseError);
    EXPECT_THROW(b.add_edge("a", "", "b"), ParseError);
}

TEST(GraphTest, InverseLabelPrinting) {
    EXPECT_EQ(to_string(Label::inverse("b")), "b^-1");
    EXPECT_EQ(to_string(Symbol::any()), ".");
    EXPECT_EQ(Label::inverse("b").mirrored(), Label::forward("b"));
}

// Exhaustive mirror check against the triple list on random graphs.
TEST(GraphProperty, MirrorAndStatsSum) {
    SplitMix64 rng(11);
    for (int round = 0; round < 40; ++round) {
        const auto n = 1 + static_cast<std::uint32_t>(uniform_below(rng, 50));
        const auto g = rpqtest::random_graph(rng, n, 3, static_cast<std::uint32_t>(uniform_below(rng, 3 * n)));
        std::uint64_t sum = 0;
        for (const auto& [l, c] : label_stats(g).counts) sum += c;
        EXPECT_EQ(sum, g.edge_count());

        for (std::uint32_t v = 0; v < n; ++v) {
            for (const auto& name : {"a", "b", "c"}) {
                const SymbolSet fwd{Symbol::of(Label::forward(name))};
                const SymbolSet inv{Symbol::of(Label::inverse(name))};
                const auto out = g.extended_neighbors(NodeId{v}, fwd);
                const auto in = g.extended_neighbors(NodeId{v}, inv);
                std::set<std::uint32_t> out_nodes, in_nodes, expect_out, expect_in;
                for (const auto& x : out) out_nodes.insert(x.node.value);
                for (const auto& x : in) in_nodes.insert(x.node.value);
                for (const auto& t : g.edges()) {
                    if (g.label_name(t.label) != name) continue;
                    if (t.src == v) expect_out.insert(t.dst);
                    if (t.dst == v) expect_in.insert(t.src);
                }
                EXPECT_EQ(out_nodes, expect_out);
                EXPECT_EQ(out.size(), expect_out.size());
                EXPECT_EQ(in_nodes, expect_in);
                EXPECT_EQ(in.size(), expect_in.size());
            }
        }
    }
}

TEST(GraphProperty, TsvRoundTrip) {
    SplitMix64 rng(5);
    for (int round = 0; round < 20; ++round) {
        const auto g = rpqtest::random_graph(rng, 20, 4, 40);
        std::stringstream buffer;
        write_graph(g, buffer);
        const auto back = read_graph(buffer);
        std::set<std::tuple<std::string, std::string, std::string>> a, b;
        for (const auto& t : g.edges()) a.emplace(g.node_name(NodeId{t.src}), g.label_name(t.label), g.node_name(NodeId{t.dst}));
        for (const auto& t : back.edges()) {
            b.emplace(back.node_name(NodeId{t.src}), back.label_name(t.label), back.node_name(NodeId{t.dst}));
        }
        EXPECT_EQ(a, b);
    }
}

} // namespace
} // namespace rpq
