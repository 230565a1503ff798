#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rpq {

/// Dense node identifier, valid within one LabeledGraph (or one virtual
/// graph for the statistical models).
struct NodeId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

enum class Direction : std::uint8_t { forward, inverse };

/// An edge label of the extended alphabet: a forward label `a` or its
/// mirror `a^-1`.
struct Label {
    std::string name;
    Direction direction = Direction::forward;

    static Label forward(std::string name) { return {std::move(name), Direction::forward}; }
    static Label inverse(std::string name) { return {std::move(name), Direction::inverse}; }

    bool is_inverse() const noexcept { return direction == Direction::inverse; }
    Label mirrored() const {
        return {name, is_inverse() ? Direction::forward : Direction::inverse};
    }

    friend auto operator<=>(const Label&, const Label&) = default;
};

/// What a traversal step may follow: a concrete (possibly inverse) label or
/// the wildcard, which stands for every forward label.
struct Symbol {
    enum class Kind : std::uint8_t { label, wildcard };

    Kind kind = Kind::label;
    Label label;

    static Symbol of(Label l) { return {Kind::label, std::move(l)}; }
    static Symbol any() { return {Kind::wildcard, {}}; }

    bool is_wildcard() const noexcept { return kind == Kind::wildcard; }
    bool matches(const Label& l) const noexcept {
        return is_wildcard() ? l.direction == Direction::forward : label == l;
    }

    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Sorted, duplicate-free set of symbols.
using SymbolSet = std::vector<Symbol>;

void normalize(SymbolSet& symbols);

std::string to_string(const Label& label);
std::string to_string(const Symbol& symbol);
std::ostream& operator<<(std::ostream& os, const Label& label);

/// One step in the extended graph: following `label` from some node leads to
/// `node`.
struct Neighbor {
    Label label;
    NodeId node;

    friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

/// Edge of the extended graph, stored with the traversal direction.
struct ExtendedEdge {
    NodeId from;
    Label label;
    NodeId to;

    /// The stored (forward) triple this extended edge mirrors or equals.
    ExtendedEdge base() const {
        return label.is_inverse() ? ExtendedEdge{to, label.mirrored(), from} : *this;
    }

    friend auto operator<=>(const ExtendedEdge&, const ExtendedEdge&) = default;
};

struct Triple {
    std::uint32_t src;
    std::uint32_t label;
    std::uint32_t dst;

    friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

struct LabelStats {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
};

/// Immutable edge-labeled directed graph with out- and in-adjacency indexes.
/// The inverse-extended graph is never materialized; inverse steps read the
/// in-index.
class LabeledGraph {
public:
    class Builder;

    LabeledGraph() = default;

    std::size_t node_count() const noexcept { return node_names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }

    std::optional<NodeId> find_node(std::string_view name) const;
    const std::string& node_name(NodeId id) const { return node_names_.at(id.value); }
    std::optional<std::uint32_t> find_label(std::string_view name) const;
    const std::string& label_name(std::uint32_t id) const { return label_names_.at(id); }

    /// Edges sorted by (src, label, dst) over interned ids.
    std::span<const Triple> edges() const noexcept { return edges_; }

    bool contains(NodeId id) const noexcept { return id.value < node_names_.size(); }
    bool has_edge(NodeId src, std::string_view label, NodeId dst) const;

    /// Outgoing steps from `v` for the wanted symbols; forward labels read the
    /// out-index, inverse labels read the in-index. Result is sorted by
    /// (label, node). An unknown node yields an empty list.
    std::vector<Neighbor> extended_neighbors(NodeId v, std::span<const Symbol> wanted) const;

    /// All extended edges leaving `v` (every forward and inverse step).
    std::vector<Neighbor> all_extended_neighbors(NodeId v) const;

    std::size_t out_degree(NodeId v) const;
    std::size_t in_degree(NodeId v) const;

private:
    struct Adjacent {
        std::uint32_t label;
        std::uint32_t node;
        friend constexpr auto operator<=>(const Adjacent&, const Adjacent&) = default;
    };

    void append_matching(std::vector<Neighbor>& out, std::span<const Adjacent> adjacency,
                         const Symbol& symbol, Direction direction) const;

    std::vector<std::string> node_names_;
    std::unordered_map<std::string, std::uint32_t> node_index_;
    std::vector<std::string> label_names_;
    std::unordered_map<std::string, std::uint32_t> label_index_;
    std::vector<Triple> edges_;
    // CSR indexes, rows sorted by (label name, node id).
    std::vector<std::uint32_t> out_offsets_;
    std::vector<Adjacent> out_adjacency_;
    std::vector<std::uint32_t> in_offsets_;
    std::vector<Adjacent> in_adjacency_;
};

class LabeledGraph::Builder {
public:
    NodeId add_node(std::string_view name);
    /// Duplicate triples collapse. Empty names are rejected.
    void add_edge(std::string_view src, std::string_view label, std::string_view dst);
    LabeledGraph build() &&;

private:
    std::uint32_t intern_label(std::string_view name);

    LabeledGraph graph_;
    std::vector<Triple> triples_;
};

/// Reads a TSV graph: `src<TAB>label<TAB>dst` per line, `#` comments, blank
/// lines ignored. Throws ParseError (with line number) or IoError.
LabeledGraph load_graph(const std::filesystem::path& path);
LabeledGraph read_graph(std::istream& in);

/// Writes the graph in the TSV format, one edge per line, in edge order.
void save_graph(const LabeledGraph& graph, const std::filesystem::path& path);
void write_graph(const LabeledGraph& graph, std::ostream& out);

LabelStats label_stats(const LabeledGraph& graph);

} // namespace rpq
