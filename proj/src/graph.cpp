#include "rpq/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rpq/error.hpp"

namespace rpq {

void normalize(SymbolSet& symbols) {
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
}

std::string to_string(const Label& label) {
    return label.is_inverse() ? label.name + "^-1" : label.name;
}

std::string to_string(const Symbol& symbol) {
    return symbol.is_wildcard() ? std::string(".") : to_string(symbol.label);
}

std::ostream& operator<<(std::ostream& os, const Label& label) {
    return os << to_string(label);
}

std::optional<NodeId> LabeledGraph::find_node(std::string_view name) const {
    auto it = node_index_.find(std::string(name));
    if (it == node_index_.end()) return std::nullopt;
    return NodeId{it->second};
}

std::optional<std::uint32_t> LabeledGraph::find_label(std::string_view name) const {
    auto it = label_index_.find(std::string(name));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

bool LabeledGraph::has_edge(NodeId src, std::string_view label, NodeId dst) const {
    const auto id = find_label(label);
    if (!id || !contains(src) || !contains(dst)) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Triple{src.value, *id, dst.value});
}

void LabeledGraph::append_matching(std::vector<Neighbor>& out, std::span<const Adjacent> adjacency,
                                   const Symbol& symbol, Direction direction) const {
    if (symbol.is_wildcard()) {
        for (const auto& adj : adjacency) {
            out.push_back({Label{label_names_[adj.label], direction}, NodeId{adj.node}});
        }
        return;
    }
    const auto id = find_label(symbol.label.name);
    if (!id) return;
    const auto lo = std::lower_bound(adjacency.begin(), adjacency.end(), Adjacent{*id, 0});
    for (auto it = lo; it != adjacency.end() && it->label == *id; ++it) {
        out.push_back({symbol.label, NodeId{it->node}});
    }
}

std::vector<Neighbor> LabeledGraph::extended_neighbors(NodeId v, std::span<const Symbol> wanted) const {
    std::vector<Neighbor> result;
    if (!contains(v) || wanted.empty()) return result;

    const std::span<const Adjacent> out_row(out_adjacency_.data() + out_offsets_[v.value],
                                            out_offsets_[v.value + 1] - out_offsets_[v.value]);
    const std::span<const Adjacent> in_row(in_adjacency_.data() + in_offsets_[v.value],
                                           in_offsets_[v.value + 1] - in_offsets_[v.value]);
    for (const auto& symbol : wanted) {
        // The wildcard only ranges over forward labels.
        if (symbol.is_wildcard() || !symbol.label.is_inverse()) {
            append_matching(result, out_row, symbol, Direction::forward);
        } else {
            append_matching(result, in_row, symbol, Direction::inverse);
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::vector<Neighbor> LabeledGraph::all_extended_neighbors(NodeId v) const {
    std::vector<Neighbor> result;
    if (!contains(v)) return result;
    for (auto i = out_offsets_[v.value]; i < out_offsets_[v.value + 1]; ++i) {
        result.push_back({Label::forward(label_names_[out_adjacency_[i].label]), NodeId{out_adjacency_[i].node}});
    }
    for (auto i = in_offsets_[v.value]; i < in_offsets_[v.value + 1]; ++i) {
        result.push_back({Label::inverse(label_names_[in_adjacency_[i].label]), NodeId{in_adjacency_[i].node}});
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::size_t LabeledGraph::out_degree(NodeId v) const {
    return contains(v) ? out_offsets_[v.value + 1] - out_offsets_[v.value] : 0;
}

std::size_t LabeledGraph::in_degree(NodeId v) const {
    return contains(v) ? in_offsets_[v.value + 1] - in_offsets_[v.value] : 0;
}

NodeId LabeledGraph::Builder::add_node(std::string_view name) {
    if (name.empty()) throw ParseError("empty node identifier", 0);
    auto [it, inserted] = graph_.node_index_.try_emplace(std::string(name),
                                                         static_cast<std::uint32_t>(graph_.node_names_.size()));
    if (inserted) graph_.node_names_.emplace_back(name);
    return NodeId{it->second};
}

std::uint32_t LabeledGraph::Builder::intern_label(std::string_view name) {
    if (name.empty()) throw ParseError("empty edge label", 0);
    auto [it, inserted] = graph_.label_index_.try_emplace(std::string(name),
                                                          static_cast<std::uint32_t>(graph_.label_names_.size()));
    if (inserted) graph_.label_names_.emplace_back(name);
    return it->second;
}

void LabeledGraph::Builder::add_edge(std::string_view src, std::string_view label, std::string_view dst) {
    const auto s = add_node(src);
    const auto l = intern_label(label);
    const auto d = add_node(dst);
    triples_.push_back({s.value, l, d.value});
}

LabeledGraph LabeledGraph::Builder::build() && {
    LabeledGraph g = std::move(graph_);

    // Renumber labels in name order so that index rows sorted by label id are
    // also sorted by label name.
    std::vector<std::uint32_t> order(g.label_names_.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return g.label_names_[a] < g.label_names_[b]; });
    std::vector<std::uint32_t> remap(order.size());
    std::vector<std::string> sorted_names(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = i;
        sorted_names[i] = g.label_names_[order[i]];
    }
    g.label_names_ = std::move(sorted_names);
    for (std::uint32_t i = 0; i < g.label_names_.size(); ++i) g.label_index_[g.label_names_[i]] = i;
    for (auto& t : triples_) t.label = remap[t.label];

    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
    g.edges_ = std::move(triples_);

    const auto n = g.node_names_.size();
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const auto& t : g.edges_) {
        ++g.out_offsets_[t.src + 1];
        ++g.in_offsets_[t.dst + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
    g.out_adjacency_.resize(g.edges_.size());
    g.in_adjacency_.resize(g.edges_.size());
    auto out_fill = g.out_offsets_;
    auto in_fill = g.in_offsets_;
    for (const auto& t : g.edges_) {
        g.out_adjacency_[out_fill[t.src]++] = {t.label, t.dst};
        g.in_adjacency_[in_fill[t.dst]++] = {t.label, t.src};
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.in_adjacency_.begin() + g.in_offsets_[v], g.in_adjacency_.begin() + g.in_offsets_[v + 1]);
    }
    return g;
}

LabeledGraph read_graph(std::istream& in) {
    LabeledGraph::Builder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            const auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (fields.size() != 3) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (const auto f : fields) {
            if (f.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty field", line_no);
        }
        builder.add_edge(fields[0], fields[1], fields[2]);
    }
    return std::move(builder).build();
}

LabeledGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path.string());
    return read_graph(in);
}

void write_graph(const LabeledGraph& graph, std::ostream& out) {
    for (const auto& t : graph.edges()) {
        out << graph.node_name(NodeId{t.src}) << '\t' << graph.label_name(t.label) << '\t'
            << graph.node_name(NodeId{t.dst}) << '\n';
    }
}

void save_graph(const LabeledGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write graph file: " + path.string());
    write_graph(graph, out);
}

LabelStats label_stats(const LabeledGraph& graph) {
    LabelStats stats;
    stats.node_count = graph.node_count();
    stats.edge_count = graph.edge_count();
    for (const auto& t : graph.edges()) ++stats.counts[graph.label_name(t.label)];
    return stats;
}

} // namespace rpq
