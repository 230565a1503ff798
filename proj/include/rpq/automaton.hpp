#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rpq/graph.hpp"
#include "rpq/regex.hpp"

namespace rpq {

using StateId = std::uint32_t;

struct Transition {
    Symbol symbol;
    StateId target;
};

/// Thompson NFA with epsilon edges, plus the epsilon-closed view the product
/// search walks: for each state, the labelled moves available from its
/// closure and whether the closure accepts.
class QueryAutomaton {
public:
    /// Closure view of one state.
    struct Moves {
        std::vector<Transition> transitions; // sorted by symbol
        SymbolSet symbols;                   // distinct symbols of `transitions`
        bool accepting = false;
    };

    static QueryAutomaton compile(const RegexAst& ast);

    std::size_t state_count() const noexcept { return transitions_.size(); }
    StateId initial() const noexcept { return initial_; }
    const std::vector<StateId>& accepting() const noexcept { return accepting_; }
    std::span<const Transition> transitions(StateId s) const { return transitions_.at(s); }
    std::span<const StateId> epsilon(StateId s) const { return epsilon_.at(s); }

    /// States reachable from `s` by epsilon edges only (including `s`), sorted.
    const std::vector<StateId>& closure(StateId s) const { return closures_.at(s); }
    const Moves& moves(StateId s) const { return moves_.at(s); }

    /// True when the empty word is accepted.
    bool accepts_empty() const { return moves_.at(initial_).accepting; }

    /// Direct word membership, used by tests and witness checks.
    bool accepts(std::span<const Label> word) const;

private:
    StateId add_state();
    void finish();

    StateId initial_ = 0;
    std::vector<StateId> accepting_;
    std::vector<std::vector<Transition>> transitions_;
    std::vector<std::vector<StateId>> epsilon_;
    std::vector<std::vector<StateId>> closures_;
    std::vector<Moves> moves_;

    friend class ThompsonBuilder;
};

/// A compiled regular path query.
struct Query {
    enum class Kind { single_source, multi_source };

    RegexAst ast;
    QueryAutomaton automaton;
    Kind kind = Kind::multi_source;
    std::string start; // node name, single-source only
    bool uses_inverse = false;
    bool uses_wildcard = false;
    std::set<std::string> distinct_labels;

    static Query multi_source(RegexAst ast);
    static Query single_source(RegexAst ast, std::string start);

    bool is_single_source() const noexcept { return kind == Kind::single_source; }
    /// Q_lbl: number of distinct labels named by the expression.
    std::size_t label_count() const noexcept { return distinct_labels.size(); }
};

/// Symbols that can be consumed first (moves of the initial closure).
SymbolSet first_labels(const QueryAutomaton& automaton);
inline SymbolSet first_labels(const Query& q) { return first_labels(q.automaton); }

} // namespace rpq
