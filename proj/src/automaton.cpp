#include "rpq/automaton.hpp"

#include <algorithm>

namespace rpq {

StateId QueryAutomaton::add_state() {
    transitions_.emplace_back();
    epsilon_.emplace_back();
    return static_cast<StateId>(transitions_.size() - 1);
}

class ThompsonBuilder {
public:
    explicit ThompsonBuilder(QueryAutomaton& nfa) : nfa_(nfa) {}

    struct Fragment {
        StateId start;
        StateId end;
    };

    Fragment build(const RegexAst& ast) {
        using Kind = RegexAst::Kind;
        switch (ast.kind()) {
        case Kind::atom:
        case Kind::wildcard: {
            const auto s = nfa_.add_state();
            const auto e = nfa_.add_state();
            nfa_.transitions_[s].push_back(
                {ast.kind() == Kind::wildcard ? Symbol::any() : Symbol::of(ast.label()), e});
            return {s, e};
        }
        case Kind::concat: {
            auto first = build(ast.children().front());
            auto last = first;
            for (std::size_t i = 1; i < ast.children().size(); ++i) {
                const auto next = build(ast.children()[i]);
                epsilon(last.end, next.start);
                last = next;
            }
            return {first.start, last.end};
        }
        case Kind::alt: {
            const auto s = nfa_.add_state();
            const auto e = nfa_.add_state();
            for (const auto& c : ast.children()) {
                const auto f = build(c);
                epsilon(s, f.start);
                epsilon(f.end, e);
            }
            return {s, e};
        }
        case Kind::star:
        case Kind::plus:
        case Kind::opt: {
            const auto s = nfa_.add_state();
            const auto e = nfa_.add_state();
            const auto f = build(ast.child());
            epsilon(s, f.start);
            epsilon(f.end, e);
            if (ast.kind() != Kind::plus) epsilon(s, e);
            if (ast.kind() != Kind::opt) epsilon(f.end, f.start);
            return {s, e};
        }
        }
        return {};
    }

private:
    void epsilon(StateId from, StateId to) { nfa_.epsilon_[from].push_back(to); }

    QueryAutomaton& nfa_;
};

QueryAutomaton QueryAutomaton::compile(const RegexAst& ast) {
    QueryAutomaton nfa;
    const auto fragment = ThompsonBuilder(nfa).build(ast);
    nfa.initial_ = fragment.start;
    nfa.accepting_ = {fragment.end};
    nfa.finish();
    return nfa;
}

void QueryAutomaton::finish() {
    const auto n = state_count();
    closures_.assign(n, {});
    moves_.assign(n, {});
    std::vector<char> in_closure(n, 0);
    std::vector<char> is_accepting(n, 0);
    for (const auto f : accepting_) is_accepting[f] = 1;

    for (StateId s = 0; s < n; ++s) {
        std::vector<StateId> stack{s};
        std::vector<StateId> reached;
        in_closure[s] = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            reached.push_back(u);
            for (const auto w : epsilon_[u]) {
                if (!in_closure[w]) {
                    in_closure[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(reached.begin(), reached.end());
        auto& moves = moves_[s];
        for (const auto u : reached) {
            in_closure[u] = 0;
            moves.accepting = moves.accepting || is_accepting[u];
            for (const auto& t : transitions_[u]) moves.transitions.push_back(t);
        }
        std::sort(moves.transitions.begin(), moves.transitions.end(), [](const auto& a, const auto& b) {
            return std::tie(a.symbol, a.target) < std::tie(b.symbol, b.target);
        });
        for (const auto& t : moves.transitions) moves.symbols.push_back(t.symbol);
        normalize(moves.symbols);
        closures_[s] = std::move(reached);
    }
}

bool QueryAutomaton::accepts(std::span<const Label> word) const {
    std::vector<char> current(state_count(), 0);
    current[initial_] = 1;
    for (const auto& label : word) {
        std::vector<char> next(state_count(), 0);
        for (StateId s = 0; s < state_count(); ++s) {
            if (!current[s]) continue;
            for (const auto& t : moves_[s].transitions) {
                if (t.symbol.matches(label)) next[t.target] = 1;
            }
        }
        current = std::move(next);
    }
    for (StateId s = 0; s < state_count(); ++s) {
        if (current[s] && moves_[s].accepting) return true;
    }
    return false;
}

Query Query::multi_source(RegexAst ast) {
    auto automaton = QueryAutomaton::compile(ast);
    Query q{std::move(ast), std::move(automaton), Kind::multi_source, {}, false, false, {}};
    q.uses_inverse = rpq::uses_inverse(q.ast);
    q.uses_wildcard = rpq::uses_wildcard(q.ast);
    q.distinct_labels = rpq::distinct_labels(q.ast);
    return q;
}

Query Query::single_source(RegexAst ast, std::string start) {
    auto q = multi_source(std::move(ast));
    q.kind = Kind::single_source;
    q.start = std::move(start);
    return q;
}

SymbolSet first_labels(const QueryAutomaton& automaton) {
    return automaton.moves(automaton.initial()).symbols;
}

} // namespace rpq
