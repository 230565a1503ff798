#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rpq/graph.hpp"

namespace rpq {

/// Regular expression over the extended label alphabet.
///
/// Concrete syntax:
///   atom      identifier [A-Za-z0-9_]+ or "double quoted" (\" and \\ escapes)
///   .         wildcard, any forward label
///   $NAME     macro from a class file, expands to an alternation
///   x^-1      inverse; on a group it distributes (reversing concatenations)
///   x* x+ x?  postfix repetition
///   x y       concatenation (whitespace or adjacency)
///   x | y     alternation
///   ( x )     grouping
class RegexAst {
public:
    enum class Kind { atom, wildcard, concat, alt, star, plus, opt };

    static RegexAst atom(Label label);
    static RegexAst wildcard();
    static RegexAst concat(std::vector<RegexAst> children);
    static RegexAst alt(std::vector<RegexAst> children);
    static RegexAst star(RegexAst child);
    static RegexAst plus(RegexAst child);
    static RegexAst opt(RegexAst child);

    Kind kind() const noexcept { return kind_; }
    const Label& label() const { return label_; }
    const std::vector<RegexAst>& children() const noexcept { return children_; }
    const RegexAst& child() const { return children_.front(); }

    /// Number of AST nodes (atoms, wildcards and operators).
    std::size_t size() const;

    friend bool operator==(const RegexAst&, const RegexAst&) = default;

private:
    RegexAst(Kind kind, Label label, std::vector<RegexAst> children)
        : kind_(kind), label_(std::move(label)), children_(std::move(children)) {}

    Kind kind_;
    Label label_;
    std::vector<RegexAst> children_;
};

/// Named label classes, e.g. `C = interaction|binding|complex`.
using ClassTable = std::map<std::string, std::vector<std::string>, std::less<>>;

ClassTable read_classes(std::istream& in);
ClassTable load_classes(const std::filesystem::path& path);

/// Throws ParseError carrying the 0-based column of the offending token.
RegexAst parse_regex(std::string_view text, const ClassTable& classes = {});

/// Canonical printer; parse_regex(print(ast)) == ast.
std::string print(const RegexAst& ast);

/// Base names of all atoms; inverse atoms contribute their forward name.
std::set<std::string> distinct_labels(const RegexAst& ast);
bool uses_inverse(const RegexAst& ast);
bool uses_wildcard(const RegexAst& ast);

} // namespace rpq
