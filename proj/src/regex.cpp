#include "rpq/regex.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "rpq/error.hpp"

namespace rpq {

RegexAst RegexAst::atom(Label label) {
    if (label.name.empty()) throw ParseError("empty label", 0);
    return {Kind::atom, std::move(label), {}};
}
RegexAst RegexAst::wildcard() { return {Kind::wildcard, {}, {}}; }
RegexAst RegexAst::concat(std::vector<RegexAst> children) { return {Kind::concat, {}, std::move(children)}; }
RegexAst RegexAst::alt(std::vector<RegexAst> children) { return {Kind::alt, {}, std::move(children)}; }
RegexAst RegexAst::star(RegexAst child) { return {Kind::star, {}, {std::move(child)}}; }
RegexAst RegexAst::plus(RegexAst child) { return {Kind::plus, {}, {std::move(child)}}; }
RegexAst RegexAst::opt(RegexAst child) { return {Kind::opt, {}, {std::move(child)}}; }

std::size_t RegexAst::size() const {
    std::size_t n = 1;
    for (const auto& c : children_) n += c.size();
    return n;
}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_bare_identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_ident_char);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

/// (x)^-1: atoms flip direction, concatenations reverse, the rest distributes.
RegexAst invert(const RegexAst& ast, std::size_t pos) {
    using Kind = RegexAst::Kind;
    switch (ast.kind()) {
    case Kind::atom:
        return RegexAst::atom(ast.label().mirrored());
    case Kind::wildcard:
        throw ParseError("inverse of the wildcard is not supported (column " + std::to_string(pos) + ")", pos);
    case Kind::concat: {
        std::vector<RegexAst> children;
        for (auto it = ast.children().rbegin(); it != ast.children().rend(); ++it) children.push_back(invert(*it, pos));
        return RegexAst::concat(std::move(children));
    }
    case Kind::alt: {
        std::vector<RegexAst> children;
        for (const auto& c : ast.children()) children.push_back(invert(c, pos));
        return RegexAst::alt(std::move(children));
    }
    case Kind::star:
        return RegexAst::star(invert(ast.child(), pos));
    case Kind::plus:
        return RegexAst::plus(invert(ast.child(), pos));
    case Kind::opt:
        return RegexAst::opt(invert(ast.child(), pos));
    }
    return ast;
}

class Parser {
public:
    Parser(std::string_view text, const ClassTable& classes) : text_(text), classes_(classes) {}

    RegexAst parse() {
        skip_space();
        if (at_end()) fail("empty expression");
        auto ast = parse_alt();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
        return ast;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
        throw ParseError("syntax error at column " + std::to_string(pos) + ": " + what, pos);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())) != 0) ++pos_;
    }

    RegexAst parse_alt() {
        std::vector<RegexAst> branches;
        branches.push_back(parse_concat());
        skip_space();
        while (!at_end() && peek() == '|') {
            ++pos_;
            branches.push_back(parse_concat());
            skip_space();
        }
        return branches.size() == 1 ? std::move(branches.front()) : RegexAst::alt(std::move(branches));
    }

    RegexAst parse_concat() {
        std::vector<RegexAst> items;
        while (true) {
            skip_space();
            if (at_end() || peek() == '|' || peek() == ')') break;
            items.push_back(parse_postfix());
        }
        if (items.empty()) fail("expected an expression");
        return items.size() == 1 ? std::move(items.front()) : RegexAst::concat(std::move(items));
    }

    RegexAst parse_postfix() {
        auto node = parse_primary();
        while (!at_end()) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                node = RegexAst::star(std::move(node));
            } else if (c == '+') {
                ++pos_;
                node = RegexAst::plus(std::move(node));
            } else if (c == '?') {
                ++pos_;
                node = RegexAst::opt(std::move(node));
            } else if (c == '^') {
                const auto at = pos_;
                if (text_.substr(pos_, 3) != "^-1") fail("expected '^-1'");
                pos_ += 3;
                node = invert(node, at);
            } else {
                break;
            }
        }
        return node;
    }

    RegexAst parse_primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            auto inner = parse_alt();
            skip_space();
            if (at_end() || peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == '.') {
            ++pos_;
            return RegexAst::wildcard();
        }
        if (c == '"') return RegexAst::atom(Label::forward(parse_quoted()));
        if (c == '$') return parse_macro();
        if (is_ident_char(c)) {
            const auto start = pos_;
            while (!at_end() && is_ident_char(peek())) ++pos_;
            return RegexAst::atom(Label::forward(std::string(text_.substr(start, pos_ - start))));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string parse_quoted() {
        const auto start = pos_;
        ++pos_;
        std::string value;
        while (!at_end() && peek() != '"') {
            if (peek() == '\\') {
                ++pos_;
                if (at_end()) break;
            }
            value.push_back(peek());
            ++pos_;
        }
        if (at_end()) fail_at(start, "unterminated string");
        ++pos_;
        if (value.empty()) fail_at(start, "empty quoted label");
        return value;
    }

    RegexAst parse_macro() {
        const auto start = pos_;
        ++pos_;
        const auto name_start = pos_;
        while (!at_end() && is_ident_char(peek())) ++pos_;
        const auto name = text_.substr(name_start, pos_ - name_start);
        if (name.empty()) fail_at(start, "expected a class name after '$'");
        const auto it = classes_.find(name);
        if (it == classes_.end()) fail_at(start, "unknown class '$" + std::string(name) + "'");
        std::vector<RegexAst> alts;
        for (const auto& label : it->second) alts.push_back(RegexAst::atom(Label::forward(label)));
        return alts.size() == 1 ? std::move(alts.front()) : RegexAst::alt(std::move(alts));
    }

    std::string_view text_;
    const ClassTable& classes_;
    std::size_t pos_ = 0;
};

std::string print_atom(const Label& label) {
    std::string out;
    if (is_bare_identifier(label.name)) {
        out = label.name;
    } else {
        out.push_back('"');
        for (const char c : label.name) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        out.push_back('"');
    }
    if (label.is_inverse()) out += "^-1";
    return out;
}

void collect_labels(const RegexAst& ast, std::set<std::string>& out) {
    if (ast.kind() == RegexAst::Kind::atom) out.insert(ast.label().name);
    for (const auto& c : ast.children()) collect_labels(c, out);
}

} // namespace

ClassTable read_classes(std::istream& in) {
    ClassTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("class file line " + std::to_string(line_no) + ": missing '='", line_no);
        const auto name = trim(std::string_view(text).substr(0, eq));
        if (!is_bare_identifier(name)) {
            throw ParseError("class file line " + std::to_string(line_no) + ": invalid class name '" + name + "'", line_no);
        }
        std::vector<std::string> labels;
        std::string_view rest = std::string_view(text).substr(eq + 1);
        while (true) {
            const auto bar = rest.find('|');
            auto label = trim(rest.substr(0, bar));
            if (label.empty()) throw ParseError("class file line " + std::to_string(line_no) + ": empty alternative", line_no);
            labels.push_back(std::move(label));
            if (bar == std::string_view::npos) break;
            rest.remove_prefix(bar + 1);
        }
        table[name] = std::move(labels);
    }
    return table;
}

ClassTable load_classes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open class file: " + path.string());
    return read_classes(in);
}

RegexAst parse_regex(std::string_view text, const ClassTable& classes) {
    return Parser(text, classes).parse();
}

std::string print(const RegexAst& ast) {
    using Kind = RegexAst::Kind;
    const auto grouped = [](const RegexAst& child, bool wrap) {
        return wrap ? "(" + print(child) + ")" : print(child);
    };
    switch (ast.kind()) {
    case Kind::atom:
        return print_atom(ast.label());
    case Kind::wildcard:
        return ".";
    case Kind::concat: {
        std::string out;
        for (const auto& c : ast.children()) {
            if (!out.empty()) out.push_back(' ');
            out += grouped(c, c.kind() == Kind::concat || c.kind() == Kind::alt);
        }
        return out;
    }
    case Kind::alt: {
        std::string out;
        for (const auto& c : ast.children()) {
            if (!out.empty()) out.push_back('|');
            out += grouped(c, c.kind() == Kind::alt);
        }
        return out;
    }
    case Kind::star:
    case Kind::plus:
    case Kind::opt: {
        const auto& c = ast.child();
        const bool wrap = c.kind() == Kind::concat || c.kind() == Kind::alt;
        const char op = ast.kind() == Kind::star ? '*' : ast.kind() == Kind::plus ? '+' : '?';
        return grouped(c, wrap) + op;
    }
    }
    return {};
}

std::set<std::string> distinct_labels(const RegexAst& ast) {
    std::set<std::string> out;
    collect_labels(ast, out);
    return out;
}

bool uses_inverse(const RegexAst& ast) {
    if (ast.kind() == RegexAst::Kind::atom) return ast.label().is_inverse();
    return std::any_of(ast.children().begin(), ast.children().end(), [](const auto& c) { return uses_inverse(c); });
}

bool uses_wildcard(const RegexAst& ast) {
    if (ast.kind() == RegexAst::Kind::wildcard) return true;
    return std::any_of(ast.children().begin(), ast.children().end(), [](const auto& c) { return uses_wildcard(c); });
}

} // namespace rpq
