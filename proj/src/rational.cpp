#include "rpq/rational.hpp"

#include <cctype>

#include "rpq/error.hpp"

namespace rpq {

namespace {

std::int64_t parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty() || digits.size() > 17) throw ConfigError("invalid number: '" + std::string(whole) + "'");
    std::int64_t value = 0;
    for (const char c : digits) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) throw ConfigError("invalid number: '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto whole = text;
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = parse_integer(text.substr(slash + 1), whole);
        if (den == 0) throw ConfigError("zero denominator: '" + std::string(whole) + "'");
        value = Rational(parse_integer(text.substr(0, slash), whole), den);
    } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto int_part = text.substr(0, dot);
        const auto frac_part = text.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) throw ConfigError("invalid number: '" + std::string(whole) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        const auto i = int_part.empty() ? 0 : parse_integer(int_part, whole);
        const auto f = frac_part.empty() ? 0 : parse_integer(frac_part, whole);
        value = Rational(i * scale + f, scale);
    } else {
        value = Rational(parse_integer(text, whole));
    }
    return negative ? -value : value;
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace rpq
