#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace rpq {

/// Exact ratio used for network density, replication rate and the
/// discriminant, so that boundary comparisons are exact.
using Rational = boost::rational<std::int64_t>;

/// Parses "3", "0.2", "-1.25" or "2/3" exactly. Throws ConfigError.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// "n/d", or "n" when the denominator is 1.
std::string to_string(const Rational& r);

} // namespace rpq
