#include "rpq/cost_model.hpp"

#include <iomanip>
#include <ostream>

#include "rpq/error.hpp"

namespace rpq {

Rational cost_s1(const NetworkParams& p, const CostInputs& c) {
    return Rational(p.n_p) * (Rational(2) * p.d * c.q_lbl + p.k * c.d_s1);
}

Rational cost_s2(const NetworkParams& p, const CostInputs& c) {
    return Rational(p.n_p) * (Rational(2) * p.d * c.q_bc + p.k * c.d_s2);
}

Discriminant discriminant(const CostInputs& c) {
    if (c.d_s1 == c.d_s2) return {Discriminant::Kind::equal_data, {}};
    if (c.q_bc <= c.q_lbl && c.d_s1 > c.d_s2) return {Discriminant::Kind::s2_dominant, {}};
    return {Discriminant::Kind::value, Rational(2 * (c.q_bc - c.q_lbl), c.d_s1 - c.d_s2)};
}

std::string to_string(Region r) {
    switch (r) {
    case Region::s2_dominant: return "s2-dominant";
    case Region::s1_dominant: return "s1-dominant";
    case Region::s2_triangle: return "s2-triangle";
    case Region::s1_triangle: return "s1-triangle";
    case Region::equal_data: return "equal-data";
    }
    return "unknown";
}

Region region(const CostInputs& c) {
    const auto discr = discriminant(c);
    switch (discr.kind) {
    case Discriminant::Kind::equal_data: return Region::equal_data;
    case Discriminant::Kind::s2_dominant: return Region::s2_dominant;
    case Discriminant::Kind::value: break;
    }
    if (c.d_s1 > c.d_s2) return discr.value > Rational(1) ? Region::s1_dominant : Region::s2_triangle;
    // D_s1 < D_s2: S1 retrieves less; S2 can only win on broadcasts.
    return c.q_bc >= c.q_lbl ? Region::s1_dominant : Region::s1_triangle;
}

Strategy classify(const NetworkParams& p, const CostInputs& c) {
    if (!(p.k > Rational(0) && p.k < Rational(1) && p.d > Rational(1))) {
        throw ConfigError("classification needs 0 < k < 1 < d, got k=" + to_string(p.k) + ", d=" + to_string(p.d));
    }
    if (p.n_p <= 0) throw ConfigError("N_p must be positive");
    return cost_s2(p, c) < cost_s1(p, c) ? Strategy::s2 : Strategy::s1;
}

namespace {

BranchVerdict verdict(const NetworkParams& p, const CostInputs& c, double probability) {
    BranchVerdict v;
    v.inputs = c;
    v.probability = probability;
    v.winner = classify(p, c);
    v.cost_s1 = cost_s1(p, c);
    v.cost_s2 = cost_s2(p, c);
    v.discr = discriminant(c);
    v.region = region(c);
    return v;
}

void write_discriminant(std::ostream& out, const Discriminant& d) {
    switch (d.kind) {
    case Discriminant::Kind::value:
        out << to_string(d.value) << " (" << std::setprecision(6) << to_double(d.value) << ")";
        break;
    case Discriminant::Kind::equal_data: out << "equal-data"; break;
    case Discriminant::Kind::s2_dominant: out << "s2-dominant"; break;
    }
}

} // namespace

Recommendation recommend(const NetworkParams& p, const CostInputs& low, const CostInputs& high, double p_low) {
    if (!(p_low >= 0.0 && p_low <= 1.0)) throw ConfigError("branch probability must be in [0, 1]");
    Recommendation r;
    r.low = verdict(p, low, p_low);
    r.high = verdict(p, high, 1.0 - p_low);
    double s2_probability = 0.0;
    if (r.low.winner == Strategy::s2) s2_probability += r.low.probability;
    if (r.high.winner == Strategy::s2) s2_probability += r.high.probability;
    r.strategy = s2_probability > 0.5 ? Strategy::s2 : Strategy::s1;
    r.confidence = r.strategy == Strategy::s2 ? s2_probability : 1.0 - s2_probability;
    return r;
}

CostInputs inputs_from_records(const CostRecord& s1, const CostRecord& s2) {
    return {static_cast<std::int64_t>(s1.q_lbl.value_or(0)), static_cast<std::int64_t>(s1.d_s1.value_or(0)),
            static_cast<std::int64_t>(s2.q_bc.value_or(0)), static_cast<std::int64_t>(s2.d_s2.value_or(0))};
}

NetworkParams params_of(const PeerNetwork& network) {
    return {network.peer_count(), network.topology().average_degree(), network.replication_rate()};
}

void write_report(std::ostream& out, const NetworkParams& p, const CostInputs& c) {
    const auto ratio = p.k / p.d;
    out << "N_p=" << p.n_p << " d=" << to_string(p.d) << " k=" << to_string(p.k) << '\n';
    out << "Q_lbl=" << c.q_lbl << " D_s1=" << c.d_s1 << " Q_bc=" << c.q_bc << " D_s2=" << c.d_s2 << '\n';
    out << "region: " << to_string(region(c)) << '\n';
    out << "discriminant: ";
    write_discriminant(out, discriminant(c));
    out << '\n';
    out << "k/d: " << to_string(ratio) << " (" << std::setprecision(6) << to_double(ratio) << ")\n";
    out << "cost_s1: " << std::setprecision(12) << to_double(cost_s1(p, c)) << '\n';
    out << "cost_s2: " << std::setprecision(12) << to_double(cost_s2(p, c)) << '\n';
    out << "winner: " << to_string(classify(p, c)) << '\n';
}

void write_recommendation(std::ostream& out, const NetworkParams& p, const Recommendation& r) {
    for (const auto* b : {&r.low, &r.high}) {
        out << (b == &r.low ? "low" : "high") << " branch (p=" << b->probability << "):\n";
        write_report(out, p, b->inputs);
    }
    out << "recommendation: " << to_string(r.strategy) << " confidence=" << r.confidence << '\n';
}

} // namespace rpq
