#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rpq/rational.hpp"
#include "rpq/strategies.hpp"

namespace rpq {

/// Network size, density d = N_c / N_p and replication rate k.
struct NetworkParams {
    std::int64_t n_p = 0;
    Rational d;
    Rational k;
};

/// The four query-dependent cost factors, in symbols.
struct CostInputs {
    std::int64_t q_lbl = 0;
    std::int64_t d_s1 = 0;
    std::int64_t q_bc = 0;
    std::int64_t d_s2 = 0;
};

/// Total message symbols of top-down retrieval: N_p (2 d Q_lbl + k D_s1).
Rational cost_s1(const NetworkParams& p, const CostInputs& c);
/// Total message symbols of bottom-up retrieval: N_p (2 d Q_bc + k D_s2).
Rational cost_s2(const NetworkParams& p, const CostInputs& c);

struct Discriminant {
    enum class Kind {
        value,        // 2 (Q_bc - Q_lbl) / (D_s1 - D_s2)
        equal_data,   // D_s1 == D_s2: only the broadcast terms differ
        s2_dominant,  // Q_bc <= Q_lbl and D_s2 < D_s1: S2 wins for every k, d
    };
    Kind kind = Kind::value;
    Rational value;
};

Discriminant discriminant(const CostInputs& c);

/// Where (k, d) falls relative to the query's discriminant.
enum class Region {
    s2_dominant,     // S2 cheaper for every admissible k, d
    s1_dominant,     // S1 never more expensive (discriminant > 1 or S1 no worse in both terms)
    s2_triangle,     // D_s1 > D_s2, 0 < discr <= 1: S2 iff k/d > discr
    s1_triangle,     // D_s1 < D_s2, Q_bc < Q_lbl: S1 iff k/d > discr
    equal_data,      // D_s1 == D_s2: decided by Q_bc vs Q_lbl
};

std::string to_string(Region r);
Region region(const CostInputs& c);

/// S2 iff cost_s2 < cost_s1; ties go to S1. Requires 0 < k < 1 < d, else
/// throws ConfigError.
Strategy classify(const NetworkParams& p, const CostInputs& c);

struct BranchVerdict {
    CostInputs inputs;
    double probability = 0.0;
    Strategy winner = Strategy::s1;
    Rational cost_s1;
    Rational cost_s2;
    Discriminant discr;
    Region region = Region::s1_dominant;
};

struct Recommendation {
    BranchVerdict low;
    BranchVerdict high;
    Strategy strategy = Strategy::s1;
    /// Probability that `strategy` is the cheaper one.
    double confidence = 0.0;
};

/// Weighs a likely (`low`, probability `p_low`) and an unlikely (`high`)
/// estimate of the S2 cost factors. Throws ConfigError when p_low is
/// outside [0, 1].
Recommendation recommend(const NetworkParams& p, const CostInputs& low, const CostInputs& high, double p_low);

/// Cost factors read off strategy CostRecords (S1 supplies Q_lbl and D_s1, S2
/// the other two).
CostInputs inputs_from_records(const CostRecord& s1, const CostRecord& s2);

/// Parameters measured on a simulated network (exact d and k).
NetworkParams params_of(const PeerNetwork& network);

void write_report(std::ostream& out, const NetworkParams& p, const CostInputs& c);
void write_recommendation(std::ostream& out, const NetworkParams& p, const Recommendation& r);

} // namespace rpq
