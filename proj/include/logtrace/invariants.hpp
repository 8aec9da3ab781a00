#pragma once

#include "logtrace/fan.hpp"

#include <map>

namespace logtrace {

// Formal product prod_m (t^m - 1)^{a_m}; zero exponents are never stored.
struct ZetaFactorization {
    std::map<Int, Int> factors;

    bool operator==(const ZetaFactorization& o) const = default;
    std::string to_string() const;  // e.g. "(t^2-1)^2 (t-1)^-4", "1" when empty
};

struct TraceReport {
    std::map<Int, Int> traces;  // d -> Tr(phi^d | H*)
    Int volume = 0;
    Int error_term = 0;
};

// trace of phi^d on the nearby-cycles stalk at x: s' for height-1 points
// with s' | d, zero otherwise
Int stalk_trace(const FanPoint& x, const Int& d);

// global trace: sum of s' * chi over height-1 points with s' | d
Int trace(const std::vector<FanPoint>& points, const Int& d);

// the same number summed stalk by stalk over all points
Int trace_via_stalks(const std::vector<FanPoint>& points, const Int& d);

// sum of chi over height-1 points with s = 1 (exactly 1, not s')
Int rational_volume(const std::vector<FanPoint>& points);

// sum of chi over height-1 points whose multiplicity is a positive power of p
Int error_term(const std::vector<FanPoint>& points, const Int& residue_char);

// a_m = -sum of chi over height-1 points with s' = m
ZetaFactorization zeta(const std::vector<FanPoint>& points);

// expand sum_x s' chi t^{s'} / (1 - t^{s'}) to order N and compare each
// coefficient with trace(d); throws consistency_error at the first mismatch
bool zeta_trace_crosscheck(const std::vector<FanPoint>& points, int order);

// zeta recomputed from the SNC special-fibre cycle; requires is_snc
ZetaFactorization snc_acampo(const DecoratedModel& model);

struct Verdict {
    Int trace1 = 0;
    Int volume = 0;
    bool ok = false;
};

// trace(1) = volume for log smooth models; requires the consistency gate
Verdict main_theorem_check(const DecoratedModel& model);

struct StalkDescriptor {
    std::string point;
    int n = 0;            // h(x) - 1
    Int e_order = 1;      // prime-to-p part of lambda
    std::vector<Int> rank_profile;  // q -> e_order * binom(n, q)
};

StalkDescriptor stalk_descriptor(const FanPoint& x, const Int& residue_char);

// alternating trace sum over the rank profile; must reproduce stalk_trace
Int descriptor_trace(const StalkDescriptor& d, const Int& dpow);

// traces for d = 1..max_d (max_d = 0 picks lcm of the s' values, capped)
TraceReport trace_report(const std::vector<FanPoint>& points, const Int& residue_char,
                         int max_d);

int default_trace_horizon(const std::vector<FanPoint>& points);

}  // namespace logtrace
