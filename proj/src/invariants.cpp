#include "logtrace/invariants.hpp"

#include <sstream>

namespace logtrace {

std::string ZetaFactorization::to_string() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, a] : factors) {
        if (!first) os << " ";
        first = false;
        if (m == 1)
            os << "(t-1)";
        else
            os << "(t^" << m << "-1)";
        if (a != 1) os << "^" << a;
    }
    return os.str();
}

Int stalk_trace(const FanPoint& x, const Int& d) {
    if (d < 1) throw precondition_error("stalk_trace: d must be positive");
    if (x.height != 1) return 0;
    return (d % x.s_prime == 0) ? x.s_prime : Int(0);
}

Int trace(const std::vector<FanPoint>& points, const Int& d) {
    if (d < 1) throw precondition_error("trace: d must be positive");
    Int t = 0;
    for (const FanPoint& x : points)
        if (x.height == 1 && d % x.s_prime == 0) t += x.s_prime * x.chi;
    return t;
}

Int trace_via_stalks(const std::vector<FanPoint>& points, const Int& d) {
    Int t = 0;
    for (const FanPoint& x : points) t += x.chi * stalk_trace(x, d);
    return t;
}

Int rational_volume(const std::vector<FanPoint>& points) {
    Int v = 0;
    for (const FanPoint& x : points)
        if (x.height == 1 && x.s == 1) v += x.chi;
    return v;
}

Int error_term(const std::vector<FanPoint>& points, const Int& residue_char) {
    if (residue_char == 0) return 0;
    Int e = 0;
    for (const FanPoint& x : points) {
        if (x.height != 1) continue;
        // s = p^r with r >= 1 means s > 1 and the prime-to-p part is trivial
        if (x.s > 1 && prime_to_p_part(x.s, residue_char) == 1) e += x.chi;
    }
    return e;
}

ZetaFactorization zeta(const std::vector<FanPoint>& points) {
    ZetaFactorization z;
    for (const FanPoint& x : points) {
        if (x.height != 1) continue;
        z.factors[x.s_prime] -= x.chi;
    }
    for (auto it = z.factors.begin(); it != z.factors.end();) {
        if (it->second == 0)
            it = z.factors.erase(it);
        else
            ++it;
    }
    return z;
}

bool zeta_trace_crosscheck(const std::vector<FanPoint>& points, int order) {
    if (order < 1) throw precondition_error("zeta_trace_crosscheck: order must be positive");
    // t d/dt log of the zeta factorization: each height-1 point contributes
    // the geometric series s' chi (t^{s'} + t^{2s'} + ...)
    std::vector<Int> coeff(static_cast<size_t>(order) + 1, 0);
    for (const FanPoint& x : points) {
        if (x.height != 1) continue;
        long long step = x.s_prime.convert_to<long long>();
        for (long long k = step; k <= order; k += step) coeff[static_cast<size_t>(k)] += x.s_prime * x.chi;
    }
    for (int d = 1; d <= order; ++d) {
        Int want = trace(points, d);
        if (coeff[static_cast<size_t>(d)] != want) {
            std::ostringstream os;
            os << "zeta/trace identity fails at d = " << d << ": series coefficient "
               << coeff[static_cast<size_t>(d)] << " vs trace " << want;
            throw consistency_error(os.str());
        }
    }
    return true;
}

ZetaFactorization snc_acampo(const DecoratedModel& model) {
    SncResult snc = is_snc(model);
    if (!snc.snc) throw precondition_error("snc_acampo: model is not SNC");
    // recompute from the cycle multiplicities rather than the stalk data
    std::map<std::string, Int> chi_of;
    for (const FanPoint& x : enumerate_points(model)) chi_of[x.id] = x.chi;
    ZetaFactorization z;
    for (const auto& [id, s] : snc.cycle) {
        Int m = prime_to_p_part(s, model.residue_char);
        z.factors[m] -= chi_of.at(id);
    }
    for (auto it = z.factors.begin(); it != z.factors.end();) {
        if (it->second == 0)
            it = z.factors.erase(it);
        else
            ++it;
    }
    return z;
}

Verdict main_theorem_check(const DecoratedModel& model) {
    ConsistencyReport rep = log_smooth_consistency(model);
    if (!rep.ok())
        throw consistency_error("main_theorem_check: the log smoothness claim is inconsistent: " +
                                rep.violations.front());
    std::vector<FanPoint> points = enumerate_points(model);
    Verdict v;
    v.trace1 = trace(points, 1);
    v.volume = rational_volume(points);
    v.ok = (v.trace1 == v.volume);
    if (!v.ok)
        throw error("main_theorem_check: trace(1) != volume after a passing consistency gate");
    return v;
}

StalkDescriptor stalk_descriptor(const FanPoint& x, const Int& residue_char) {
    StalkDescriptor d;
    d.point = x.id;
    d.n = x.height - 1;
    d.e_order = prime_to_p_part(x.lambda, residue_char);
    for (int q = 0; q <= d.n; ++q) d.rank_profile.push_back(d.e_order * binomial(d.n, q));
    return d;
}

Int descriptor_trace(const StalkDescriptor& d, const Int& dpow) {
    // the operator acts through a cyclic group of order e_order on each
    // rank-1 block, so each block contributes e_order when e_order | d
    Int base = (dpow % d.e_order == 0) ? d.e_order : Int(0);
    Int t = 0;
    for (int q = 0; q < static_cast<int>(d.rank_profile.size()); ++q) {
        Int blocks = d.rank_profile[static_cast<size_t>(q)] / d.e_order;
        Int contrib = blocks * base;
        t += (q % 2 == 0) ? contrib : -contrib;
    }
    return t;
}

int default_trace_horizon(const std::vector<FanPoint>& points) {
    Int l = 1;
    for (const FanPoint& x : points)
        if (x.height == 1) l = lcm(l, x.s_prime);
    if (l > 60) l = 60;
    return static_cast<int>(l.convert_to<long long>());
}

TraceReport trace_report(const std::vector<FanPoint>& points, const Int& residue_char,
                         int max_d) {
    if (max_d <= 0) max_d = default_trace_horizon(points);
    TraceReport r;
    for (int d = 1; d <= max_d; ++d) {
        Int td = trace(points, d);
        if (td != trace_via_stalks(points, d))
            throw error("trace_report: stalkwise trace disagrees (internal)");
        r.traces[d] = td;
    }
    r.volume = rational_volume(points);
    r.error_term = error_term(points, residue_char);
    if (r.error_term != r.traces.at(1) - r.volume)
        throw error("trace_report: error term identity violated (internal)");
    return r;
}

}  // namespace logtrace
