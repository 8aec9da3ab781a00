#include "logtrace/report.hpp"

#include <json.hpp>

#include <chrono>
#include <sstream>

namespace logtrace {

Analysis run_analysis(const DecoratedModel& model, int max_d) {
    auto t0 = std::chrono::steady_clock::now();

    ValidationReport vr = validate(model);
    if (!vr.ok()) throw precondition_error("model rejected:\n" + vr.to_text());

    Analysis a;
    a.residue_char = model.residue_char;
    a.log_smooth_claimed = model.log_smooth_claimed;

    if (model.log_smooth_claimed && model.residue_char > 0) {
        ConsistencyReport cr = log_smooth_consistency(model);
        if (!cr.ok()) {
            std::ostringstream os;
            os << "log smoothness consistency check failed:\n";
            for (const auto& v : cr.violations) os << "  - " << v << "\n";
            throw consistency_error(os.str());
        }
        a.consistency_checked = true;
    }

    a.points = enumerate_points(model);
    a.traces = trace_report(a.points, model.residue_char, max_d);
    a.zeta_factors = zeta(a.points);
    zeta_trace_crosscheck(a.points, 20);

    SncResult snc = is_snc(model);
    a.snc = snc.snc;
    a.snc_cycle = snc.cycle;
    if (a.snc) {
        ZetaFactorization via_cycle = snc_acampo(model);
        if (!(via_cycle == a.zeta_factors))
            throw error("analysis: SNC cycle zeta disagrees with the stalk zeta (internal)");
    }
    if (model.log_smooth_claimed) a.verdict = main_theorem_check(model);

    a.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return a;
}

namespace {

void assert_internally_consistent(const Analysis& a) {
    if (a.traces.error_term != a.traces.traces.at(1) - a.traces.volume)
        throw error("report: error_term != trace(1) - volume (internal)");
}

}  // namespace

std::string render_text(const Analysis& a) {
    assert_internally_consistent(a);
    std::ostringstream os;

    std::map<int, int> by_height;
    for (const FanPoint& p : a.points) by_height[p.height]++;
    os << "points by height:";
    for (const auto& [h, n] : by_height) os << "  h=" << h << ": " << n;
    os << "\n";

    os << "height-1 strata (id, s, s', lambda, chi):\n";
    for (const FanPoint& p : a.points) {
        if (p.height != 1) continue;
        os << "  " << p.id << "  s=" << p.s << "  s'=" << p.s_prime << "  lambda=" << p.lambda
           << "  chi=" << p.chi << "\n";
    }

    os << "volume: " << a.traces.volume << "\n";
    os << "traces:";
    for (const auto& [d, t] : a.traces.traces) os << "  " << d << ":" << t;
    os << "\n";
    os << "zeta: " << a.zeta_factors.to_string() << "\n";
    os << "error term: " << a.traces.error_term << "\n";
    os << "snc: " << (a.snc ? "yes" : "no") << "\n";
    if (a.snc) {
        os << "special fibre cycle:";
        for (const auto& [id, s] : a.snc_cycle) os << "  " << s << "*[" << id << "]";
        os << "\n";
    }
    if (a.consistency_checked)
        os << "log-smooth consistency: passed\n";
    if (a.verdict)
        os << "trace(1) = " << a.verdict->trace1 << " = volume = " << a.verdict->volume
           << " (log smooth model)\n";
    os << "elapsed: " << a.elapsed_ms << " ms\n";
    return os.str();
}

std::string render_json(const Analysis& a) {
    assert_internally_consistent(a);
    nlohmann::json root;
    auto i64 = [](const Int& v) { return v.convert_to<long long>(); };
    root["volume"] = i64(a.traces.volume);
    root["error_term"] = i64(a.traces.error_term);
    root["snc"] = a.snc;
    root["traces"] = nlohmann::json::object();
    for (const auto& [d, t] : a.traces.traces) root["traces"][d.str()] = i64(t);
    root["zeta_factors"] = nlohmann::json::object();
    for (const auto& [m, e] : a.zeta_factors.factors) root["zeta_factors"][m.str()] = i64(e);
    root["points"] = nlohmann::json::array();
    for (const FanPoint& p : a.points) {
        nlohmann::json jp;
        jp["id"] = p.id;
        jp["height"] = p.height;
        jp["chi"] = i64(p.chi);
        jp["lambda"] = i64(p.lambda);
        if (p.height == 1) {
            jp["s"] = i64(p.s);
            jp["s_prime"] = i64(p.s_prime);
        }
        root["points"].push_back(std::move(jp));
    }
    return root.dump(2) + "\n";
}

}  // namespace logtrace
