#pragma once

#include "logtrace/invariants.hpp"

#include <optional>

namespace logtrace {

// Everything `analyze` computes for one model. Rendering re-asserts the
// error-term identity before emitting anything.
struct Analysis {
    std::vector<FanPoint> points;
    TraceReport traces;
    ZetaFactorization zeta_factors;
    bool snc = false;
    std::vector<std::pair<std::string, Int>> snc_cycle;
    std::optional<bool> consistency_checked;  // set when the gate ran
    std::optional<Verdict> verdict;           // set when log smoothness is claimed
    Int residue_char = 0;
    bool log_smooth_claimed = false;
    long long elapsed_ms = 0;
};

// Validate, gate, and compute. Throws precondition_error on validation
// failure and consistency_error when the log-smoothness gate trips.
Analysis run_analysis(const DecoratedModel& model, int max_d);

std::string render_text(const Analysis& a);
std::string render_json(const Analysis& a);

}  // namespace logtrace
