#include "logtrace/fixtures.hpp"

#include <map>

namespace logtrace {

namespace {

// Ray indices refer to the chart's canonical (lexicographically sorted) ray
// list. For the quadrant charts below that order is (0,1), (1,0).

const char* kGoodReduction = R"({
  "residue_char": 7,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 1, "maximal_cones": [[[1]]], "e": [1]}
  ],
  "gluings": [],
  "chi": [
    {"point": ["c0", [0]], "value": 3}
  ]
})";

// Kodaira I0*: four multiplicity-1 tails (chi = 1) meeting a central
// multiplicity-2 component (chi = -2); one quadrant chart per intersection,
// the central ray shared by all four charts.
const char* kI0Star = R"({
  "residue_char": 5,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]},
    {"id": "c1", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]},
    {"id": "c2", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]},
    {"id": "c3", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]}
  ],
  "gluings": [
    {"chart_a": "c1", "face_a": [1], "chart_b": "c0", "face_b": [1], "map": [[1,0],[0,1]]},
    {"chart_a": "c2", "face_a": [1], "chart_b": "c0", "face_b": [1], "map": [[1,0],[0,1]]},
    {"chart_a": "c3", "face_a": [1], "chart_b": "c0", "face_b": [1], "map": [[1,0],[0,1]]}
  ],
  "chi": [
    {"point": ["c0", [0]], "value": 1},
    {"point": ["c1", [0]], "value": 1},
    {"point": ["c2", [0]], "value": 1},
    {"point": ["c3", [0]], "value": 1},
    {"point": ["c0", [1]], "value": -2},
    {"point": ["c0", [0,1]], "value": 1},
    {"point": ["c1", [0,1]], "value": 1},
    {"point": ["c2", [0,1]], "value": 1},
    {"point": ["c3", [0,1]], "value": 1}
  ]
})";

// Kodaira I3: a cycle of three multiplicity-1 rational curves, chi = 0 on
// each punctured component, chi = 1 on each of the three nodes.
const char* kI3 = R"({
  "residue_char": 7,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [1,1]},
    {"id": "c1", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [1,1]},
    {"id": "c2", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [1,1]}
  ],
  "gluings": [
    {"chart_a": "c0", "face_a": [0], "chart_b": "c1", "face_b": [1], "map": [[0,1],[1,0]]},
    {"chart_a": "c1", "face_a": [0], "chart_b": "c2", "face_b": [1], "map": [[0,1],[1,0]]},
    {"chart_a": "c2", "face_a": [0], "chart_b": "c0", "face_b": [1], "map": [[0,1],[1,0]]}
  ],
  "chi": [
    {"point": ["c0", [0]], "value": 0},
    {"point": ["c1", [0]], "value": 0},
    {"point": ["c2", [0]], "value": 0},
    {"point": ["c0", [0,1]], "value": 1},
    {"point": ["c1", [0,1]], "value": 1},
    {"point": ["c2", [0,1]], "value": 1}
  ]
})";

// Kodaira I1: a nodal rational curve; the two rays of one quadrant chart are
// glued to each other.
const char* kI1 = R"({
  "residue_char": 11,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [1,1]}
  ],
  "gluings": [
    {"chart_a": "c0", "face_a": [0], "chart_b": "c0", "face_b": [1], "map": [[0,1],[1,0]]}
  ],
  "chi": [
    {"point": ["c0", [0]], "value": 0},
    {"point": ["c0", [0,1]], "value": 1}
  ]
})";

// A1 chart: cone((1,0),(1,2)) with e = (1,1); ray multiplicities 1 and 3,
// the corner stalk is not free. Resolving inserts the ray (1,1) with
// multiplicity 2.
const char* kA1 = R"({
  "residue_char": 5,
  "log_smooth_claimed": false,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[1,0],[1,2]]], "e": [1,1]}
  ],
  "gluings": [],
  "chi": [
    {"point": ["c0", [0]], "value": 1},
    {"point": ["c0", [1]], "value": 1},
    {"point": ["c0", [0,1]], "value": 1}
  ]
})";

// Saito-shaped chain in residue characteristic 2: a multiplicity-2 component
// with chi = 0 meeting two multiplicity-1 components.
const char* kSaitoChain = R"({
  "residue_char": 2,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]},
    {"id": "c1", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [2,1]}
  ],
  "gluings": [
    {"chart_a": "c1", "face_a": [1], "chart_b": "c0", "face_b": [1], "map": [[1,0],[0,1]]}
  ],
  "chi": [
    {"point": ["c0", [0]], "value": 1},
    {"point": ["c1", [0]], "value": 1},
    {"point": ["c0", [1]], "value": 0},
    {"point": ["c0", [0,1]], "value": 1},
    {"point": ["c1", [0,1]], "value": 1}
  ]
})";

// claims log smoothness but carries a residue-characteristic multiplicity
// with nonvanishing chi; the consistency gate must reject it
const char* kViolating = R"({
  "residue_char": 3,
  "log_smooth_claimed": true,
  "charts": [
    {"id": "c0", "rank": 1, "maximal_cones": [[[1]]], "e": [3]}
  ],
  "gluings": [],
  "chi": [
    {"point": ["c0", [0]], "value": 1}
  ]
})";

// verticality failure: e pairs to zero against the second ray
const char* kNonVertical = R"({
  "residue_char": 5,
  "log_smooth_claimed": false,
  "charts": [
    {"id": "c0", "rank": 2, "maximal_cones": [[[0,1],[1,0]]], "e": [1,0]}
  ],
  "gluings": [],
  "chi": [
    {"point": ["c0", [0]], "value": 1},
    {"point": ["c0", [1]], "value": 1},
    {"point": ["c0", [0,1]], "value": 1}
  ]
})";

const std::map<std::string, const char*>& table() {
    static const std::map<std::string, const char*> t = {
        {"good_reduction", kGoodReduction},
        {"i0star", kI0Star},
        {"i3", kI3},
        {"i1", kI1},
        {"a1", kA1},
        {"saito_chain", kSaitoChain},
        {"violating", kViolating},
        {"nonvertical", kNonVertical},
    };
    return t;
}

}  // namespace

std::string builtin_fixture(const std::string& name) {
    auto it = table().find(name);
    return it == table().end() ? std::string() : std::string(it->second);
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
}

}  // namespace logtrace
