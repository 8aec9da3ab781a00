#pragma once

#include "logtrace/monoid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logtrace {

// Raw model data as read from a model file. Semantic structure (complexes,
// glued face classes, stalks) is derived by build_structure; keeping the
// raw form separate lets validation report every violation instead of
// dying on the first malformed chart.
struct RawChart {
    std::string id;
    int rank = 0;
    std::vector<Mat> maximal_cones;  // ray generator lists
    Vec e;                           // image of the uniformizer in the dual lattice
};

struct RawFaceRef {
    std::string chart;
    std::vector<int> ray_indices;  // sorted indices into the chart's canonical ray list
};

struct RawGluing {
    RawFaceRef a, b;
    Mat map;  // rank(b) x rank(a), applied to column vectors of chart a
};

struct RawDecoration {
    RawFaceRef point;
    Int value;
};

struct DecoratedModel {
    Int residue_char = 0;
    bool log_smooth_claimed = false;
    std::vector<RawChart> charts;
    std::vector<RawGluing> gluings;
    std::vector<RawDecoration> chi;
    std::vector<RawDecoration> cokernel_torsion;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_text() const;
};

// Lattice isomorphism between the saturated span lattices of two glued
// faces, stored in span coordinates so it composes and inverts exactly.
struct SpanMap {
    Lattice src{0};
    Lattice dst{0};
    Mat t;  // row-vector convention: coords_dst = coords_src * t

    Vec apply(const Vec& v) const;
    SpanMap inverse() const;
    static SpanMap compose(const SpanMap& second, const SpanMap& first);
    static SpanMap identity(const Lattice& span);
};

struct ClassMember {
    int chart = 0;  // index into charts
    Cone face;
    SpanMap from_root;
};

struct FaceClass {
    int root_chart = 0;
    Cone root_face;
    std::vector<ClassMember> members;
    std::optional<Int> chi;
    std::optional<Int> cokernel_torsion;
};

struct FanPoint {
    std::string id;     // "<chart>:<cone key>" of the canonical member
    std::string chart;  // canonical member chart id
    Cone face;
    int height = 0;
    AffineMonoid stalk;  // sharp fs, rank = height
    Vec e_stalk;         // image of e in the stalk group
    Int s = 0;           // height-1 only: multiplicity <ray, e>
    Int s_prime = 0;     // prime-to-p part of s
    Int lambda = 0;      // content of e_stalk
    Int lambda_prime = 0;
    Int chi = 0;
    std::optional<Int> cokernel_torsion;
    std::vector<std::pair<std::string, std::string>> members;  // (chart, cone key)
};

// Fully derived model structure; only exists for models whose structural
// checks pass.
struct ModelStructure {
    std::vector<ConeComplex> complexes;  // parallel to model.charts
    std::vector<FaceClass> classes;
    std::vector<FanPoint> points;        // heights >= 1, sorted by (height, id)
};

// Run all structural checks. With `collect` non-null every violation is
// recorded and a best-effort structure is returned; with collect == null the
// first violation throws precondition_error.
ModelStructure build_structure(const DecoratedModel& model, ValidationReport* collect);

// structural checks and face classes only: chi entries may be absent and no
// stalk data is computed (used by generators and subdivision internals)
ModelStructure build_classes(const DecoratedModel& model);

ValidationReport validate(const DecoratedModel& model);

std::vector<FanPoint> enumerate_points(const DecoratedModel& model);

// Log blow-up along the ray through v (given in `chart` coordinates).
// Applied consistently to every member of the carrier's glued class; new
// faces inherit chi from their carrier when the dimension is preserved and
// get chi = 0 otherwise (positive-dimensional torus fibres).
DecoratedModel model_stellar_subdivide(const DecoratedModel& model, const std::string& chart,
                                       const Vec& v,
                                       const std::vector<int>* expected_face = nullptr);

struct ModelResolution {
    DecoratedModel model;
    std::vector<std::pair<std::string, Vec>> trail;  // (chart, center)
};

// Iterate log blow-ups until every stalk is free (an SNC model).
ModelResolution model_resolve(const DecoratedModel& model);

struct SncResult {
    bool snc = false;
    // the special fibre as a formal cycle: (point id, multiplicity s)
    std::vector<std::pair<std::string, Int>> cycle;
};

SncResult is_snc(const DecoratedModel& model);

struct ConsistencyReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// With log smoothness claimed and p > 0: every asserted chart cokernel
// torsion must be prime to p, and every height-1 point with p | s(x) must
// carry chi = 0.
ConsistencyReport log_smooth_consistency(const DecoratedModel& model);

// model file format (JSON, UTF-8); unknown keys are rejected
DecoratedModel parse_model(const std::string& json_text);
std::string model_to_json(const DecoratedModel& model);
DecoratedModel load_model(const std::string& path);
void save_model(const DecoratedModel& model, const std::string& path);

}  // namespace logtrace
