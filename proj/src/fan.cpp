#include "logtrace/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace logtrace {

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    if (violations.empty()) {
        os << "model accepted\n";
    } else {
        os << violations.size() << " violation(s):\n";
        for (const auto& v : violations) os << "  - " << v << "\n";
    }
    return os.str();
}

Vec SpanMap::apply(const Vec& v) const {
    auto coords = src.coordinates(v);
    if (!coords) throw error("span map: vector outside the source span (internal)");
    return dst.from_coordinates(row_times_mat(*coords, t));
}

SpanMap SpanMap::inverse() const { return SpanMap{dst, src, unimodular_inverse(t)}; }

SpanMap SpanMap::compose(const SpanMap& second, const SpanMap& first) {
    if (!(first.dst == second.src)) throw error("span map: composition mismatch (internal)");
    if (first.t.empty()) return SpanMap{first.src, second.dst, {}};
    return SpanMap{first.src, second.dst, mat_mul(first.t, second.t)};
}

SpanMap SpanMap::identity(const Lattice& span) {
    return SpanMap{span, span, identity_matrix(span.rank())};
}

namespace {

struct Collector {
    ValidationReport* report;
    bool failed = false;

    void add(const std::string& msg) {
        failed = true;
        if (report)
            report->violations.push_back(msg);
        else
            throw precondition_error(msg);
    }
};

std::string face_label(const RawChart& chart, const Cone& face) {
    return chart.id + ":" + face.key();
}

std::string ref_label(const RawFaceRef& ref) {
    std::ostringstream os;
    os << ref.chart << ":[";
    for (size_t i = 0; i < ref.ray_indices.size(); ++i) {
        if (i) os << ",";
        os << ref.ray_indices[i];
    }
    os << "]";
    return os.str();
}

Lattice span_lattice(const Cone& face) {
    return Lattice::from_generators(face.rays(), face.ambient_rank()).saturation();
}

// resolve a face reference against a built complex
std::optional<Cone> resolve_face(const RawFaceRef& ref, const ConeComplex& complex,
                                 Collector& col) {
    const Mat& rays = complex.rays();
    if (ref.ray_indices.empty()) {
        col.add("face reference " + ref_label(ref) +
                ": empty ray list (the zero cone carries no stratum)");
        return std::nullopt;
    }
    Mat face_rays;
    for (int i : ref.ray_indices) {
        if (i < 0 || i >= static_cast<int>(rays.size())) {
            col.add("face reference " + ref_label(ref) + ": ray index out of range");
            return std::nullopt;
        }
        face_rays.push_back(rays[i]);
    }
    Cone face = Cone::from_rays(face_rays, complex.ambient_rank());
    if (static_cast<int>(face.rays().size()) != static_cast<int>(ref.ray_indices.size()) ||
        !complex.has_face(face)) {
        col.add("face reference " + ref_label(ref) + ": not a face of the chart complex");
        return std::nullopt;
    }
    return face;
}

struct GluingEdge {
    int chart_a = 0, chart_b = 0;
    Cone face_a, face_b;
    SpanMap map;  // span(face_a) -> span(face_b)
};

// check one gluing record and derive its span isomorphism
std::optional<GluingEdge> check_gluing(const DecoratedModel& model,
                                       const std::vector<std::optional<ConeComplex>>& complexes,
                                       const std::map<std::string, int>& chart_index,
                                       const RawGluing& g, Collector& col) {
    auto ia = chart_index.find(g.a.chart);
    auto ib = chart_index.find(g.b.chart);
    if (ia == chart_index.end() || ib == chart_index.end()) {
        col.add("gluing " + ref_label(g.a) + " ~ " + ref_label(g.b) + ": unknown chart");
        return std::nullopt;
    }
    if (!complexes[ia->second] || !complexes[ib->second]) return std::nullopt;
    const ConeComplex& ka = *complexes[ia->second];
    const ConeComplex& kb = *complexes[ib->second];
    auto fa = resolve_face(g.a, ka, col);
    auto fb = resolve_face(g.b, kb, col);
    if (!fa || !fb) return std::nullopt;

    const RawChart& ca = model.charts[ia->second];
    const RawChart& cb = model.charts[ib->second];
    std::string label = "gluing " + face_label(ca, *fa) + " ~ " + face_label(cb, *fb);

    if (static_cast<int>(g.map.size()) != cb.rank || row_length(g.map, ca.rank) != ca.rank) {
        col.add(label + ": map must be a " + std::to_string(cb.rank) + "x" +
                std::to_string(ca.rank) + " integer matrix");
        return std::nullopt;
    }
    if (fa->dim() != fb->dim()) {
        col.add(label + ": glued faces have different dimensions");
        return std::nullopt;
    }

    // rays must map bijectively onto rays
    std::set<Vec> target_rays(fb->rays().begin(), fb->rays().end());
    std::set<Vec> hit;
    for (const Vec& r : fa->rays()) {
        Vec img = mat_times_col(g.map, r);
        if (!target_rays.count(img)) {
            col.add(label + ": map does not carry ray " + to_string(r) + " to a ray");
            return std::nullopt;
        }
        hit.insert(img);
    }
    if (hit.size() != target_rays.size()) {
        col.add(label + ": map does not carry the rays onto the rays");
        return std::nullopt;
    }

    // unimodularity between the saturated span lattices
    Lattice sa = span_lattice(*fa);
    Lattice sb = span_lattice(*fb);
    Mat t;
    for (const Vec& basis_row : sa.basis()) {
        Vec img = mat_times_col(g.map, basis_row);
        auto coords = sb.coordinates(img);
        if (!coords) {
            col.add(label + ": map does not send the span lattice into the span lattice");
            return std::nullopt;
        }
        t.push_back(*coords);
    }
    Int det = determinant(t);
    if (det != 1 && det != -1) {
        col.add(label + ": map is not unimodular between the face spans");
        return std::nullopt;
    }

    // the uniformizer must be transported: <e_b, map r> = <e_a, r>
    for (const Vec& r : fa->rays()) {
        if (dot(cb.e, mat_times_col(g.map, r)) != dot(ca.e, r)) {
            col.add(label + ": map does not transport e (ray multiplicities mismatch at " +
                    to_string(r) + ")");
            return std::nullopt;
        }
    }

    return GluingEdge{ia->second, ib->second, *fa, *fb, SpanMap{sa, sb, t}};
}

struct NodeKey {
    int chart;
    std::string key;
    bool operator<(const NodeKey& o) const {
        if (chart != o.chart) return chart < o.chart;
        return key < o.key;
    }
};

FanPoint make_point(const DecoratedModel& model, const FaceClass& cls,
                    const std::vector<std::pair<std::string, std::string>>& member_labels,
                    const Cone& face, int chart) {
    const RawChart& rc = model.charts[chart];
    FanPoint pt;
    pt.chart = rc.id;
    pt.face = face;
    pt.id = rc.id + ":" + face.key();
    pt.height = face.dim();
    pt.members = member_labels;
    pt.chi = cls.chi.value_or(0);
    pt.cokernel_torsion = cls.cokernel_torsion;

    // stalk: Hilbert presentation of the image of the dual cone in the
    // quotient of the dual lattice by face-perp
    Mat kernel = integer_kernel(face.rays(), rc.rank);
    TorsionFreeQuotient proj = torsion_free_quotient(Lattice::from_generators(kernel, rc.rank));
    Cone dual = dualize(face);
    Mat proj_gens;
    for (const Vec& r : dual.rays()) proj_gens.push_back(proj.apply(r));
    Cone stalk_cone = Cone::from_rays(proj_gens, proj.quotient_rank);
    Mat hb = hilbert_basis(stalk_cone);
    Vec e_img = proj.apply(rc.e);

    // orient rank-1 stalks positively
    if (proj.quotient_rank == 1 && !hb.empty() && hb[0][0] < 0) {
        for (Vec& g : hb) g = negate(g);
        e_img = negate(e_img);
    }
    pt.stalk = make_known_saturated(hb, proj.quotient_rank);
    pt.e_stalk = e_img;
    pt.lambda = content(e_img);
    pt.lambda_prime = prime_to_p_part(pt.lambda, model.residue_char);
    if (pt.height == 1) {
        pt.s = dot(rc.e, face.rays()[0]);
        pt.s_prime = prime_to_p_part(pt.s, model.residue_char);
    }
    return pt;
}

ModelStructure build_structure_impl(const DecoratedModel& model, ValidationReport* report,
                                    bool require_chi, bool build_points) {
    Collector col{report};
    ModelStructure out;

    if (model.residue_char != 0 && !is_prime(model.residue_char))
        col.add("residue_char must be 0 or a prime number");

    std::map<std::string, int> chart_index;
    for (int i = 0; i < static_cast<int>(model.charts.size()); ++i) {
        const RawChart& c = model.charts[i];
        if (c.id.empty()) col.add("chart #" + std::to_string(i) + ": empty id");
        if (chart_index.count(c.id)) col.add("duplicate chart id '" + c.id + "'");
        chart_index[c.id] = i;
    }
    if (model.charts.empty()) col.add("model has no charts");

    std::vector<std::optional<ConeComplex>> complexes(model.charts.size());
    for (size_t i = 0; i < model.charts.size(); ++i) {
        const RawChart& c = model.charts[i];
        if (c.rank < 1) {
            col.add("chart '" + c.id + "': rank must be positive");
            continue;
        }
        if (c.rank > config().rank_bound) {
            col.add("chart '" + c.id + "': rank exceeds the configured bound");
            continue;
        }
        if (static_cast<int>(c.e.size()) != c.rank) {
            col.add("chart '" + c.id + "': e has wrong length");
            continue;
        }
        try {
            std::vector<Cone> maximal;
            for (const Mat& gens : c.maximal_cones)
                maximal.push_back(Cone::from_rays(gens, c.rank));
            for (const Cone& cone : maximal)
                if (!cone.pointed())
                    throw input_error("cone " + cone.key() + " is not pointed");
            ConeComplex k = ConeComplex::from_maximal(std::move(maximal), c.rank);
            // verticality: every ray multiplicity is at least 1
            for (const Vec& r : k.rays()) {
                Int m = dot(c.e, r);
                if (m < 1)
                    col.add("chart '" + c.id + "': verticality violated on ray " + to_string(r) +
                            " (<e, ray> = " + m.str() + ")");
            }
            complexes[i] = std::move(k);
        } catch (const error& e) {
            col.add("chart '" + c.id + "': " + e.what());
        }
    }

    // glued-face classes: BFS over faces with span transforms
    std::vector<GluingEdge> edges;
    for (const RawGluing& g : model.gluings) {
        auto edge = check_gluing(model, complexes, chart_index, g, col);
        if (edge) edges.push_back(std::move(*edge));
    }

    std::map<NodeKey, Cone> nodes;
    for (size_t i = 0; i < complexes.size(); ++i) {
        if (!complexes[i]) continue;
        for (const Cone& f : complexes[i]->all_faces())
            nodes.emplace(NodeKey{static_cast<int>(i), f.key()}, f);
    }

    // adjacency: each gluing edge identifies every subface pair
    struct Arrow {
        NodeKey to;
        SpanMap map;
    };
    std::map<NodeKey, std::vector<Arrow>> adj;
    for (const GluingEdge& e : edges) {
        bool edge_ok = true;
        for (const Cone& sub : e.face_a.faces()) {
            if (sub.dim() < 1) continue;
            // transport the subface through the ambient matrix recovered on
            // the span: compose span coordinates of the big faces
            Lattice ssub = span_lattice(sub);
            Mat img_rays;
            bool ok = true;
            for (const Vec& r : sub.rays()) {
                // image of r under the edge map
                auto c = e.map.src.coordinates(r);
                if (!c) {
                    ok = false;
                    break;
                }
                img_rays.push_back(e.map.dst.from_coordinates(row_times_mat(*c, e.map.t)));
            }
            if (!ok) {
                col.add("gluing at " + sub.key() + ": subface escaped the span (internal)");
                edge_ok = false;
                continue;
            }
            Cone img = Cone::from_rays(img_rays, model.charts[e.chart_b].rank);
            if (!complexes[e.chart_b] || !complexes[e.chart_b]->has_face(img)) {
                col.add("gluing does not map face " + sub.key() + " onto a face of chart '" +
                        model.charts[e.chart_b].id + "'");
                edge_ok = false;
                continue;
            }
            // restricted span map
            Lattice simg = span_lattice(img);
            Mat t;
            for (const Vec& basis_row : ssub.basis()) {
                auto c = e.map.src.coordinates(basis_row);
                Vec irow = e.map.dst.from_coordinates(row_times_mat(*c, e.map.t));
                auto ic = simg.coordinates(irow);
                if (!ic) {
                    ok = false;
                    break;
                }
                t.push_back(*ic);
            }
            if (!ok) {
                col.add("gluing restriction failed at face " + sub.key());
                edge_ok = false;
                continue;
            }
            SpanMap restricted{ssub, simg, t};
            NodeKey na{e.chart_a, sub.key()};
            NodeKey nb{e.chart_b, img.key()};
            adj[na].push_back({nb, restricted});
            adj[nb].push_back({na, restricted.inverse()});
        }
        (void)edge_ok;
    }

    // BFS components in deterministic node order
    std::map<NodeKey, int> class_of;
    for (const auto& [key, face] : nodes) {
        if (class_of.count(key)) continue;
        FaceClass cls;
        cls.root_chart = key.chart;
        cls.root_face = face;
        std::vector<std::pair<NodeKey, SpanMap>> frontier{
            {key, SpanMap::identity(span_lattice(face))}};
        class_of[key] = static_cast<int>(out.classes.size());
        std::set<std::pair<NodeKey, Mat>> seen;
        while (!frontier.empty()) {
            std::vector<std::pair<NodeKey, SpanMap>> next;
            for (auto& [nk, from_root] : frontier) {
                if (seen.insert({nk, from_root.t}).second)
                    cls.members.push_back(ClassMember{nk.chart, nodes.at(nk), from_root});
                auto it = adj.find(nk);
                if (it == adj.end()) continue;
                for (const Arrow& a : it->second) {
                    SpanMap composed = SpanMap::compose(a.map, from_root);
                    auto id = std::make_pair(a.to, composed.t);
                    if (seen.count(id)) continue;
                    auto prev = class_of.find(a.to);
                    if (prev != class_of.end() &&
                        prev->second != static_cast<int>(out.classes.size())) {
                        col.add("gluing graph merges faces inconsistently (internal)");
                        continue;
                    }
                    class_of[a.to] = static_cast<int>(out.classes.size());
                    next.push_back({a.to, composed});
                }
            }
            frontier = std::move(next);
        }
        out.classes.push_back(std::move(cls));
    }

    // attach decorations
    auto resolve_ref = [&](const RawFaceRef& ref) -> std::optional<int> {
        auto it = chart_index.find(ref.chart);
        if (it == chart_index.end()) {
            col.add("decoration " + ref_label(ref) + ": unknown chart");
            return std::nullopt;
        }
        if (!complexes[it->second]) return std::nullopt;
        auto face = resolve_face(ref, *complexes[it->second], col);
        if (!face) return std::nullopt;
        auto cit = class_of.find(NodeKey{it->second, face->key()});
        if (cit == class_of.end()) {
            col.add("decoration " + ref_label(ref) + ": face has no stratum class (internal)");
            return std::nullopt;
        }
        return cit->second;
    };

    for (const RawDecoration& d : model.chi) {
        auto ci = resolve_ref(d.point);
        if (!ci) continue;
        FaceClass& cls = out.classes[*ci];
        if (cls.chi && *cls.chi != d.value)
            col.add("conflicting chi values for the stratum of " + ref_label(d.point));
        else
            cls.chi = d.value;
    }
    for (const RawDecoration& d : model.cokernel_torsion) {
        if (d.value < 1) {
            col.add("chart_cokernel_torsion at " + ref_label(d.point) + ": value must be >= 1");
            continue;
        }
        auto ci = resolve_ref(d.point);
        if (!ci) continue;
        FaceClass& cls = out.classes[*ci];
        if (cls.cokernel_torsion && *cls.cokernel_torsion != d.value)
            col.add("conflicting chart_cokernel_torsion values at " + ref_label(d.point));
        else
            cls.cokernel_torsion = d.value;
    }
    if (require_chi) {
        for (const FaceClass& cls : out.classes) {
            if (!cls.chi)
                col.add("missing chi decoration for the stratum of " +
                        face_label(model.charts[cls.root_chart], cls.root_face));
        }
    }

    if (col.failed) {
        for (size_t i = 0; i < complexes.size(); ++i)
            if (complexes[i]) out.complexes.push_back(std::move(*complexes[i]));
        return out;
    }
    if (!build_points) {
        for (size_t i = 0; i < complexes.size(); ++i)
            if (complexes[i]) out.complexes.push_back(std::move(*complexes[i]));
        return out;
    }

    // fan points, one per class
    for (const FaceClass& cls : out.classes) {
        // canonical member: minimal (chart id, cone key)
        int best = 0;
        std::set<std::pair<std::string, std::string>> labels;
        for (int i = 0; i < static_cast<int>(cls.members.size()); ++i) {
            const ClassMember& m = cls.members[i];
            labels.insert({model.charts[m.chart].id, m.face.key()});
            auto cur = std::make_pair(model.charts[m.chart].id, m.face.key());
            auto bst = std::make_pair(model.charts[cls.members[best].chart].id,
                                      cls.members[best].face.key());
            if (cur < bst) best = i;
        }
        std::vector<std::pair<std::string, std::string>> member_labels(labels.begin(),
                                                                       labels.end());
        out.points.push_back(make_point(model, cls, member_labels,
                                        cls.members[best].face, cls.members[best].chart));
    }
    std::sort(out.points.begin(), out.points.end(), [](const FanPoint& a, const FanPoint& b) {
        if (a.height != b.height) return a.height < b.height;
        return a.id < b.id;
    });

    for (size_t i = 0; i < complexes.size(); ++i)
        if (complexes[i]) out.complexes.push_back(std::move(*complexes[i]));
    return out;
}

}  // namespace

ModelStructure build_structure(const DecoratedModel& model, ValidationReport* collect) {
    return build_structure_impl(model, collect, true, true);
}

ModelStructure build_classes(const DecoratedModel& model) {
    return build_structure_impl(model, nullptr, false, false);
}

ValidationReport validate(const DecoratedModel& model) {
    ValidationReport report;
    build_structure_impl(model, &report, true, false);
    return report;
}

std::vector<FanPoint> enumerate_points(const DecoratedModel& model) {
    return build_structure(model, nullptr).points;
}

namespace {

int chart_index_of(const DecoratedModel& model, const std::string& chart) {
    for (int i = 0; i < static_cast<int>(model.charts.size()); ++i)
        if (model.charts[i].id == chart) return i;
    throw input_error("unknown chart '" + chart + "'");
}

std::vector<int> ray_indices_of(const ConeComplex& complex, const Cone& face) {
    std::vector<int> out;
    const Mat& rays = complex.rays();
    for (const Vec& r : face.rays()) {
        auto it = std::find(rays.begin(), rays.end(), r);
        if (it == rays.end()) throw error("ray not found in complex (internal)");
        out.push_back(static_cast<int>(it - rays.begin()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// raw model from subdivided complexes plus regenerated gluings; decorations
// are filled in by the caller
DecoratedModel reassemble(const DecoratedModel& old_model,
                          const std::vector<ConeComplex>& new_complexes,
                          const std::map<int, Mat>& applied_centers) {
    DecoratedModel out;
    out.residue_char = old_model.residue_char;
    out.log_smooth_claimed = old_model.log_smooth_claimed;
    for (size_t i = 0; i < old_model.charts.size(); ++i) {
        RawChart c;
        c.id = old_model.charts[i].id;
        c.rank = old_model.charts[i].rank;
        c.e = old_model.charts[i].e;
        for (const Cone& m : new_complexes[i].maximal_cones()) c.maximal_cones.push_back(m.rays());
        out.charts.push_back(std::move(c));
    }

    // each old gluing record expands to one record per top-dimensional piece
    // of the subdivided glued face
    ModelStructure old_structure = build_structure_impl(old_model, nullptr, true, false);
    std::map<std::string, int> chart_index;
    for (int i = 0; i < static_cast<int>(old_model.charts.size()); ++i)
        chart_index[old_model.charts[i].id] = i;

    for (const RawGluing& g : old_model.gluings) {
        int ia = chart_index.at(g.a.chart);
        int ib = chart_index.at(g.b.chart);
        ValidationReport scratch;
        Collector col{&scratch};
        auto fa = resolve_face(g.a, old_structure.complexes[ia], col);
        auto fb = resolve_face(g.b, old_structure.complexes[ib], col);
        if (!fa || !fb) throw error("reassemble: stale gluing (internal)");

        ConeComplex mini = ConeComplex::from_maximal({*fa}, old_model.charts[ia].rank);
        auto centers = applied_centers.find(ia);
        if (centers != applied_centers.end()) {
            for (const Vec& v : centers->second)
                if (fa->contains(v)) mini = stellar_subdivide(mini, v);
        }
        for (const Cone& piece : mini.maximal_cones()) {
            Mat img_rays;
            for (const Vec& r : piece.rays()) img_rays.push_back(mat_times_col(g.map, r));
            Cone img = Cone::from_rays(img_rays, old_model.charts[ib].rank);
            RawGluing ng;
            ng.a = RawFaceRef{g.a.chart, ray_indices_of(new_complexes[ia], piece)};
            ng.b = RawFaceRef{g.b.chart, ray_indices_of(new_complexes[ib], img)};
            ng.map = g.map;
            out.gluings.push_back(std::move(ng));
        }
    }

    // decoration transport: carriers in the old complexes decide chi
    ModelStructure fresh = build_structure_impl(out, nullptr, false, false);
    std::map<NodeKey, const FaceClass*> old_class_of;
    {
        // rebuild the old class lookup from the old structure
        for (const FaceClass& cls : old_structure.classes)
            for (const ClassMember& m : cls.members)
                old_class_of[NodeKey{m.chart, m.face.key()}] = &cls;
    }
    for (const FaceClass& cls : fresh.classes) {
        int chart = cls.root_chart;
        const Cone& face = cls.root_face;
        const Cone& carrier = carrier_cone(old_structure.complexes[chart], face);
        const FaceClass* old_cls = old_class_of.at(NodeKey{chart, carrier.key()});
        Int chi = (face.dim() == carrier.dim()) ? old_cls->chi.value_or(0) : Int(0);
        RawFaceRef ref{out.charts[chart].id, ray_indices_of(fresh.complexes[chart], face)};
        out.chi.push_back(RawDecoration{ref, chi});
        if (old_structure.complexes[chart].has_face(face) && old_cls->cokernel_torsion)
            out.cokernel_torsion.push_back(RawDecoration{ref, *old_cls->cokernel_torsion});
    }
    return out;
}

}  // namespace

DecoratedModel model_stellar_subdivide(const DecoratedModel& model, const std::string& chart,
                                       const Vec& v, const std::vector<int>* expected_face) {
    ModelStructure s = build_structure_impl(model, nullptr, true, false);
    int ci = chart_index_of(model, chart);
    const ConeComplex& k = s.complexes[ci];
    if (static_cast<int>(v.size()) != model.charts[ci].rank)
        throw input_error("subdivision center has wrong length for chart '" + chart + "'");
    Vec center = primitive(v);
    if (is_zero(center)) throw precondition_error("subdivision center must be nonzero");
    if (!k.supports(center))
        throw precondition_error("subdivision center lies outside the chart's support");
    const Cone& carrier = k.carrier(center);
    if (expected_face) {
        ValidationReport scratch;
        Collector col{&scratch};
        auto want = resolve_face(RawFaceRef{chart, *expected_face}, k, col);
        if (!want || !(carrier == *want))
            throw precondition_error(
                "subdivision center is not interior to the requested face (carrier is " +
                carrier.key() + ")");
    }

    // locate the carrier's class and transport the center to every member
    const FaceClass* cls = nullptr;
    for (const FaceClass& c : s.classes)
        for (const ClassMember& m : c.members)
            if (m.chart == ci && m.face == carrier) cls = &c;
    if (!cls) throw error("carrier class not found (internal)");

    Mat root_centers;
    for (const ClassMember& m : cls->members)
        if (m.chart == ci && m.face == carrier)
            root_centers.push_back(m.from_root.inverse().apply(center));

    std::map<int, Mat> chart_centers;
    for (const ClassMember& m : cls->members) {
        for (const Vec& rc : root_centers) {
            Vec img = m.from_root.apply(rc);
            Mat& list = chart_centers[m.chart];
            if (std::find(list.begin(), list.end(), img) == list.end()) list.push_back(img);
        }
    }
    for (auto& [idx, list] : chart_centers) std::sort(list.begin(), list.end(), graded_lex_less);

    std::vector<ConeComplex> new_complexes = s.complexes;
    for (const auto& [idx, list] : chart_centers)
        for (const Vec& c : list) new_complexes[idx] = stellar_subdivide(new_complexes[idx], c);

    return reassemble(model, new_complexes, chart_centers);
}

ModelResolution model_resolve(const DecoratedModel& model) {
    ModelResolution res{model, {}};
    int steps = 0;
    while (true) {
        if (++steps > config().resolution_step_cap)
            throw resource_error("model_resolve: step cap exceeded");
        ModelStructure s = build_structure_impl(res.model, nullptr, true, false);

        // pulling pass: subdivide at an existing ray of a non-simplicial cone
        bool acted = false;
        for (size_t i = 0; i < s.complexes.size() && !acted; ++i) {
            if (s.complexes[i].all_simplicial()) continue;
            for (const Vec& r : s.complexes[i].rays()) {
                bool hits = false;
                for (const Cone& c : s.complexes[i].maximal_cones())
                    if (!c.is_simplicial() && c.contains(r)) {
                        hits = true;
                        break;
                    }
                if (!hits) continue;
                DecoratedModel next =
                    model_stellar_subdivide(res.model, res.model.charts[i].id, r);
                res.trail.push_back({res.model.charts[i].id, r});
                res.model = std::move(next);
                acted = true;
                break;
            }
        }
        if (acted) continue;

        // multiplicity pass: smallest parallelepiped point across all cones
        bool have = false;
        Vec best;
        int best_chart = 0;
        for (size_t i = 0; i < s.complexes.size(); ++i) {
            for (const Cone& c : s.complexes[i].maximal_cones()) {
                if (multiplicity(c) == 1) continue;
                for (const Vec& w : parallelepiped_points(c)) {
                    if (!have || graded_lex_less(w, best)) {
                        best = w;
                        best_chart = static_cast<int>(i);
                        have = true;
                    }
                }
            }
        }
        if (!have) break;
        Vec center = primitive(best);
        DecoratedModel next =
            model_stellar_subdivide(res.model, res.model.charts[best_chart].id, center);
        res.trail.push_back({res.model.charts[best_chart].id, center});
        res.model = std::move(next);
    }
    return res;
}

SncResult is_snc(const DecoratedModel& model) {
    ModelStructure s = build_structure(model, nullptr);
    SncResult out;
    out.snc = true;
    for (const FanPoint& p : s.points)
        if (!is_free(p.stalk)) out.snc = false;
    if (out.snc) {
        for (const FanPoint& p : s.points)
            if (p.height == 1) out.cycle.push_back({p.id, p.s});
    }
    return out;
}

ConsistencyReport log_smooth_consistency(const DecoratedModel& model) {
    if (!model.log_smooth_claimed)
        throw precondition_error("log_smooth_consistency: model does not claim log smoothness");
    ConsistencyReport rep;
    const Int& p = model.residue_char;
    if (p == 0) return rep;  // no wild part; nothing to check
    ModelStructure s = build_structure(model, nullptr);
    for (const FanPoint& pt : s.points) {
        if (pt.cokernel_torsion && gcd(*pt.cokernel_torsion, p) != 1)
            rep.violations.push_back("point " + pt.id + ": asserted chart cokernel torsion " +
                                     pt.cokernel_torsion->str() +
                                     " is not prime to the residue characteristic " + p.str());
        if (pt.height == 1 && pt.s % p == 0 && pt.chi != 0)
            rep.violations.push_back(
                "point " + pt.id + ": multiplicity s = " + pt.s.str() +
                " is divisible by the residue characteristic p = " + p.str() +
                " but chi = " + pt.chi.str() +
                "; log smoothness forces the vanishing chi(U(x)) = 0 whenever p divides s(x)");
    }
    return rep;
}

}  // namespace logtrace
