#include "logtrace/fan.hpp"

#include <json.hpp>

#include <fstream>

namespace logtrace {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw input_error(where + ": unknown key '" + it.key() + "'");
    }
}

Int to_int(const json& j, const std::string& where) {
    if (!j.is_number_integer())
        throw input_error(where + ": expected an integer");
    return Int(j.get<long long>());
}

Vec to_vec(const json& j, const std::string& where) {
    if (!j.is_array()) throw input_error(where + ": expected an array of integers");
    Vec out;
    for (const auto& x : j) out.push_back(to_int(x, where));
    return out;
}

Mat to_mat(const json& j, const std::string& where) {
    if (!j.is_array()) throw input_error(where + ": expected an array of integer arrays");
    Mat out;
    for (const auto& row : j) out.push_back(to_vec(row, where));
    return out;
}

RawFaceRef to_face_ref(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string())
        throw input_error(where + ": point must be [chart, [ray indices]]");
    RawFaceRef ref;
    ref.chart = j[0].get<std::string>();
    if (!j[1].is_array()) throw input_error(where + ": face must be a ray-index list");
    for (const auto& x : j[1]) {
        if (!x.is_number_integer()) throw input_error(where + ": ray index must be an integer");
        ref.ray_indices.push_back(x.get<int>());
    }
    if (!std::is_sorted(ref.ray_indices.begin(), ref.ray_indices.end()))
        throw input_error(where + ": ray indices must be sorted");
    return ref;
}

long long to_i64(const Int& v, const std::string& where) {
    if (v > Int(std::numeric_limits<long long>::max()) ||
        v < Int(std::numeric_limits<long long>::min()))
        throw input_error(where + ": value does not fit the file format");
    return v.convert_to<long long>();
}

json from_vec(const Vec& v, const std::string& where) {
    json out = json::array();
    for (const Int& x : v) out.push_back(to_i64(x, where));
    return out;
}

json from_mat(const Mat& m, const std::string& where) {
    json out = json::array();
    for (const Vec& r : m) out.push_back(from_vec(r, where));
    return out;
}

}  // namespace

DecoratedModel parse_model(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw input_error(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw input_error("model file: top level must be an object");
    reject_unknown_keys(root,
                        {"residue_char", "log_smooth_claimed", "charts", "gluings", "chi",
                         "chart_cokernel_torsion"},
                        "model file");
    if (!root.contains("residue_char") || !root.contains("charts") || !root.contains("chi"))
        throw input_error("model file: required keys residue_char, charts, chi");

    DecoratedModel m;
    m.residue_char = to_int(root["residue_char"], "residue_char");
    if (root.contains("log_smooth_claimed")) {
        if (!root["log_smooth_claimed"].is_boolean())
            throw input_error("log_smooth_claimed: expected a boolean");
        m.log_smooth_claimed = root["log_smooth_claimed"].get<bool>();
    }

    if (!root["charts"].is_array()) throw input_error("charts: expected an array");
    for (const auto& jc : root["charts"]) {
        if (!jc.is_object()) throw input_error("charts: entries must be objects");
        reject_unknown_keys(jc, {"id", "rank", "maximal_cones", "e"}, "chart");
        if (!jc.contains("id") || !jc.contains("rank") || !jc.contains("maximal_cones") ||
            !jc.contains("e"))
            throw input_error("chart: required keys id, rank, maximal_cones, e");
        RawChart c;
        if (!jc["id"].is_string()) throw input_error("chart id must be a string");
        c.id = jc["id"].get<std::string>();
        c.rank = static_cast<int>(to_int(jc["rank"], "chart rank").convert_to<long long>());
        if (!jc["maximal_cones"].is_array())
            throw input_error("chart '" + c.id + "': maximal_cones must be an array");
        for (const auto& cone : jc["maximal_cones"])
            c.maximal_cones.push_back(to_mat(cone, "chart '" + c.id + "' cone"));
        c.e = to_vec(jc["e"], "chart '" + c.id + "' e");
        m.charts.push_back(std::move(c));
    }

    if (root.contains("gluings")) {
        if (!root["gluings"].is_array()) throw input_error("gluings: expected an array");
        for (const auto& jg : root["gluings"]) {
            reject_unknown_keys(jg, {"chart_a", "face_a", "chart_b", "face_b", "map"}, "gluing");
            for (const char* k : {"chart_a", "face_a", "chart_b", "face_b", "map"})
                if (!jg.contains(k))
                    throw input_error(std::string("gluing: missing key '") + k + "'");
            RawGluing g;
            g.a = to_face_ref(json::array({jg["chart_a"], jg["face_a"]}), "gluing face_a");
            g.b = to_face_ref(json::array({jg["chart_b"], jg["face_b"]}), "gluing face_b");
            g.map = to_mat(jg["map"], "gluing map");
            m.gluings.push_back(std::move(g));
        }
    }

    if (!root["chi"].is_array()) throw input_error("chi: expected an array");
    for (const auto& jd : root["chi"]) {
        reject_unknown_keys(jd, {"point", "value"}, "chi entry");
        if (!jd.contains("point") || !jd.contains("value"))
            throw input_error("chi entry: required keys point, value");
        m.chi.push_back(
            RawDecoration{to_face_ref(jd["point"], "chi entry"), to_int(jd["value"], "chi value")});
    }

    if (root.contains("chart_cokernel_torsion")) {
        if (!root["chart_cokernel_torsion"].is_array())
            throw input_error("chart_cokernel_torsion: expected an array");
        for (const auto& jd : root["chart_cokernel_torsion"]) {
            reject_unknown_keys(jd, {"point", "value"}, "chart_cokernel_torsion entry");
            if (!jd.contains("point") || !jd.contains("value"))
                throw input_error("chart_cokernel_torsion entry: required keys point, value");
            m.cokernel_torsion.push_back(
                RawDecoration{to_face_ref(jd["point"], "chart_cokernel_torsion entry"),
                              to_int(jd["value"], "chart_cokernel_torsion value")});
        }
    }
    return m;
}

std::string model_to_json(const DecoratedModel& model) {
    json root;
    root["residue_char"] = to_i64(model.residue_char, "residue_char");
    root["log_smooth_claimed"] = model.log_smooth_claimed;
    root["charts"] = json::array();
    for (const RawChart& c : model.charts) {
        json jc;
        jc["id"] = c.id;
        jc["rank"] = c.rank;
        jc["maximal_cones"] = json::array();
        for (const Mat& cone : c.maximal_cones)
            jc["maximal_cones"].push_back(from_mat(cone, "cone"));
        jc["e"] = from_vec(c.e, "e");
        root["charts"].push_back(std::move(jc));
    }
    root["gluings"] = json::array();
    for (const RawGluing& g : model.gluings) {
        json jg;
        jg["chart_a"] = g.a.chart;
        jg["face_a"] = g.a.ray_indices;
        jg["chart_b"] = g.b.chart;
        jg["face_b"] = g.b.ray_indices;
        jg["map"] = from_mat(g.map, "gluing map");
        root["gluings"].push_back(std::move(jg));
    }
    root["chi"] = json::array();
    for (const RawDecoration& d : model.chi) {
        json jd;
        jd["point"] = json::array({d.point.chart, d.point.ray_indices});
        jd["value"] = to_i64(d.value, "chi value");
        root["chi"].push_back(std::move(jd));
    }
    if (!model.cokernel_torsion.empty()) {
        root["chart_cokernel_torsion"] = json::array();
        for (const RawDecoration& d : model.cokernel_torsion) {
            json jd;
            jd["point"] = json::array({d.point.chart, d.point.ray_indices});
            jd["value"] = to_i64(d.value, "chart_cokernel_torsion value");
            root["chart_cokernel_torsion"].push_back(std::move(jd));
        }
    }
    return root.dump(2) + "\n";
}

DecoratedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open model file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_model(text);
}

void save_model(const DecoratedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write model file '" + path + "'");
    out << model_to_json(model);
}

}  // namespace logtrace
