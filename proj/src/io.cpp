#include "suborbit/io.hpp"

#include <cmath>

namespace suborbit::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::Parse, "malformed document: " + what); }

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) malformed(std::string("missing field '") + name + "'");
    return j.at(name);
}

double number(const Json& j) {
    if (!j.is_number()) malformed("expected a number");
    return j.get<double>();
}

Json finite(double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "cannot serialize a non-finite number");
    return x;
}

}  // namespace

Json document(const std::string& kind) {
    Json j;
    j["kind"] = kind;
    j["version"] = kVersion;
    return j;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
    }
}

void expect_kind(const Json& doc, const std::string& kind) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) malformed("missing 'kind'");
    if (doc["kind"].get<std::string>() != kind) {
        malformed("expected kind '" + kind + "', got '" + doc["kind"].get<std::string>() + "'");
    }
    if (doc.contains("version")) {
        if (!doc["version"].is_string()) malformed("'version' must be a string");
        const std::string v = doc["version"].get<std::string>();
        const std::string ours = kVersion;
        if (v.substr(0, v.find('.')) != ours.substr(0, ours.find('.'))) malformed("unsupported version " + v);
    }
}

Json to_json(const Vec& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(finite(v(i)));
    return j;
}

Json to_json(const Mat& m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(to_json(Vec(m.row(r).transpose())));
    return j;
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) malformed("expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i]);
    return v;
}

Mat mat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) malformed("expected a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Vec row = vec_from_json(j[r]);
        if (static_cast<std::size_t>(row.size()) != cols) malformed("ragged matrix");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

Json config_document(const PointConfiguration& c) {
    Json j = document("config");
    Json pts = Json::array();
    for (const auto& p : c.points()) pts.push_back(to_json(p));
    j["points"] = std::move(pts);
    j["labels"] = c.labels();
    return j;
}

PointConfiguration config_from_json(const Json& j, bool on_unit_sphere) {
    expect_kind(j, "config");
    const Json& pts = field(j, "points");
    if (!pts.is_array()) malformed("'points' must be an array");
    std::vector<Vec> points;
    for (const auto& p : pts) points.push_back(vec_from_json(p));
    if (!j.contains("labels")) return PointConfiguration::with_index_labels(std::move(points), on_unit_sphere);
    const Json& labels = j["labels"];
    if (!labels.is_array()) malformed("'labels' must be an array");
    std::vector<std::string> names;
    for (const auto& l : labels) {
        if (!l.is_string()) malformed("labels must be strings");
        names.push_back(l.get<std::string>());
    }
    return PointConfiguration(std::move(points), std::move(names), on_unit_sphere);
}

Json witness_document(const GroupWitness& w) {
    Json j = document("witness");
    j["p"] = w.p;
    Json gens = Json::array();
    for (const auto& g : w.generators) gens.push_back(to_json(g));
    j["generators"] = std::move(gens);
    j["center"] = to_json(w.center);
    j["base"] = to_json(w.base);
    j["words"] = w.words;
    Json claimed = config_document(w.claimed);
    claimed.erase("kind");
    claimed.erase("version");
    j["claimed"] = std::move(claimed);
    return j;
}

GroupWitness witness_from_json(const Json& j) {
    expect_kind(j, "witness");
    const Json& p = field(j, "p");
    if (!p.is_number_integer()) malformed("'p' must be an integer");
    std::vector<Mat> gens;
    const Json& g = field(j, "generators");
    if (!g.is_array()) malformed("'generators' must be an array");
    for (const auto& m : g) gens.push_back(mat_from_json(m));
    std::vector<Word> words;
    const Json& ws = field(j, "words");
    if (!ws.is_array()) malformed("'words' must be an array");
    for (const auto& w : ws) {
        if (!w.is_array()) malformed("each word must be an array");
        Word word;
        for (const auto& e : w) {
            if (!e.is_number_integer()) malformed("word entries must be integers");
            word.push_back(e.get<long long>());
        }
        words.push_back(std::move(word));
    }
    Json claimed = field(j, "claimed");
    claimed["kind"] = "config";
    return GroupWitness{.p = p.get<int>(),
                        .generators = std::move(gens),
                        .center = vec_from_json(field(j, "center")),
                        .base = vec_from_json(field(j, "base")),
                        .words = std::move(words),
                        .claimed = config_from_json(claimed)};
}

Json to_json(const VerificationReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["max_point_error"] = finite(r.max_point_error);
    j["max_distance_error"] = finite(r.max_distance_error);
    j["group_axiom_error"] = finite(r.group_axiom_error);
    return j;
}

Json certificate_document(const sphere::DecompositionCertificate& c, const sphere::TriangleSides& target) {
    Json j = document("certificate");
    j["verdict"] = "feasible";
    j["p"] = c.p;
    j["sides"] = {finite(target.x), finite(target.y), finite(target.z)};
    Json atoms = Json::array();
    for (const auto& a : c.atoms) {
        Json aj;
        aj["indices"] = a.indices;
        aj["weight"] = finite(a.weight);
        atoms.push_back(std::move(aj));
    }
    j["atoms"] = std::move(atoms);
    j["origin_weight"] = finite(c.origin_weight);
    const sphere::TriangleSides got = c.sides();
    j["reconstruction_error"] = finite(
        std::max({std::abs(got.x - target.x), std::abs(got.y - target.y), std::abs(got.z - target.z)}));
    return j;
}

sphere::DecompositionCertificate certificate_from_json(const Json& j) {
    expect_kind(j, "certificate");
    if (j.contains("verdict") && j["verdict"] != "feasible") malformed("certificate is not feasible");
    sphere::DecompositionCertificate c;
    const Json& p = field(j, "p");
    if (!p.is_number_integer()) malformed("'p' must be an integer");
    c.p = p.get<int>();
    const Json& atoms = field(j, "atoms");
    if (!atoms.is_array()) malformed("'atoms' must be an array");
    for (const auto& a : atoms) {
        const Json& idx = field(a, "indices");
        if (!idx.is_array() || idx.size() != 3) malformed("atom indices must be a triple");
        sphere::WeightedAtom w;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!idx[i].is_number_integer()) malformed("atom indices must be integers");
            w.indices[i] = idx[i].get<long long>();
        }
        w.weight = number(field(a, "weight"));
        c.atoms.push_back(w);
    }
    c.origin_weight = number(field(j, "origin_weight"));
    c.validate();
    return c;
}

Json error_document(ErrorKind kind, const std::string& message) {
    Json j = document("error");
    j["error"]["type"] = to_string(kind);
    j["error"]["message"] = message;
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace suborbit::io
