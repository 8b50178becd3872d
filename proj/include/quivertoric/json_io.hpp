/**
 * JSON views of the library's types, used by the command-line tool and by
 * round-trip tests.  Keys keep insertion order (ordered_json) so equal
 * inputs always serialize to byte-identical text.
 *
 * Integers are emitted as JSON numbers while they fit in 64 bits and as
 * decimal strings beyond that; parsers accept both forms.
 */

#ifndef QUIVERTORIC_JSON_IO_HPP
#define QUIVERTORIC_JSON_IO_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "classify.hpp"
#include "gale.hpp"
#include "int_matrix.hpp"
#include "polytope.hpp"
#include "quiver.hpp"
#include "structure.hpp"

namespace quivertoric {

using json = nlohmann::ordered_json;

inline json to_json(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return static_cast<std::int64_t>(v);
    return v.str();
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

inline json to_json(const std::vector<Int>& v) {
    json arr = json::array();
    for (const Int& x : v) arr.push_back(to_json(x));
    return arr;
}

inline std::vector<Int> int_vector_from_json(const json& j) {
    std::vector<Int> v;
    for (const auto& x : j) v.push_back(int_from_json(x));
    return v;
}

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(to_json(m.row(r)));
    return rows;
}

inline json to_json(const Quiver& q) {
    json bundles = json::array();
    for (const Bundle& b : q.bundles())
        bundles.push_back({{"src", b.src}, {"dst", b.dst}, {"mult", b.mult}});
    return {{"vertices", q.vertices()}, {"bundles", bundles}};
}

inline Quiver quiver_from_json(const json& j) {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<Bundle> bundles;
    for (const auto& b : j.at("bundles"))
        bundles.push_back({b.at("src").get<std::size_t>(), b.at("dst").get<std::size_t>(),
                           b.at("mult").get<std::int64_t>()});
    return Quiver(std::move(vertices), std::move(bundles));
}

inline json to_json(const ContractionLog& log) {
    json arr = json::array();
    for (const ContractionStep& step : log)
        arr.push_back({{"arrow", step.arrow},
                       {"kind", step.kind == ContractionKind::blowdown ? "blowdown" : "neutral"}});
    return arr;
}

inline ContractionLog contraction_log_from_json(const json& j) {
    ContractionLog log;
    for (const auto& e : j) {
        const std::string kind = e.at("kind").get<std::string>();
        if (kind != "blowdown" && kind != "neutral")
            throw std::invalid_argument("unknown contraction kind '" + kind + "'");
        log.push_back({e.at("arrow").get<std::string>(),
                       kind == "blowdown" ? ContractionKind::blowdown : ContractionKind::neutral});
    }
    return log;
}

inline json to_json(const PolytopeVertex& v) {
    return {{"coords", to_json(v.coords)}, {"support", v.support}};
}

inline json to_json(const SingularWitness& w) {
    return {{"vertex_index", w.vertex_index},
            {"vertex", to_json(w.vertex)},
            {"edge_matrix", to_json(w.edge_matrix)},
            {"reason", w.reason}};
}

inline SingularWitness singular_witness_from_json(const json& j) {
    SingularWitness w;
    w.vertex_index = j.at("vertex_index").get<std::size_t>();
    w.vertex = int_vector_from_json(j.at("vertex"));
    const json& rows = j.at("edge_matrix");
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    w.edge_matrix = IntMatrix(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            w.edge_matrix(r, c) = int_from_json(rows[r][c]);
    w.reason = j.at("reason").get<std::string>();
    return w;
}

inline json to_json(const SmoothnessReport& r) {
    json j = {{"verdict", r.smooth ? "smooth" : "singular"},
              {"vertex_determinants", to_json(r.vertex_determinants)}};
    j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    return j;
}

inline SmoothnessReport smoothness_report_from_json(const json& j) {
    SmoothnessReport r;
    r.smooth = j.at("verdict").get<std::string>() == "smooth";
    r.vertex_determinants = int_vector_from_json(j.at("vertex_determinants"));
    if (!j.at("witness").is_null()) r.witness = singular_witness_from_json(j.at("witness"));
    return r;
}

inline json to_json(const ClassificationReport& r) {
    json factors = json::array();
    for (const FactorClassification& f : r.factors)
        factors.push_back({{"projective_dimensions", to_json(f.projective_dimensions)},
                           {"blowdown_count", f.blowdown_count},
                           {"core_has_proper_cycle", f.core_has_proper_cycle}});
    json logs = json::array();
    for (const ContractionLog& log : r.contraction_log) logs.push_back(to_json(log));
    return {{"verdict", to_string(r.verdict)},
            {"factors", factors},
            {"contraction_log", logs},
            {"oracle_verdict", to_string(r.oracle_verdict)},
            {"consistent", r.consistent}};
}

inline ClassificationReport classification_report_from_json(const json& j) {
    ClassificationReport r;
    r.verdict = j.at("verdict").get<std::string>() == "smooth" ? Verdict::smooth : Verdict::singular;
    for (const auto& f : j.at("factors")) {
        FactorClassification fc;
        fc.projective_dimensions = int_vector_from_json(f.at("projective_dimensions"));
        fc.blowdown_count = f.at("blowdown_count").get<std::size_t>();
        fc.core_has_proper_cycle = f.at("core_has_proper_cycle").get<bool>();
        r.factors.push_back(std::move(fc));
    }
    for (const auto& log : j.at("contraction_log"))
        r.contraction_log.push_back(contraction_log_from_json(log));
    r.oracle_verdict =
        j.at("oracle_verdict").get<std::string>() == "smooth" ? Verdict::smooth : Verdict::singular;
    r.consistent = j.at("consistent").get<bool>();
    return r;
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_JSON_IO_HPP
