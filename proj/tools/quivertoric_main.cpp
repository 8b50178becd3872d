/**
 * quivertoric: command-line front end for the toric quiver variety library.
 *
 * One subcommand per invocation reads a quiver text file and prints a
 * report, human-readable by default or JSON with --json.  Output on stdout
 * is deterministic: the same input file always produces the same bytes.
 * Diagnostics go to stderr.
 *
 * Exit codes: 0 success, 1 usage error, 2 invalid quiver file,
 * 3 operation precondition failure.
 *
 * QUIVERTORIC_THREADS caps the worker threads of the polytope scans
 * (0 or absent = one per core).
 */

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quivertoric/json_io.hpp"
#include "quivertoric/quivertoric.hpp"

namespace {

using quivertoric::ArrowIndex;
using quivertoric::Int;
using quivertoric::Quiver;
using quivertoric::json;

/** Worker-thread cap from the environment; 0 means auto. */
unsigned threads_from_env() {
    const char* raw = std::getenv("QUIVERTORIC_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(raw, &pos);
        if (pos == std::string(raw).size() && v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid QUIVERTORIC_THREADS value '" << raw << "'\n";
    return 0;
}

/** Load and fully validate a quiver file; throws the library's errors. */
Quiver load_quiver(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    Quiver q = quivertoric::parse(text.str());
    quivertoric::require_valid(q);
    return q;
}

std::string format_tuple(const std::vector<Int>& v) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << v[i];
    }
    out << ")";
    return out.str();
}

void emit(const json& doc) { std::cout << doc.dump() << "\n"; }

void cmd_info(const Quiver& q, bool as_json) {
    const auto theta = quivertoric::canonical_weight(q);
    const Int k = quivertoric::cycle_space_dimension(q);
    if (as_json) {
        json j = quivertoric::to_json(q);
        j["arrow_count"] = q.arrow_count();
        j["cycle_rank"] = quivertoric::to_json(k);
        j["weight"] = quivertoric::to_json(theta);
        emit(j);
        return;
    }
    std::cout << "vertices:";
    for (const auto& v : q.vertices()) std::cout << " " << v;
    std::cout << "\nbundles:\n";
    for (std::size_t b = 0; b < q.bundle_count(); ++b) {
        const auto& e = q.bundles()[b];
        std::cout << "  [" << b << "] " << q.vertices()[e.src] << " -> " << q.vertices()[e.dst]
                  << "  x" << e.mult << "\n";
    }
    std::cout << "arrow count: " << q.arrow_count() << "\n";
    std::cout << "cycle rank: " << k << "\n";
    std::cout << "canonical weight: " << format_tuple(theta) << "\n";
}

void cmd_weight(const Quiver& q, bool as_json) {
    const auto theta = quivertoric::canonical_weight(q);
    if (as_json)
        emit(quivertoric::to_json(theta));
    else
        std::cout << format_tuple(theta) << "\n";
}

void cmd_rays(const Quiver& q, bool as_json) {
    const auto gale = quivertoric::gale_matrix(q);
    if (as_json) {
        json arr = json::array();
        for (std::size_t a = 0; a < q.arrow_count(); ++a)
            arr.push_back(quivertoric::to_json(quivertoric::ray(gale, a)));
        emit(arr);
        return;
    }
    for (std::size_t a = 0; a < q.arrow_count(); ++a)
        std::cout << q.arrow_label(q.arrow_at(a)) << ": "
                  << format_tuple(quivertoric::ray(gale, a)) << "\n";
}

void cmd_monomials(const Quiver& q, bool as_json, std::int64_t degree, bool aggregate) {
    const auto flows = quivertoric::invariant_monomials(q, Int(degree));
    if (aggregate) {
        const auto agg = quivertoric::aggregate_by_bundle(q, flows);
        if (as_json) {
            json arr = json::array();
            for (const auto& a : agg)
                arr.push_back({{"exponents", quivertoric::to_json(a.exponents)},
                               {"count", a.count}});
            emit(arr);
            return;
        }
        for (const auto& a : agg)
            std::cout << format_tuple(a.exponents) << " x" << a.count << "\n";
        return;
    }
    if (as_json) {
        json arr = json::array();
        for (const auto& f : flows) arr.push_back(quivertoric::to_json(f));
        emit(arr);
        return;
    }
    for (const auto& f : flows) std::cout << format_tuple(f) << "\n";
}

void cmd_vertices(const Quiver& q, bool as_json, unsigned threads) {
    const auto verts = quivertoric::polytope_vertices(q, threads);
    if (as_json) {
        json arr = json::array();
        for (const auto& v : verts) arr.push_back(quivertoric::to_json(v.coords));
        emit(arr);
        return;
    }
    for (const auto& v : verts) std::cout << format_tuple(v.coords) << "\n";
}

void cmd_smooth(const Quiver& q, bool as_json, unsigned threads) {
    const auto report = quivertoric::is_smooth(q, threads);
    if (as_json) {
        emit(quivertoric::to_json(report));
        return;
    }
    std::cout << (report.smooth ? "smooth" : "singular") << "\n";
    if (report.witness) {
        const auto& w = *report.witness;
        std::cout << "witness vertex [" << w.vertex_index << "]: " << format_tuple(w.vertex)
                  << "\n";
        std::cout << "reason: " << w.reason << "\n";
        if (w.edge_matrix.rows() > 0) {
            std::cout << "edge directions (kernel-lattice coordinates):\n";
            for (std::size_t r = 0; r < w.edge_matrix.rows(); ++r)
                std::cout << "  " << format_tuple(w.edge_matrix.row(r)) << "\n";
        }
    }
}

void cmd_classify(const Quiver& q, bool as_json, unsigned threads) {
    const auto report = quivertoric::classify(q, threads);
    if (as_json) {
        emit(quivertoric::to_json(report));
        return;
    }
    std::cout << "structural verdict: " << quivertoric::to_string(report.verdict) << "\n";
    std::cout << "oracle verdict: " << quivertoric::to_string(report.oracle_verdict) << "\n";
    std::cout << "consistent: " << (report.consistent ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < report.factors.size(); ++i) {
        const auto& f = report.factors[i];
        std::cout << "factor [" << i << "]: ";
        if (f.core_has_proper_cycle) {
            std::cout << "simple core keeps a proper cycle";
        } else if (f.projective_dimensions.empty()) {
            std::cout << "a point";
        } else {
            std::cout << "product of projective spaces ";
            for (std::size_t d = 0; d < f.projective_dimensions.size(); ++d) {
                if (d) std::cout << " x ";
                std::cout << "P^" << f.projective_dimensions[d];
            }
        }
        std::cout << "; blowdowns: " << f.blowdown_count << "\n";
    }
}

void cmd_simplify(const Quiver& q, bool as_json) {
    const auto result = quivertoric::simplify(q);
    if (as_json) {
        emit({{"core", quivertoric::to_json(result.quiver)},
              {"log", quivertoric::to_json(result.log)}});
        return;
    }
    if (result.log.empty()) {
        std::cout << "steps: none\n";
    } else {
        std::cout << "steps:\n";
        for (const auto& step : result.log)
            std::cout << "  contract " << step.arrow << " ("
                      << (step.kind == quivertoric::ContractionKind::blowdown ? "blowdown"
                                                                              : "neutral")
                      << ")\n";
    }
    std::cout << "core:\n" << quivertoric::serialize(result.quiver);
}

void cmd_decompose(const Quiver& q, bool as_json) {
    const auto factors = quivertoric::decompose(q);
    if (as_json) {
        json arr = json::array();
        for (const auto& f : factors)
            arr.push_back({{"quiver", quivertoric::to_json(f.quiver)},
                           {"weights", quivertoric::to_json(f.weights)}});
        emit(arr);
        return;
    }
    std::cout << "factors: " << factors.size() << "\n";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::cout << "factor [" << i << "]:\n" << quivertoric::serialize(factors[i].quiver);
        std::cout << "weights: " << format_tuple(factors[i].weights) << "\n";
    }
}

/** Parse "<bundle>[:<copy>]"; returns nullopt on malformed syntax. */
std::optional<ArrowIndex> parse_arrow_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string bundle_part = spec.substr(0, colon);
    const std::string copy_part =
        colon == std::string::npos ? std::string("0") : spec.substr(colon + 1);
    try {
        std::size_t pos = 0;
        const long long b = std::stoll(bundle_part, &pos);
        if (pos != bundle_part.size() || b < 0) return std::nullopt;
        pos = 0;
        const long long c = std::stoll(copy_part, &pos);
        if (pos != copy_part.size() || c < 0) return std::nullopt;
        return ArrowIndex{static_cast<std::size_t>(b), c};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void cmd_contract(const Quiver& q, bool as_json, const ArrowIndex& x) {
    if (x.bundle >= q.bundle_count() || x.copy >= q.bundles()[x.bundle].mult)
        throw quivertoric::PreconditionError("no such arrow: bundle " + std::to_string(x.bundle) +
                                             ", copy " + std::to_string(x.copy));
    const std::string contracted_label = q.arrow_label(x);
    const auto result = quivertoric::contract(q, x);
    if (as_json) {
        json vmap = json::array();
        for (std::size_t v : result.vertex_map) vmap.push_back(v);
        json amap = json::array();
        for (std::size_t a : result.arrow_map) {
            if (a == quivertoric::ContractionResult::npos)
                amap.push_back(nullptr);
            else
                amap.push_back(a);
        }
        emit({{"quiver", quivertoric::to_json(result.quiver)},
              {"vertex_map", vmap},
              {"arrow_map", amap}});
        return;
    }
    std::cout << "contracted arrow: " << contracted_label << "\n";
    std::cout << "quiver after contraction:\n" << quivertoric::serialize(result.quiver);
    std::cout << "vertex map:\n";
    for (std::size_t v = 0; v < result.vertex_map.size(); ++v)
        std::cout << "  " << q.vertices()[v] << " -> "
                  << result.quiver.vertices()[result.vertex_map[v]] << "\n";
    std::cout << "arrow map:\n";
    for (std::size_t a = 0; a < result.arrow_map.size(); ++a) {
        std::cout << "  " << q.arrow_label(q.arrow_at(a)) << " -> ";
        if (result.arrow_map[a] == quivertoric::ContractionResult::npos)
            std::cout << "removed\n";
        else
            std::cout << result.quiver.arrow_label(result.quiver.arrow_at(result.arrow_map[a]))
                      << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorics of toric quiver varieties: weights, fan rays, invariant "
                 "monomials, flow polytopes, contractions, and smoothness classification."};
    app.require_subcommand(1);

    std::string path;
    bool as_json = false;
    std::int64_t degree = 1;
    bool aggregate = false;
    std::string arrow_spec;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", path, "quiver text file")->required();
        sub->add_flag("--json", as_json, "emit JSON instead of plain text");
    };

    CLI::App* info = app.add_subcommand("info", "summarize a quiver");
    CLI::App* weight = app.add_subcommand("weight", "canonical weight vector");
    CLI::App* rays = app.add_subcommand("rays", "fan rays, one per arrow");
    CLI::App* monomials = app.add_subcommand("monomials", "invariant monomial exponent vectors");
    CLI::App* vertices = app.add_subcommand("vertices", "flow polytope vertices");
    CLI::App* smooth = app.add_subcommand("smooth", "polytope smoothness oracle");
    CLI::App* classify = app.add_subcommand("classify", "structural + oracle classification");
    CLI::App* simplify = app.add_subcommand("simplify", "contract to the simple core");
    CLI::App* decompose = app.add_subcommand("decompose", "split at cut vertices");
    CLI::App* contract = app.add_subcommand("contract", "contract one arrow");

    for (CLI::App* sub :
         {info, weight, rays, monomials, vertices, smooth, classify, simplify, decompose, contract})
        add_common(sub);
    monomials->add_option("--degree", degree, "monomial degree (default 1)");
    monomials->add_flag("--aggregate", aggregate, "aggregate exponents by bundle");
    contract->add_option("--arrow", arrow_spec, "arrow to contract: <bundle>[:<copy>]")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const unsigned threads = threads_from_env();

    try {
        const Quiver q = load_quiver(path);
        if (*info) cmd_info(q, as_json);
        if (*weight) cmd_weight(q, as_json);
        if (*rays) cmd_rays(q, as_json);
        if (*monomials) cmd_monomials(q, as_json, degree, aggregate);
        if (*vertices) cmd_vertices(q, as_json, threads);
        if (*smooth) cmd_smooth(q, as_json, threads);
        if (*classify) cmd_classify(q, as_json, threads);
        if (*simplify) cmd_simplify(q, as_json);
        if (*decompose) cmd_decompose(q, as_json);
        if (*contract) {
            const auto x = parse_arrow_spec(arrow_spec);
            if (!x) {
                std::cerr << "error: --arrow expects <bundle>[:<copy>], got '" << arrow_spec
                          << "'\n";
                return 1;
            }
            cmd_contract(q, as_json, *x);
        }
    } catch (const quivertoric::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const quivertoric::InvalidQuiverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const quivertoric::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
