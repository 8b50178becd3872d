/**
 * Acceptance gate for the library and CLI.  Each criterion prints exactly
 * one PASS/FAIL line with its wall time and a short piece of evidence; the
 * process exits non-zero when any criterion fails.
 *
 * Failures are reported exactly as measured: when a criterion expects an
 * outcome the mathematics does not deliver, the line carries the
 * independently recomputed counter-evidence instead of a doctored result.
 */

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quivertoric/json_io.hpp"
#include "quivertoric/quivertoric.hpp"
#include "test_support.hpp"

namespace {

using quivertoric::Bundle;
using quivertoric::Int;
using quivertoric::IntMatrix;
using quivertoric::Quiver;
using quivertoric::Verdict;
using test_support::Rational;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::int64_t run_and_report(int number, const std::string& name, std::int64_t budget_ms,
                            const std::function<Outcome()>& body, int& failures) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("unexpected exception: ") + e.what()};
    }
    const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    if (budget_ms > 0 && elapsed_ms > budget_ms) {
        outcome.pass = false;
        outcome.detail += " [exceeded time budget of " + std::to_string(budget_ms) + " ms]";
    }
    std::cout << "criterion " << number << " (" << name << "): "
              << (outcome.pass ? "PASS" : "FAIL") << " (" << elapsed_ms << " ms) — "
              << outcome.detail << "\n";
    if (!outcome.pass) ++failures;
    return elapsed_ms;
}

std::string join_vectors(const std::vector<std::vector<Int>>& vs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out << (i ? " " : "") << "(";
        for (std::size_t j = 0; j < vs[i].size(); ++j) out << (j ? "," : "") << vs[i][j];
        out << ")";
    }
    return out.str();
}

/** Primitive integer direction from one lattice point toward another. */
std::vector<Int> primitive_step(const std::vector<Int>& from, const std::vector<Int>& to) {
    std::vector<Int> d(from.size());
    Int g = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = to[i] - from[i];
        g = quivertoric::gcd(g, d[i]);
    }
    if (g > 1)
        for (Int& v : d) v /= g;
    return d;
}

/**
 * Re-derive the Delzant data of a quiver's flow polytope with machinery
 * disjoint from the library's: face-count adjacency and rational-arithmetic
 * solves/determinants.  Returns (simple vertices, unimodular vertices).
 */
std::pair<std::size_t, std::size_t> recheck_delzant(const Quiver& q) {
    const auto vertices = quivertoric::polytope_vertices(q);
    const IntMatrix gale = quivertoric::gale_matrix(q);
    const std::size_t k = gale.rows();
    std::size_t simple = 0, unimodular = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        std::vector<std::vector<Int>> dirs;
        for (std::size_t j = 0; j < vertices.size(); ++j)
            if (j != i && test_support::adjacent_by_face_count(vertices, i, j))
                dirs.push_back(primitive_step(vertices[i].coords, vertices[j].coords));
        if (dirs.size() != k) continue;
        ++simple;
        IntMatrix rhs(k, q.arrow_count());
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < q.arrow_count(); ++c) rhs(r, c) = dirs[r][c];
        const auto solved = test_support::rational_solve_left(gale, rhs);
        if (!solved) continue;
        IntMatrix coords(k, k);
        bool integral = true;
        for (std::size_t r = 0; r < k && integral; ++r)
            for (std::size_t c = 0; c < k; ++c) {
                if (boost::multiprecision::denominator((*solved)[r][c]) != 1) {
                    integral = false;
                    break;
                }
                coords(r, c) = boost::multiprecision::numerator((*solved)[r][c]);
            }
        if (!integral) continue;
        const Rational det = test_support::rational_det(coords);
        if (det == 1 || det == -1) ++unimodular;
    }
    return {simple, unimodular};
}

Outcome criterion_monomials() {
    const Quiver q = test_support::quad_cycle_quiver();
    const auto aggregated =
        quivertoric::aggregate_by_bundle(q, quivertoric::invariant_monomials(q));
    std::vector<std::vector<Int>> got;
    for (const auto& af : aggregated) got.push_back(af.exponents);
    const std::vector<std::vector<Int>> expected{
        {1, 4, 0, 3}, {2, 3, 1, 2}, {3, 2, 2, 1}, {4, 1, 3, 0}};
    if (got != expected)
        return {false, "aggregated exponents " + join_vectors(got) + " differ from expected " +
                           join_vectors(expected)};
    return {true, "aggregated exponent vectors are exactly " + join_vectors(expected)};
}

Outcome criterion_singular_example() {
    const Quiver q = test_support::quad_cycle_quiver();
    const auto smoothness = quivertoric::is_smooth(q);
    const auto classification = quivertoric::classify(q);

    if (!smoothness.smooth && classification.oracle_verdict == Verdict::singular &&
        smoothness.witness) {
        // re-check the witness determinant independently before accepting
        const IntMatrix& e = smoothness.witness->edge_matrix;
        if (e.rows() == e.cols()) {
            const Rational det = test_support::rational_det(e);
            if (det != 1 && det != -1)
                return {true, "singular with witness determinant " + smoothness.witness->reason};
        }
        return {true, "singular: " + smoothness.witness->reason};
    }

    const auto [simple, unimodular] = recheck_delzant(q);
    const auto vertex_count = quivertoric::polytope_vertices(q).size();
    std::ostringstream detail;
    detail << "expected a singular verdict, but the flow polytope is Delzant: " << vertex_count
           << " vertices, " << simple << " simple and " << unimodular
           << " with edge determinant ±1 under an independent rational recheck; "
           << "structural verdict " << quivertoric::to_string(classification.verdict)
           << " vs oracle " << quivertoric::to_string(classification.oracle_verdict)
           << " (consistent=" << (classification.consistent ? "true" : "false")
           << "); no singularity witness exists";
    return {false, detail.str()};
}

Outcome criterion_projective_spaces() {
    for (std::int64_t n = 1; n <= 5; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const Quiver q = test_support::kronecker(n + 1);
        const IntMatrix g = quivertoric::gale_matrix(q);
        if (Int(g.rows()) != n) return {false, "wrong kernel rank for n=" + std::to_string(n)};

        std::vector<std::vector<Int>> rays;
        for (std::size_t a = 0; a < q.arrow_count(); ++a) rays.push_back(quivertoric::ray(g, a));
        std::vector<Int> sum(g.rows(), 0);
        for (const auto& r : rays)
            for (std::size_t i = 0; i < r.size(); ++i) sum[i] += r[i];
        for (const Int& s : sum)
            if (s != 0) return {false, "rays do not sum to zero for n=" + std::to_string(n)};

        for (std::size_t omit = 0; omit < rays.size(); ++omit) {
            IntMatrix basis(g.rows(), g.rows());
            std::size_t row = 0;
            for (std::size_t a = 0; a < rays.size(); ++a) {
                if (a == omit) continue;
                for (std::size_t i = 0; i < rays[a].size(); ++i) basis(row, i) = rays[a][i];
                ++row;
            }
            const Rational det = test_support::rational_det(basis);
            if (det != 1 && det != -1)
                return {false, "a ray subset fails to be a lattice basis for n=" +
                                   std::to_string(n)};
        }

        if (!quivertoric::is_smooth(q).smooth)
            return {false, "oracle says singular for n=" + std::to_string(n)};
        const auto report = quivertoric::classify(q);
        if (report.factors.size() != 1 ||
            report.factors[0].projective_dimensions != std::vector<Int>{Int(n)})
            return {false, "classification factor is not a projective " + std::to_string(n) +
                               "-space"};

        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        if (ms > 1000)
            return {false, "n=" + std::to_string(n) + " took " + std::to_string(ms) + " ms"};
    }
    return {true, "n = 1..5: kernel rank, zero-sum rays, lattice bases, smooth, factor matches"};
}

Outcome criterion_gale_identities() {
    std::size_t failures = 0, vertex_checks = 0;
    for (const Quiver& q : test_support::corpus()) {
        const IntMatrix g = quivertoric::gale_matrix(q);
        const IntMatrix m = quivertoric::incidence_matrix(q);
        if (!(g * m).is_zero()) ++failures;
        if (Int(g.rows()) != Int(q.arrow_count()) - Int(q.vertex_count()) + 1) ++failures;
        if (test_support::rational_rank(g) != g.rows()) ++failures;
        for (std::size_t v = 0; v < q.vertex_count(); ++v) {
            std::vector<Int> balance(g.rows(), 0);
            for (std::size_t a = 0; a < q.arrow_count(); ++a) {
                const Bundle& b = q.bundles()[q.arrow_at(a).bundle];
                const int side = (b.dst == v) ? 1 : (b.src == v) ? -1 : 0;
                if (side == 0) continue;
                const auto r = quivertoric::ray(g, a);
                for (std::size_t i = 0; i < r.size(); ++i) balance[i] += side * r[i];
            }
            ++vertex_checks;
            for (const Int& c : balance)
                if (c != 0) {
                    ++failures;
                    break;
                }
        }
    }
    if (failures) return {false, std::to_string(failures) + " identity failures"};
    return {true, "100 quivers: G·M = 0, full kernel rank, " + std::to_string(vertex_checks) +
                      " vertex-sum identities hold"};
}

Outcome criterion_sign_coherence() {
    std::size_t arrows_checked = 0, failures = 0;
    for (const Quiver& q : test_support::corpus()) {
        for (std::size_t xf = 0; xf < q.arrow_count(); ++xf) {
            if (!quivertoric::is_contractible(q, q.arrow_at(xf))) continue;
            ++arrows_checked;
            const auto basis = quivertoric::cycle_basis_through(q, q.arrow_at(xf));
            for (std::size_t y = 0; y < q.arrow_count(); ++y) {
                std::set<int> signs;
                for (const auto& c : basis)
                    if (c.coeff[xf] != 0 && c.coeff[y] != 0)
                        signs.insert(c.coeff[xf] * c.coeff[y] > 0 ? 1 : -1);
                if (signs.size() > 1) ++failures;
            }

            const IntMatrix g = quivertoric::gale_from_cycle_basis(q, q.arrow_at(xf));
            const auto rho_x = quivertoric::ray(g, xf);
            const auto cycles = test_support::simple_cycles_through_arrow(q, xf);
            for (std::size_t y = 0; y < q.arrow_count(); ++y) {
                if (y == xf) continue;
                const bool same_directed =
                    std::any_of(cycles.begin(), cycles.end(),
                                [&](const std::vector<int>& c) { return c[xf] * c[y] == 1; });
                if (!same_directed) continue;
                if (quivertoric::ray_dot(rho_x, quivertoric::ray(g, y)) < 0) ++failures;
            }
        }
    }
    if (failures) return {false, std::to_string(failures) + " failures"};
    return {true, std::to_string(arrows_checked) +
                      " contractible arrows: sign-coherent bases, no obtuse same-directed pair"};
}

Outcome criterion_ray_deletion() {
    const auto& corpus = test_support::corpus();
    std::size_t arrows_checked = 0, failures = 0;
    for (std::size_t qi = 0; qi < corpus.size() && qi < 25; ++qi) {
        const Quiver& q = corpus[qi];
        const IntMatrix g_full = quivertoric::gale_matrix(q);
        const std::size_t k = g_full.rows();
        for (std::size_t xf = 0; xf < q.arrow_count(); ++xf) {
            if (!quivertoric::is_contractible(q, q.arrow_at(xf))) continue;
            ++arrows_checked;
            if (k == 0) continue;  // nothing to map; trivially fine
            const auto contracted = quivertoric::contract(q, q.arrow_at(xf));
            const IntMatrix g_small = quivertoric::gale_matrix(contracted.quiver);

            // columns of the contracted Gale matrix arranged in the order of
            // the surviving original arrows
            IntMatrix a(k, q.arrow_count() - 1);
            IntMatrix b(k, q.arrow_count() - 1);
            std::size_t col = 0;
            bool mapped = true;
            for (std::size_t orig = 0; orig < q.arrow_count(); ++orig) {
                if (orig == xf) continue;
                const std::size_t image = contracted.arrow_map[orig];
                if (image == quivertoric::ContractionResult::npos) {
                    mapped = false;
                    break;
                }
                for (std::size_t r = 0; r < k; ++r) {
                    a(r, col) = g_small(r, image);
                    b(r, col) = g_full(r, orig);
                }
                ++col;
            }
            if (!mapped) {
                ++failures;
                continue;
            }
            const auto solved = test_support::rational_solve_left(a, b);
            if (!solved) {
                ++failures;
                continue;
            }
            IntMatrix u(k, k);
            bool integral = true;
            for (std::size_t r = 0; r < k && integral; ++r)
                for (std::size_t c = 0; c < k; ++c) {
                    if (boost::multiprecision::denominator((*solved)[r][c]) != 1) {
                        integral = false;
                        break;
                    }
                    u(r, c) = boost::multiprecision::numerator((*solved)[r][c]);
                }
            if (!integral) {
                ++failures;
                continue;
            }
            const Rational det = test_support::rational_det(u);
            if (det != 1 && det != -1) ++failures;
        }
    }
    if (failures) return {false, std::to_string(failures) + " arrows without a unimodular map"};
    return {true, std::to_string(arrows_checked) +
                      " contractible arrows over 25 quivers admit an exact unimodular column map"};
}

Outcome criterion_multiplicativity() {
    std::size_t checked = 0, failures = 0;
    for (const Quiver& q : test_support::corpus()) {
        const auto factors = quivertoric::decompose(q);
        if (factors.size() < 2) continue;
        ++checked;
        std::size_t product = 1;
        for (const auto& f : factors) product *= quivertoric::invariant_monomials(f.quiver).size();
        if (quivertoric::invariant_monomials(q).size() != product) ++failures;
    }
    if (failures) return {false, std::to_string(failures) + " products disagree"};
    return {true, std::to_string(checked) +
                      " quivers with a cut vertex: monomial count equals the factor product"};
}

Outcome criterion_brute_force() {
    std::size_t checked = 0, failures = 0;
    for (const Quiver& q : test_support::corpus()) {
        if (q.arrow_count() > 6) continue;
        ++checked;
        if (quivertoric::invariant_monomials(q, 1) != test_support::brute_force_flows(q, 1))
            ++failures;
    }
    if (failures) return {false, std::to_string(failures) + " enumeration mismatches"};
    return {true, std::to_string(checked) +
                      " quivers with at most 6 arrows match the bounded box enumeration"};
}

Outcome criterion_classification() {
    std::size_t cycle_cores = 0, hard_gate_failures = 0;
    std::size_t tree_cases = 0, tree_inconsistent = 0;
    quivertoric::json divergences = quivertoric::json::array();

    const auto& corpus = test_support::corpus();
    for (std::size_t qi = 0; qi < corpus.size(); ++qi) {
        const Quiver& q = corpus[qi];
        const auto report = quivertoric::classify(q);
        if (report.verdict == Verdict::smooth) {
            ++tree_cases;
            if (!report.consistent) ++tree_inconsistent;
        }
        for (const auto& factor : quivertoric::decompose(q)) {
            const auto simplified = quivertoric::simplify(factor.quiver);
            if (!quivertoric::has_proper_cycle(simplified.quiver)) continue;
            ++cycle_cores;
            const auto core_report = quivertoric::is_smooth(simplified.quiver);
            if (core_report.smooth) {
                ++hard_gate_failures;
                divergences.push_back({{"corpus_index", qi},
                                       {"quiver", quivertoric::to_json(q)},
                                       {"core", quivertoric::to_json(simplified.quiver)},
                                       {"structural", "singular"},
                                       {"oracle", "smooth"},
                                       {"hard_gate", true}});
            }
        }
        if (!report.consistent && report.verdict == Verdict::singular)
            divergences.push_back({{"corpus_index", qi},
                                   {"quiver", quivertoric::to_json(q)},
                                   {"structural", quivertoric::to_string(report.verdict)},
                                   {"oracle", quivertoric::to_string(report.oracle_verdict)},
                                   {"hard_gate", false}});
    }

    std::string where;
    if (!divergences.empty()) {
        where = "classification_divergences.json";
        std::ofstream out(where);
        out << divergences.dump(2) << "\n";
    }

    std::ostringstream detail;
    detail << cycle_cores << " proper-cycle cores (" << hard_gate_failures
           << " oracle-smooth), " << tree_cases << " tree-core cases (" << tree_inconsistent
           << " inconsistent)";
    if (!where.empty())
        detail << "; " << divergences.size() << " divergences logged to " << where;
    const bool pass = hard_gate_failures == 0 && tree_inconsistent == 0;
    return {pass, detail.str()};
}

struct RunCapture {
    std::string output;
    int status = -1;
};

std::optional<RunCapture> run_command(const std::string& command) {
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return std::nullopt;
    RunCapture capture;
    std::array<char, 4096> buffer;
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        capture.output.append(buffer.data(), n);
    capture.status = pclose(pipe);
    return capture;
}

Outcome criterion_cli_determinism() {
    const char* cli = std::getenv("QUIVERTORIC_CLI");
    if (!cli || !*cli) return {false, "QUIVERTORIC_CLI is not set"};

    namespace fs = std::filesystem;
    const fs::path dir = fs::path("acceptance_cli_corpus");
    fs::create_directories(dir);
    const auto& corpus = test_support::corpus();
    std::vector<std::string> files;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::ostringstream name;
        name << "q" << (i < 10 ? "0" : "") << i << ".qv";
        const fs::path path = dir / name.str();
        std::ofstream out(path);
        out << quivertoric::serialize(corpus[i]);
        files.push_back(path.string());
    }

    const std::vector<std::string> subcommands{"info",    "weight",   "rays",     "monomials",
                                               "vertices", "smooth",  "classify", "simplify",
                                               "decompose", "contract"};
    std::size_t runs = 0, failures = 0;
    const auto check_twice = [&](const std::string& args) {
        const std::string command = std::string("\"") + cli + "\" " + args + " 2>&1";
        const auto first = run_command(command);
        const auto second = run_command(command);
        ++runs;
        if (!first || !second || first->output != second->output ||
            first->status != second->status)
            ++failures;
    };

    for (std::size_t i = 0; i < files.size(); ++i) {
        for (const std::string& sub : subcommands) {
            std::string args = sub;
            if (sub == "contract") args += " --arrow 0";
            args += " \"" + files[i] + "\"";
            check_twice(args);
            if (i < 20) check_twice(args + " --json");
        }
    }
    if (failures)
        return {false, std::to_string(failures) + " of " + std::to_string(runs) +
                           " command pairs differ between runs"};
    return {true, std::to_string(runs) + " command pairs byte-identical across repeated runs"};
}

}  // namespace

int main() {
    int failures = 0;
    run_and_report(1, "double-square invariant monomials", 1000, criterion_monomials, failures);
    run_and_report(2, "double-square singular verdict", 10000, criterion_singular_example,
                   failures);
    run_and_report(3, "projective spaces", 6000, criterion_projective_spaces, failures);
    run_and_report(4, "Gale identities", 0, criterion_gale_identities, failures);
    run_and_report(5, "sign coherence and ray angles", 0, criterion_sign_coherence, failures);
    run_and_report(6, "ray deletion transition", 60000, criterion_ray_deletion, failures);
    run_and_report(7, "product multiplicativity", 0, criterion_multiplicativity, failures);
    run_and_report(8, "brute-force oracle equivalence", 0, criterion_brute_force, failures);
    run_and_report(9, "classification consistency", 300000, criterion_classification, failures);
    run_and_report(10, "CLI determinism", 0, criterion_cli_determinism, failures);

    std::cout << "acceptance: " << (10 - failures) << "/10 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
