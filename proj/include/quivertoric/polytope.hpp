/**
 * The flow polytope {x >= 0 : M^T x = theta} of a quiver: enumeration of
 * its lattice points (the invariant monomials of each degree), its
 * vertices and edges, and the smoothness test for the associated variety
 * (every vertex simple, every edge set unimodular in the kernel lattice).
 *
 * Everything is exact; vertices have integer coordinates because spanning
 * trees of the arrow graph solve the flow equations integrally.
 */

#ifndef QUIVERTORIC_POLYTOPE_HPP
#define QUIVERTORIC_POLYTOPE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gale.hpp"
#include "int_matrix.hpp"
#include "quiver.hpp"
#include "structure.hpp"

namespace quivertoric {

/** Exponent vector of a theta-invariant monomial, one entry per arrow. */
using Flow = std::vector<Int>;

/** A bundle-level exponent vector with the number of arrow-level flows
 *  that aggregate to it. */
struct AggregatedFlow {
    std::vector<Int> exponents;
    std::size_t count = 0;

    bool operator==(const AggregatedFlow&) const = default;
};

/** A vertex of the flow polytope (always integral) and its support. */
struct PolytopeVertex {
    std::vector<Int> coords;
    std::vector<std::size_t> support;

    bool operator==(const PolytopeVertex&) const = default;
};

struct SingularWitness {
    /** Index into polytope_vertices(q) of the failing vertex. */
    std::size_t vertex_index = 0;
    std::vector<Int> vertex;
    /** Edge directions at the vertex, one row per edge, in coordinates of
     *  the canonical kernel-lattice basis. */
    IntMatrix edge_matrix;
    std::string reason;
};

struct SmoothnessReport {
    bool smooth = false;
    /** Edge-matrix determinant per vertex, for the vertices that are
     *  simple; complete exactly when smooth. */
    std::vector<Int> vertex_determinants;
    std::optional<SingularWitness> witness;
};

namespace detail {

/** Enumerate all ways to split total into parts non-negative summands. */
template <typename Fn>
void for_each_composition(const Int& total, std::size_t parts,
                          std::vector<Int>& scratch, Fn&& fn) {
    if (parts == 0) {
        if (total == 0) fn(scratch);
        return;
    }
    if (parts == 1) {
        scratch.push_back(total);
        fn(scratch);
        scratch.pop_back();
        return;
    }
    for (Int head = 0; head <= total; ++head) {
        scratch.push_back(head);
        for_each_composition(total - head, parts - 1, scratch, fn);
        scratch.pop_back();
    }
}

/** Express a kernel-lattice vector in an HNF basis (rows of g); exact. */
inline std::vector<Int> lattice_coordinates(const IntMatrix& g, const std::vector<Int>& e) {
    if (e.size() != g.cols()) throw std::invalid_argument("vector length mismatch");
    std::vector<Int> residual = e;
    std::vector<Int> coords(g.rows(), 0);
    for (std::size_t i = 0; i < g.rows(); ++i) {
        std::size_t pivot = 0;
        while (pivot < g.cols() && g(i, pivot) == 0) ++pivot;
        if (pivot == g.cols()) throw std::logic_error("zero row in lattice basis");
        if (residual[pivot] % g(i, pivot) != 0)
            throw std::logic_error("vector outside the lattice spanned by basis");
        coords[i] = residual[pivot] / g(i, pivot);
        for (std::size_t j = 0; j < g.cols(); ++j) residual[j] -= coords[i] * g(i, j);
    }
    for (const Int& r : residual)
        if (r != 0) throw std::logic_error("vector outside the lattice spanned by basis");
    return coords;
}

/** Solve M^T x = theta on a spanning set of arrows (others zero) by leaf
 *  stripping; returns the full coordinate vector, or nothing when some
 *  coordinate goes negative. */
inline std::optional<std::vector<Int>> solve_on_tree(
    const Quiver& q, const WeightVector& theta, const std::vector<std::size_t>& tree) {
    const std::size_t n = q.vertex_count();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t a : tree) {
        const Bundle& b = q.bundles()[q.arrow_at(a).bundle];
        incident[b.src].push_back(a);
        incident[b.dst].push_back(a);
    }
    std::vector<std::size_t> degree(n);
    for (std::size_t v = 0; v < n; ++v) degree[v] = incident[v].size();

    std::vector<Int> x(q.arrow_count(), 0);
    std::vector<Int> residual = theta;
    std::vector<char> done_arrow(q.arrow_count(), 0), done_vertex(n, 0);
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push_back(v);

    std::size_t processed = 0;
    while (!leaves.empty()) {
        const std::size_t v = leaves.back();
        leaves.pop_back();
        if (done_vertex[v]) continue;
        done_vertex[v] = 1;
        std::size_t a = static_cast<std::size_t>(-1);
        for (std::size_t cand : incident[v])
            if (!done_arrow[cand]) { a = cand; break; }
        if (a == static_cast<std::size_t>(-1)) continue;
        done_arrow[a] = 1;
        ++processed;
        const Bundle& b = q.bundles()[q.arrow_at(a).bundle];
        const std::size_t other = (b.dst == v) ? b.src : b.dst;
        x[a] = (b.dst == v) ? residual[v] : -residual[v];
        if (x[a] < 0) return std::nullopt;
        residual[other] -= (b.dst == other) ? x[a] : -x[a];
        if (--degree[other] == 1 && !done_vertex[other]) leaves.push_back(other);
    }
    if (processed != tree.size()) throw std::logic_error("leaf stripping missed a tree arrow");
    return x;
}

inline std::size_t resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

/**
 * All non-negative integer arrow vectors alpha with M^T alpha = degree *
 * theta, theta canonical.  Enumerated by walking vertices in topological
 * order and splitting each vertex's forced out-flow over its out-arrows;
 * result sorted lexicographically.
 */
inline std::vector<Flow> invariant_monomials(const Quiver& q, const Int& degree = 1) {
    require_valid(q);
    if (degree < 1) throw PreconditionError("degree must be >= 1");
    const WeightVector theta = canonical_weight(q);
    const std::vector<std::size_t> order = detail::topological_order(q);

    std::vector<std::vector<std::size_t>> out_arrows(q.vertex_count());
    for (std::size_t a = 0; a < q.arrow_count(); ++a)
        out_arrows[q.bundles()[q.arrow_at(a).bundle].src].push_back(a);

    std::vector<Flow> flows;
    std::vector<Int> alpha(q.arrow_count(), 0);
    std::vector<Int> inflow(q.vertex_count(), 0);

    std::function<void(std::size_t)> walk = [&](std::size_t step) {
        if (step == order.size()) {
            flows.push_back(alpha);
            return;
        }
        const std::size_t v = order[step];
        const Int outsum = inflow[v] - degree * theta[v];
        if (outsum < 0) return;
        const auto& outs = out_arrows[v];
        if (outs.empty()) {
            if (outsum == 0) walk(step + 1);
            return;
        }
        std::vector<Int> parts;
        detail::for_each_composition(outsum, outs.size(), parts, [&](const std::vector<Int>& split) {
            for (std::size_t i = 0; i < outs.size(); ++i) {
                alpha[outs[i]] = split[i];
                inflow[q.bundles()[q.arrow_at(outs[i]).bundle].dst] += split[i];
            }
            walk(step + 1);
            for (std::size_t i = 0; i < outs.size(); ++i) {
                inflow[q.bundles()[q.arrow_at(outs[i]).bundle].dst] -= split[i];
                alpha[outs[i]] = 0;
            }
        });
    };
    walk(0);
    std::sort(flows.begin(), flows.end());
    return flows;
}

/**
 * Sum each flow's entries within bundles and count how many arrow-level
 * flows land on each bundle-level vector; sorted lexicographically.
 */
inline std::vector<AggregatedFlow> aggregate_by_bundle(const Quiver& q,
                                                       const std::vector<Flow>& flows) {
    std::map<std::vector<Int>, std::size_t> counts;
    for (const Flow& f : flows) {
        if (f.size() != q.arrow_count()) throw std::invalid_argument("flow length mismatch");
        std::vector<Int> agg(q.bundle_count(), 0);
        for (std::size_t a = 0; a < f.size(); ++a) agg[q.arrow_at(a).bundle] += f[a];
        ++counts[agg];
    }
    std::vector<AggregatedFlow> result;
    result.reserve(counts.size());
    for (auto& [exponents, count] : counts) result.push_back({exponents, count});
    return result;
}

/**
 * All vertices of the flow polytope, sorted lexicographically by
 * coordinates.  Enumerates spanning trees of the arrow graph and keeps the
 * non-negative tree solutions; may fan the tree enumeration out over
 * several threads (0 = one per hardware thread) with output independent of
 * the thread count.
 */
inline std::vector<PolytopeVertex> polytope_vertices(const Quiver& q, unsigned threads = 0) {
    require_valid(q);
    const WeightVector theta = canonical_weight(q);
    const std::size_t m = q.arrow_count();
    const std::size_t n = q.vertex_count();

    if (n == 1) return {{std::vector<Int>{}, {}}};

    // all (n-1)-subsets of arrows that span the vertex set
    std::vector<std::vector<std::size_t>> trees;
    std::vector<std::size_t> combo(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) combo[i] = i;
    if (m + 1 < n) return {};
    for (;;) {
        detail::UnionFind uf(n);
        std::size_t united = 0;
        for (std::size_t a : combo) {
            const Bundle& b = q.bundles()[q.arrow_at(a).bundle];
            if (uf.unite(b.src, b.dst)) ++united;
        }
        if (united == n - 1) trees.push_back(combo);
        // next combination in lexicographic order
        std::size_t i = n - 1;
        while (i > 0 && combo[i - 1] == m - (n - 1) + (i - 1)) --i;
        if (i == 0) break;
        ++combo[i - 1];
        for (std::size_t j = i; j + 1 < n; ++j) combo[j] = combo[j - 1] + 1;
    }

    const std::size_t worker_count = std::min<std::size_t>(
        detail::resolve_threads(threads), std::max<std::size_t>(trees.size(), 1));
    std::set<std::vector<Int>> found;
    std::mutex found_mutex;
    auto work = [&](std::size_t worker) {
        std::set<std::vector<Int>> local;
        for (std::size_t t = worker; t < trees.size(); t += worker_count)
            if (auto x = detail::solve_on_tree(q, theta, trees[t])) local.insert(std::move(*x));
        std::lock_guard<std::mutex> lock(found_mutex);
        found.merge(local);
    };
    if (worker_count <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < worker_count; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    std::vector<PolytopeVertex> vertices;
    for (const auto& coords : found) {
        PolytopeVertex v{coords, {}};
        for (std::size_t a = 0; a < coords.size(); ++a)
            if (coords[a] > 0) v.support.push_back(a);
        vertices.push_back(std::move(v));
    }
    return vertices;
}

namespace detail {

/** Edge directions at vertex index vi within a precomputed vertex list:
 *  w is adjacent when the common zero coordinates cut the kernel lattice
 *  down to rank one; the primitive generator is oriented from v toward w. */
inline std::vector<std::vector<Int>> edges_at_vertex(
    const IntMatrix& gale, const std::vector<PolytopeVertex>& vertices, std::size_t vi) {
    const std::size_t m = gale.cols();
    const PolytopeVertex& v = vertices[vi];
    std::vector<std::vector<Int>> edges;
    for (std::size_t wi = 0; wi < vertices.size(); ++wi) {
        if (wi == vi) continue;
        const PolytopeVertex& w = vertices[wi];
        std::vector<std::size_t> common_zeros;
        for (std::size_t a = 0; a < m; ++a)
            if (v.coords[a] == 0 && w.coords[a] == 0) common_zeros.push_back(a);
        IntMatrix restricted(gale.rows(), common_zeros.size());
        for (std::size_t r = 0; r < gale.rows(); ++r)
            for (std::size_t c = 0; c < common_zeros.size(); ++c)
                restricted(r, c) = gale(r, common_zeros[c]);
        const IntMatrix coeffs = left_kernel_basis(restricted);
        if (coeffs.rows() != 1) continue;
        std::vector<Int> dir(m, 0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t r = 0; r < gale.rows(); ++r)
                dir[a] += coeffs(0, r) * gale(r, a);
        // orient from v toward w
        for (std::size_t a = 0; a < m; ++a) {
            const Int delta = w.coords[a] - v.coords[a];
            if (delta == 0) continue;
            if ((delta > 0) != (dir[a] > 0))
                for (auto& d : dir) d = -d;
            break;
        }
        edges.push_back(std::move(dir));
    }
    return edges;
}

}  // namespace detail

/**
 * Primitive integer edge directions of the flow polytope at one of its
 * vertices, oriented away from it; order follows the vertex list order of
 * polytope_vertices.
 */
inline std::vector<std::vector<Int>> vertex_edges(const Quiver& q, const PolytopeVertex& v) {
    const auto vertices = polytope_vertices(q);
    const IntMatrix gale = gale_matrix(q);
    for (std::size_t vi = 0; vi < vertices.size(); ++vi)
        if (vertices[vi].coords == v.coords)
            return detail::edges_at_vertex(gale, vertices, vi);
    throw PreconditionError("given point is not a vertex of the flow polytope");
}

/**
 * Delzant smoothness test: the variety is smooth iff every polytope vertex
 * has exactly k = arrows - vertices + 1 edges and the edge directions,
 * written in the canonical kernel-lattice basis, have determinant +-1.
 * The report carries a per-vertex determinant trail or a concrete failing
 * witness; a witness with a non-unimodular determinant is preferred over a
 * non-simple vertex when both failures occur.
 */
inline SmoothnessReport is_smooth(const Quiver& q, unsigned threads = 0) {
    require_valid(q);
    const auto vertices = polytope_vertices(q, threads);
    if (vertices.empty())
        throw std::logic_error("flow polytope has no vertices for canonical weights");
    const IntMatrix gale = gale_matrix(q);
    const std::size_t k = gale.rows();

    SmoothnessReport report;
    std::optional<SingularWitness> simplicity_failure;
    for (std::size_t vi = 0; vi < vertices.size(); ++vi) {
        const auto edges = detail::edges_at_vertex(gale, vertices, vi);
        IntMatrix dirs(edges.size(), k);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto coords = detail::lattice_coordinates(gale, edges[e]);
            for (std::size_t c = 0; c < k; ++c) dirs(e, c) = coords[c];
        }
        if (edges.size() != k) {
            if (!simplicity_failure)
                simplicity_failure = SingularWitness{
                    vi, vertices[vi].coords, dirs,
                    "vertex has " + std::to_string(edges.size()) + " edges, expected " +
                        std::to_string(k)};
            continue;
        }
        const Int det = determinant(dirs);
        if (det == 1 || det == -1) {
            report.vertex_determinants.push_back(det);
            continue;
        }
        std::ostringstream reason;
        reason << "edge matrix determinant is " << det;
        report.witness = SingularWitness{vi, vertices[vi].coords, dirs, reason.str()};
        return report;
    }
    if (simplicity_failure) {
        report.witness = std::move(simplicity_failure);
        return report;
    }
    report.smooth = true;
    return report;
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_POLYTOPE_HPP
