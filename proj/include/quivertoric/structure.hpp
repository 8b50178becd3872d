/**
 * Structural operations on quivers: cycle bases, contractible arrows,
 * contraction, simplification to a simple core, and decomposition into
 * biconnected factors.
 *
 * Cycles are signed circulations supported on a single undirected cycle;
 * the sign of an arrow is +1 when the cycle traverses it source-to-target.
 */

#ifndef QUIVERTORIC_STRUCTURE_HPP
#define QUIVERTORIC_STRUCTURE_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quiver.hpp"

namespace quivertoric {

/**
 * A signed circulation whose support is one undirected simple cycle.
 * coeff has one entry per arrow in flattening order, each in {-1, 0, +1}.
 */
struct SignedCycle {
    std::vector<int> coeff;

    int operator[](std::size_t i) const { return coeff[i]; }
    std::size_t size() const noexcept { return coeff.size(); }

    bool operator==(const SignedCycle&) const = default;
};

using CycleBasis = std::vector<SignedCycle>;

enum class ContractionKind { neutral, blowdown };

/** One contraction step: the arrow's label when it was contracted, and
 *  whether it sat on any cycle (blowdown) or none (neutral). */
struct ContractionStep {
    std::string arrow;
    ContractionKind kind = ContractionKind::neutral;

    bool operator==(const ContractionStep&) const = default;
};

using ContractionLog = std::vector<ContractionStep>;

struct ContractionResult {
    Quiver quiver;
    /** Old vertex index -> new vertex index (merged pair shares one image). */
    std::vector<std::size_t> vertex_map;
    /** Old flat arrow index -> new flat arrow index; the contracted arrow
     *  itself maps to npos. */
    std::vector<std::size_t> arrow_map;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct SimplifyResult {
    Quiver quiver;
    ContractionLog log;
};

/** One factor of a product decomposition: a sub-quiver plus its weights. */
struct Factor {
    Quiver quiver;
    WeightVector weights;
};

/** Dimension of the cycle space: arrows (with multiplicity) - vertices + 1. */
inline Int cycle_space_dimension(const Quiver& q) {
    require_valid(q);
    return Int(q.arrow_count()) - Int(q.vertex_count()) + 1;
}

namespace detail {

/** Undirected adjacency at bundle granularity: per vertex, the incident
 *  bundle indices in increasing order. */
inline std::vector<std::vector<std::size_t>> bundle_adjacency(const Quiver& q) {
    std::vector<std::vector<std::size_t>> adj(q.vertex_count());
    for (std::size_t b = 0; b < q.bundle_count(); ++b) {
        adj[q.bundles()[b].src].push_back(b);
        adj[q.bundles()[b].dst].push_back(b);
    }
    return adj;
}

/** True iff src and dst of the given bundle stay connected when the bundle
 *  is removed, i.e. the bundle-edge lies on an undirected cycle. */
inline bool bundle_on_cycle(const Quiver& q, std::size_t bundle) {
    const Bundle& x = q.bundles()[bundle];
    UnionFind uf(q.vertex_count());
    for (std::size_t b = 0; b < q.bundle_count(); ++b)
        if (b != bundle) uf.unite(q.bundles()[b].src, q.bundles()[b].dst);
    return uf.find(x.src) == uf.find(x.dst);
}

/**
 * All simple undirected cycles through the single-arrow bundle x, at bundle
 * granularity.  Each cycle is reported as its bundle-sign map: +1 where the
 * cycle traverses a bundle source-to-target (x itself always +1), -1
 * otherwise.  Enumeration order is deterministic (DFS, lowest bundle first).
 */
inline std::vector<std::map<std::size_t, int>>
simple_cycles_through_bundle(const Quiver& q, std::size_t x) {
    const Bundle& xb = q.bundles()[x];
    auto adj = bundle_adjacency(q);
    std::vector<std::map<std::size_t, int>> cycles;
    std::vector<char> visited(q.vertex_count(), 0);
    std::map<std::size_t, int> path;  // bundle -> sign along current path

    // walk from dst(x) back to src(x); together with x this closes a cycle
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
        if (v == xb.src) {
            auto cycle = path;
            cycle[x] = 1;
            cycles.push_back(std::move(cycle));
            return;
        }
        visited[v] = 1;
        for (std::size_t b : adj[v]) {
            if (b == x || path.count(b)) continue;
            const Bundle& e = q.bundles()[b];
            const std::size_t w = (e.src == v) ? e.dst : e.src;
            if (w != xb.src && visited[w]) continue;
            path[b] = (e.src == v) ? 1 : -1;
            dfs(w);
            path.erase(b);
        }
        visited[v] = 0;
    };
    dfs(xb.dst);
    return cycles;
}

/**
 * Deterministic spanning tree of the supporting graph: scan bundles in
 * order, keep each one that joins two components.  Returns a flag per
 * bundle (true = tree edge).
 */
inline std::vector<char> spanning_tree_bundles(const Quiver& q) {
    UnionFind uf(q.vertex_count());
    std::vector<char> in_tree(q.bundle_count(), 0);
    for (std::size_t b = 0; b < q.bundle_count(); ++b)
        if (uf.unite(q.bundles()[b].src, q.bundles()[b].dst)) in_tree[b] = 1;
    return in_tree;
}

/** Signed bundle path between two vertices inside a spanning tree. */
inline std::vector<std::pair<std::size_t, int>>
tree_path(const Quiver& q, const std::vector<char>& in_tree,
          std::size_t from, std::size_t to) {
    auto adj = bundle_adjacency(q);
    std::vector<std::pair<std::size_t, int>> path;
    std::vector<char> visited(q.vertex_count(), 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t v) -> bool {
        if (v == to) return true;
        visited[v] = 1;
        for (std::size_t b : adj[v]) {
            if (!in_tree[b]) continue;
            const Bundle& e = q.bundles()[b];
            const std::size_t w = (e.src == v) ? e.dst : e.src;
            if (visited[w]) continue;
            path.push_back({b, (e.src == v) ? 1 : -1});
            if (dfs(w)) return true;
            path.pop_back();
        }
        return false;
    };
    if (!dfs(from)) throw std::logic_error("spanning tree does not connect quiver");
    return path;
}

}  // namespace detail

/**
 * A basis of the cycle space: fundamental cycles of a spanning tree of the
 * supporting graph (copy 0 of each bundle), plus the m-1 two-arrow cycles
 * between consecutive copies inside each bundle of multiplicity m.
 */
inline CycleBasis cycle_basis(const Quiver& q) {
    require_valid(q);
    const std::size_t m = q.arrow_count();
    auto in_tree = detail::spanning_tree_bundles(q);
    CycleBasis basis;

    for (std::size_t b = 0; b < q.bundle_count(); ++b) {
        if (in_tree[b]) continue;
        const Bundle& e = q.bundles()[b];
        SignedCycle c{std::vector<int>(m, 0)};
        c.coeff[q.flat_index({b, 0})] = 1;
        for (auto [tb, sign] : detail::tree_path(q, in_tree, e.dst, e.src))
            c.coeff[q.flat_index({tb, 0})] = sign;
        basis.push_back(std::move(c));
    }
    for (std::size_t b = 0; b < q.bundle_count(); ++b)
        for (std::int64_t copy = 0; copy + 1 < q.bundles()[b].mult; ++copy) {
            SignedCycle c{std::vector<int>(m, 0)};
            c.coeff[q.flat_index({b, copy})] = 1;
            c.coeff[q.flat_index({b, copy + 1})] = -1;
            basis.push_back(std::move(c));
        }
    return basis;
}

/**
 * True iff x can be contracted: its bundle is a single-arrow and no directed
 * path from its source to its target avoids it (so merging the endpoints
 * creates no directed cycle).
 */
inline bool is_contractible(const Quiver& q, const ArrowIndex& x) {
    require_valid(q);
    if (x.bundle >= q.bundle_count()) throw std::out_of_range("bundle index out of range");
    const Bundle& xb = q.bundles()[x.bundle];
    if (x.copy < 0 || x.copy >= xb.mult) throw std::out_of_range("copy index out of range");
    if (xb.mult != 1) return false;

    // directed reachability src -> dst without using bundle x
    std::vector<std::vector<std::size_t>> out(q.vertex_count());
    for (std::size_t b = 0; b < q.bundle_count(); ++b)
        if (b != x.bundle) out[q.bundles()[b].src].push_back(q.bundles()[b].dst);
    std::vector<char> seen(q.vertex_count(), 0);
    std::vector<std::size_t> stack{xb.src};
    seen[xb.src] = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (v == xb.dst) return false;
        for (std::size_t w : out[v])
            if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
    }
    return true;
}

/**
 * A cycle basis in which no arrow's orientation relative to x is ambiguous:
 * only one basis cycle passes through x, and that cycle is chosen (by
 * exhaustive search) so that none of its backward arrows is ever
 * same-directed with x in any simple cycle of the quiver.  The remaining
 * cycles form a basis of the cycle space of the quiver with x deleted.
 */
inline CycleBasis cycle_basis_through(const Quiver& q, const ArrowIndex& x) {
    if (!is_contractible(q, x))
        throw PreconditionError("arrow " + q.arrow_label(x) + " is not contractible");
    if (!detail::bundle_on_cycle(q, x.bundle))
        return cycle_basis(q);  // no cycle contains x; coherence is vacuous

    const std::size_t m = q.arrow_count();
    auto cycles = detail::simple_cycles_through_bundle(q, x.bundle);

    // bundles that ride along with x (same direction) in at least one cycle
    std::set<std::size_t> ever_forward;
    for (const auto& c : cycles)
        for (auto [b, sign] : c)
            if (sign == 1) ever_forward.insert(b);

    const std::map<std::size_t, int>* chosen = nullptr;
    for (const auto& c : cycles) {
        bool clean = true;
        for (auto [b, sign] : c)
            if (sign == -1 && ever_forward.count(b)) { clean = false; break; }
        if (clean) { chosen = &c; break; }
    }
    if (!chosen) {
        // No orientation-unambiguous cycle exists; fall back to the cycle
        // with the fewest backward arrows so callers still get a basis.
        std::size_t best = 0, best_backward = static_cast<std::size_t>(-1);
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            std::size_t backward = 0;
            for (auto [b, sign] : cycles[i])
                if (sign == -1) ++backward;
            if (backward < best_backward) { best_backward = backward; best = i; }
        }
        chosen = &cycles[best];
    }

    CycleBasis basis;
    SignedCycle c0{std::vector<int>(m, 0)};
    for (auto [b, sign] : *chosen) c0.coeff[q.flat_index({b, 0})] = sign;
    basis.push_back(std::move(c0));

    // delete bundle x (multiplicity 1) and lift the remaining cycle basis
    std::vector<Bundle> rest = q.bundles();
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(x.bundle));
    Quiver qx(q.vertices(), std::move(rest));
    const std::size_t cut = q.flat_index(x);
    for (const SignedCycle& c : cycle_basis(qx)) {
        SignedCycle lifted{std::vector<int>(m, 0)};
        for (std::size_t i = 0; i < c.size(); ++i)
            lifted.coeff[i < cut ? i : i + 1] = c[i];
        basis.push_back(std::move(lifted));
    }
    return basis;
}

/**
 * Contract a contractible arrow: remove it, merge its endpoints into one
 * vertex (named "(src+dst)", placed at the earlier position), and merge any
 * bundles that become parallel by adding multiplicities into the
 * earlier bundle.
 */
inline ContractionResult contract(const Quiver& q, const ArrowIndex& x) {
    if (!is_contractible(q, x))
        throw PreconditionError("arrow " + q.arrow_label(x) + " is not contractible");
    const Bundle& xb = q.bundles()[x.bundle];
    const std::size_t keep = std::min(xb.src, xb.dst);
    const std::size_t drop = std::max(xb.src, xb.dst);

    std::string merged = "(" + q.vertices()[xb.src] + "+" + q.vertices()[xb.dst] + ")";
    while (q.find_vertex(merged)) merged += "'";

    std::vector<std::string> vertices;
    std::vector<std::size_t> vertex_map(q.vertex_count(), 0);
    for (std::size_t v = 0; v < q.vertex_count(); ++v) {
        if (v == drop) { vertex_map[v] = vertex_map[keep]; continue; }
        vertex_map[v] = vertices.size();
        vertices.push_back(v == keep ? merged : q.vertices()[v]);
    }
    vertex_map[drop] = vertex_map[keep];

    std::vector<Bundle> bundles;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
    std::vector<ArrowIndex> image(q.arrow_count());  // destination (bundle, copy)
    for (std::size_t b = 0; b < q.bundle_count(); ++b) {
        if (b == x.bundle) continue;
        const Bundle& e = q.bundles()[b];
        const std::pair<std::size_t, std::size_t> key{vertex_map[e.src], vertex_map[e.dst]};
        auto it = slot.find(key);
        std::size_t target;
        std::int64_t base;
        if (it == slot.end()) {
            target = bundles.size();
            base = 0;
            slot[key] = target;
            bundles.push_back({key.first, key.second, e.mult});
        } else {
            target = it->second;
            base = bundles[target].mult;
            bundles[target].mult += e.mult;
        }
        for (std::int64_t copy = 0; copy < e.mult; ++copy)
            image[q.flat_index({b, copy})] = {target, base + copy};
    }
    Quiver result(std::move(vertices), std::move(bundles));
    std::vector<std::size_t> arrow_map(q.arrow_count(), ContractionResult::npos);
    for (std::size_t i = 0; i < q.arrow_count(); ++i)
        if (i != q.flat_index(x)) arrow_map[i] = result.flat_index(image[i]);
    require_valid(result);
    return {std::move(result), std::move(vertex_map), std::move(arrow_map)};
}

/**
 * Contract arrows until none is contractible; at each step the contractible
 * arrow earliest in flattening order goes first.  Each log entry records
 * whether the arrow sat on a cycle (blowdown) or on none (neutral).
 */
inline SimplifyResult simplify(const Quiver& q) {
    require_valid(q);
    Quiver current = q;
    ContractionLog log;
    for (;;) {
        bool contracted = false;
        for (std::size_t b = 0; b < current.bundle_count(); ++b) {
            const ArrowIndex x{b, 0};
            if (!is_contractible(current, x)) continue;
            log.push_back({current.arrow_label(x),
                           detail::bundle_on_cycle(current, b)
                               ? ContractionKind::blowdown
                               : ContractionKind::neutral});
            current = contract(current, x).quiver;
            contracted = true;
            break;
        }
        if (!contracted) break;
    }
    return {std::move(current), std::move(log)};
}

/** True iff the supporting graph contains an undirected cycle. */
inline bool has_proper_cycle(const Quiver& q) {
    require_valid(q);
    return q.bundle_count() + 1 > q.vertex_count();
}

/**
 * Split the quiver at cut vertices of the supporting graph into biconnected
 * factors.  Each factor keeps its original vertex and bundle order and
 * carries its own canonical weight; the product of the factor varieties
 * recovers the whole.
 */
inline std::vector<Factor> decompose(const Quiver& q) {
    require_valid(q);
    if (q.bundle_count() == 0) return {{q, canonical_weight(q)}};

    // Hopcroft–Tarjan block decomposition on the supporting graph
    auto adj = detail::bundle_adjacency(q);
    const std::size_t n = q.vertex_count();
    std::vector<std::size_t> disc(n, 0), low(n, 0);
    std::vector<std::size_t> edge_stack;
    std::vector<std::vector<std::size_t>> blocks;  // each: bundle indices
    std::size_t timer = 0;

    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t parent_edge) {
        disc[u] = low[u] = ++timer;
        for (std::size_t b : adj[u]) {
            if (b == parent_edge) continue;
            const Bundle& e = q.bundles()[b];
            const std::size_t v = (e.src == u) ? e.dst : e.src;
            if (disc[v] == 0) {
                edge_stack.push_back(b);
                dfs(v, b);
                low[u] = std::min(low[u], low[v]);
                if (low[v] >= disc[u]) {
                    std::vector<std::size_t> block;
                    for (;;) {
                        std::size_t top = edge_stack.back();
                        edge_stack.pop_back();
                        block.push_back(top);
                        if (top == b) break;
                    }
                    blocks.push_back(std::move(block));
                }
            } else if (disc[v] < disc[u]) {
                edge_stack.push_back(b);
                low[u] = std::min(low[u], disc[v]);
            }
        }
    };
    dfs(q.bundles()[0].src, static_cast<std::size_t>(-1));

    for (auto& block : blocks) std::sort(block.begin(), block.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<Factor> factors;
    for (const auto& block : blocks) {
        std::set<std::size_t> vset;
        for (std::size_t b : block) {
            vset.insert(q.bundles()[b].src);
            vset.insert(q.bundles()[b].dst);
        }
        std::vector<std::string> vertices;
        std::map<std::size_t, std::size_t> remap;
        for (std::size_t v : vset) {
            remap[v] = vertices.size();
            vertices.push_back(q.vertices()[v]);
        }
        std::vector<Bundle> bundles;
        for (std::size_t b : block) {
            const Bundle& e = q.bundles()[b];
            bundles.push_back({remap[e.src], remap[e.dst], e.mult});
        }
        Quiver factor(std::move(vertices), std::move(bundles));
        WeightVector weights = canonical_weight(factor);
        factors.push_back({std::move(factor), std::move(weights)});
    }
    return factors;
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_STRUCTURE_HPP
