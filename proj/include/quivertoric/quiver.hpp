/**
 * Quivers: vertices, arrow bundles, validation, canonical weight,
 * supporting quiver, and text-format parse/serialize.
 *
 * A bundle records all parallel arrows between one ordered vertex pair
 * with a multiplicity; individual arrows are addressed by (bundle, copy)
 * and flattened in bundle order, then copy order.  Vertex and bundle
 * order are preserved from input and fix all downstream matrix row and
 * column orders.
 *
 * All types are immutable after construction.
 */

#ifndef QUIVERTORIC_QUIVER_HPP
#define QUIVERTORIC_QUIVER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace quivertoric {

/** A bunch of parallel arrows: all copies share source, target, direction. */
struct Bundle {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::int64_t mult = 1;

    bool operator==(const Bundle&) const = default;
};

/** Address of a single arrow: which bundle, which copy inside it. */
struct ArrowIndex {
    std::size_t bundle = 0;
    std::int64_t copy = 0;

    bool operator==(const ArrowIndex&) const = default;
};

/** Per-vertex integer weights, indexed like Quiver::vertices(). */
using WeightVector = std::vector<Int>;

class Quiver {
public:
    Quiver() = default;

    Quiver(std::vector<std::string> vertices, std::vector<Bundle> bundles)
        : vertices_(std::move(vertices)), bundles_(std::move(bundles)) {
        for (const Bundle& b : bundles_)
            if (b.src >= vertices_.size() || b.dst >= vertices_.size())
                throw std::invalid_argument("bundle endpoint out of range");
        rebuild_offsets();
    }

    /** Convenience constructor resolving bundle endpoints by vertex name. */
    Quiver(std::vector<std::string> vertices,
           const std::vector<std::tuple<std::string, std::string, std::int64_t>>& bundles_by_name)
        : vertices_(std::move(vertices)) {
        for (const auto& [src, dst, mult] : bundles_by_name) {
            auto si = find_vertex(src), di = find_vertex(dst);
            if (!si || !di) throw std::invalid_argument("unknown vertex name in bundle");
            bundles_.push_back({*si, *di, mult});
        }
        rebuild_offsets();
    }

    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::vector<Bundle>& bundles() const noexcept { return bundles_; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t bundle_count() const noexcept { return bundles_.size(); }

    /** Number of arrows counted with multiplicity. */
    std::size_t arrow_count() const noexcept { return total_arrows_; }

    std::optional<std::size_t> find_vertex(const std::string& name) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i] == name) return i;
        return std::nullopt;
    }

    /** Flat index of an arrow in the canonical flattening. */
    std::size_t flat_index(const ArrowIndex& a) const {
        if (a.bundle >= bundles_.size() || a.copy < 0 || a.copy >= bundles_[a.bundle].mult)
            throw std::out_of_range("arrow index out of range");
        return offsets_[a.bundle] + static_cast<std::size_t>(a.copy);
    }

    /** Inverse of flat_index. */
    ArrowIndex arrow_at(std::size_t flat) const {
        if (flat >= total_arrows_) throw std::out_of_range("flat arrow index out of range");
        std::size_t b = 0;
        while (b + 1 < offsets_.size() && offsets_[b + 1] <= flat) ++b;
        return {b, static_cast<std::int64_t>(flat - offsets_[b])};
    }

    /** Human-readable arrow label, e.g. "a->b" or "a->b#2" for copy 2. */
    std::string arrow_label(const ArrowIndex& a) const {
        const Bundle& b = bundles_[a.bundle];
        std::string s = vertices_[b.src] + "->" + vertices_[b.dst];
        if (b.mult > 1) s += "#" + std::to_string(a.copy);
        return s;
    }

    bool operator==(const Quiver& other) const {
        return vertices_ == other.vertices_ && bundles_ == other.bundles_;
    }

private:
    void rebuild_offsets() {
        offsets_.assign(bundles_.size(), 0);
        std::size_t acc = 0;
        for (std::size_t i = 0; i < bundles_.size(); ++i) {
            offsets_[i] = acc;
            if (bundles_[i].mult > 0) acc += static_cast<std::size_t>(bundles_[i].mult);
        }
        total_arrows_ = acc;
    }

    std::vector<std::string> vertices_;
    std::vector<Bundle> bundles_;
    std::vector<std::size_t> offsets_;
    std::size_t total_arrows_ = 0;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) { parent_[x] = parent_[parent_[x]]; x = parent_[x]; }
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a); b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

/** True iff the directed bundle graph admits a topological order. */
inline bool is_dag(const Quiver& q) {
    const std::size_t n = q.vertex_count();
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const Bundle& b : q.bundles()) {
        if (b.src == b.dst) return false;
        out[b.src].push_back(b.dst);
        ++indeg[b.dst];
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        ++seen;
        for (std::size_t w : out[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen == n;
}

/** Deterministic topological order (lowest vertex index first among ready ones). */
inline std::vector<std::size_t> topological_order(const Quiver& q) {
    const std::size_t n = q.vertex_count();
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const Bundle& b : q.bundles()) {
        out[b.src].push_back(b.dst);
        ++indeg[b.dst];
    }
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        std::size_t v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (std::size_t w : out[v])
            if (--indeg[w] == 0) ready.insert(w);
    }
    if (order.size() != n) throw InvalidQuiverError("quiver has a directed cycle");
    return order;
}

}  // namespace detail

/**
 * Collect all invariant violations; an empty result means the quiver is valid.
 * Violations are data, not failures.
 */
inline std::vector<std::string> validate(const Quiver& q) {
    std::vector<std::string> violations;
    const auto& vs = q.vertices();
    const auto& bs = q.bundles();

    if (vs.empty()) violations.push_back("quiver has no vertices");
    {
        std::set<std::string> seen;
        for (const auto& v : vs)
            if (!seen.insert(v).second)
                violations.push_back("duplicate vertex id '" + v + "'");
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const Bundle& b = bs[i];
        const std::string label = (b.src < vs.size() && b.dst < vs.size())
                                      ? vs[b.src] + "->" + vs[b.dst]
                                      : "#" + std::to_string(i);
        if (b.mult < 1)
            violations.push_back("bundle " + label + " has multiplicity < 1");
        if (b.src == b.dst) {
            violations.push_back("loop at bundle " + label + " (a loop is a directed cycle)");
            continue;
        }
        if (!pairs.insert({b.src, b.dst}).second)
            violations.push_back("duplicate bundle between the ordered pair " + label);
        if (pairs.count({b.dst, b.src}))
            violations.push_back("opposite-direction bundles between " + vs[b.dst] + " and " + vs[b.src]);
    }
    // connectivity of the underlying undirected graph
    if (!vs.empty()) {
        detail::UnionFind uf(vs.size());
        for (const Bundle& b : bs)
            if (b.src < vs.size() && b.dst < vs.size()) uf.unite(b.src, b.dst);
        std::size_t root = uf.find(0);
        for (std::size_t v = 1; v < vs.size(); ++v)
            if (uf.find(v) != root) {
                violations.push_back("underlying graph is disconnected");
                break;
            }
    }
    if (!detail::is_dag(q))
        violations.push_back("directed cycle present");
    return violations;
}

/** Throw InvalidQuiverError unless validate(q) is empty. */
inline void require_valid(const Quiver& q) {
    auto v = validate(q);
    if (!v.empty()) {
        std::string msg = "invalid quiver:";
        for (const auto& s : v) msg += " " + s + ";";
        throw InvalidQuiverError(msg);
    }
}

/**
 * Canonical weight: per vertex, the number of in-coming arrows minus the
 * number of out-going arrows, counted with multiplicity.  Entries sum to zero.
 */
inline WeightVector canonical_weight(const Quiver& q) {
    require_valid(q);
    WeightVector theta(q.vertex_count(), 0);
    for (const Bundle& b : q.bundles()) {
        theta[b.dst] += b.mult;
        theta[b.src] -= b.mult;
    }
    return theta;
}

/** Same vertices, every bundle's multiplicity set to 1. */
inline Quiver supporting_quiver(const Quiver& q) {
    require_valid(q);
    std::vector<Bundle> bs = q.bundles();
    for (Bundle& b : bs) b.mult = 1;
    return Quiver(q.vertices(), std::move(bs));
}

/**
 * Parse the quiver text format:
 *
 *   vertex <id>
 *   arrow <src> <dst> [mult=<k>]
 *
 * '#' starts a comment; blank lines are ignored.  Syntax problems throw
 * ParseError with the line number; semantic problems (loops, cycles,
 * disconnectedness, non-positive multiplicity) are left to validate().
 */
inline Quiver parse(const std::string& text) {
    std::vector<std::string> vertices;
    std::vector<Bundle> bundles;
    std::map<std::string, std::size_t> index;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "vertex") {
            std::string id, extra;
            if (!(ls >> id)) throw ParseError(lineno, "vertex statement needs an id");
            if (ls >> extra) throw ParseError(lineno, "unexpected token '" + extra + "'");
            if (index.count(id)) throw ParseError(lineno, "vertex '" + id + "' declared twice");
            index[id] = vertices.size();
            vertices.push_back(id);
        } else if (word == "arrow") {
            std::string src, dst, opt, extra;
            if (!(ls >> src >> dst)) throw ParseError(lineno, "arrow statement needs <src> <dst>");
            std::int64_t mult = 1;
            if (ls >> opt) {
                if (opt.rfind("mult=", 0) != 0)
                    throw ParseError(lineno, "expected mult=<k>, got '" + opt + "'");
                const std::string num = opt.substr(5);
                try {
                    std::size_t pos = 0;
                    mult = std::stoll(num, &pos);
                    if (pos != num.size()) throw std::invalid_argument(num);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "bad multiplicity '" + num + "'");
                }
                if (ls >> extra) throw ParseError(lineno, "unexpected token '" + extra + "'");
            }
            auto si = index.find(src);
            auto di = index.find(dst);
            if (si == index.end()) throw ParseError(lineno, "unknown vertex '" + src + "'");
            if (di == index.end()) throw ParseError(lineno, "unknown vertex '" + dst + "'");
            bundles.push_back({si->second, di->second, mult});
        } else {
            throw ParseError(lineno, "unknown statement '" + word + "'");
        }
    }
    return Quiver(std::move(vertices), std::move(bundles));
}

/** Inverse of parse (parse(serialize(q)) == q for representable quivers). */
inline std::string serialize(const Quiver& q) {
    std::ostringstream out;
    for (const auto& v : q.vertices()) out << "vertex " << v << "\n";
    for (const Bundle& b : q.bundles()) {
        out << "arrow " << q.vertices()[b.src] << " " << q.vertices()[b.dst];
        if (b.mult != 1) out << " mult=" << b.mult;
        out << "\n";
    }
    return out.str();
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_QUIVER_HPP
