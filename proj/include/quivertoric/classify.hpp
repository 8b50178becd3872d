/**
 * End-to-end classification of the variety behind a quiver: split into
 * biconnected factors, contract each factor to its simple core, read off
 * the structural verdict (a core with a proper cycle forces a singular
 * variety; a tree core describes a product of projective spaces reached by
 * inverse blowdowns), then cross-check against the polytope smoothness
 * oracle.  The oracle is authoritative; the structural analysis is the
 * explanation, and the consistent flag exposes any divergence.
 */

#ifndef QUIVERTORIC_CLASSIFY_HPP
#define QUIVERTORIC_CLASSIFY_HPP

#include <string>
#include <vector>

#include "polytope.hpp"
#include "quiver.hpp"
#include "structure.hpp"

namespace quivertoric {

enum class Verdict { smooth, singular };

inline std::string to_string(Verdict v) {
    return v == Verdict::smooth ? "smooth" : "singular";
}

/** Structural description of one biconnected factor after simplification. */
struct FactorClassification {
    /** One entry per bundle of the simple core when the core is a tree of
     *  bundles (the factor is then a product of these projective spaces,
     *  blown up blowdown_count times); empty when the core keeps a proper
     *  cycle. */
    std::vector<Int> projective_dimensions;
    std::size_t blowdown_count = 0;
    bool core_has_proper_cycle = false;
};

struct ClassificationReport {
    Verdict verdict = Verdict::singular;          // structural verdict
    std::vector<FactorClassification> factors;    // one per decompose factor
    std::vector<ContractionLog> contraction_log;  // parallel to factors
    Verdict oracle_verdict = Verdict::singular;   // from the polytope oracle
    bool consistent = false;
};

/**
 * Classify the variety of q.  Structural pass: any factor whose simple
 * core retains a proper cycle makes the verdict singular; otherwise the
 * verdict is smooth and each factor is a product of projective spaces
 * (one per core bundle) with some number of inverse blowdowns.  The
 * polytope oracle then re-derives the verdict independently.
 */
inline ClassificationReport classify(const Quiver& q, unsigned threads = 0) {
    require_valid(q);
    ClassificationReport report;

    bool any_cycle_core = false;
    for (const Factor& factor : decompose(q)) {
        SimplifyResult simplified = simplify(factor.quiver);
        FactorClassification fc;
        for (const ContractionStep& step : simplified.log)
            if (step.kind == ContractionKind::blowdown) ++fc.blowdown_count;
        fc.core_has_proper_cycle = has_proper_cycle(simplified.quiver);
        if (fc.core_has_proper_cycle) {
            any_cycle_core = true;
        } else {
            for (const Bundle& b : simplified.quiver.bundles())
                fc.projective_dimensions.push_back(Int(b.mult) - 1);
        }
        report.factors.push_back(std::move(fc));
        report.contraction_log.push_back(std::move(simplified.log));
    }
    report.verdict = any_cycle_core ? Verdict::singular : Verdict::smooth;
    report.oracle_verdict = is_smooth(q, threads).smooth ? Verdict::smooth : Verdict::singular;
    report.consistent = report.verdict == report.oracle_verdict;
    return report;
}

/**
 * Concrete, independently checkable evidence of singularity: the polytope
 * vertex where the smoothness test fails, with its edge-direction matrix.
 */
inline SingularWitness singularity_witness(const Quiver& q, unsigned threads = 0) {
    SmoothnessReport report = is_smooth(q, threads);
    if (report.smooth)
        throw PreconditionError("quiver variety is smooth; no singularity witness exists");
    return *report.witness;
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_CLASSIFY_HPP
