/**
 * Incidence and Gale matrices of a quiver, and the fan rays they carry.
 *
 * The incidence matrix has one row per arrow (flattening order) and one
 * column per vertex: -1 at the source, +1 at the target.  A Gale matrix is
 * a saturated integer basis of its left kernel; each arrow's column is the
 * ray of that arrow in the fan.
 */

#ifndef QUIVERTORIC_GALE_HPP
#define QUIVERTORIC_GALE_HPP

#include <stdexcept>
#include <vector>

#include "int_matrix.hpp"
#include "quiver.hpp"
#include "structure.hpp"

namespace quivertoric {

using Ray = std::vector<Int>;

/** m x n matrix: row per arrow with -1 at its source and +1 at its target. */
inline IntMatrix incidence_matrix(const Quiver& q) {
    require_valid(q);
    IntMatrix m(q.arrow_count(), q.vertex_count());
    for (std::size_t i = 0; i < q.arrow_count(); ++i) {
        const Bundle& b = q.bundles()[q.arrow_at(i).bundle];
        m(i, b.src) = -1;
        m(i, b.dst) = 1;
    }
    return m;
}

/**
 * Canonical Gale matrix: the Hermite-normal-form basis of the saturated
 * left kernel of the incidence matrix.  k = arrows - vertices + 1 rows,
 * one column per arrow.
 */
inline IntMatrix gale_matrix(const Quiver& q) {
    require_valid(q);
    return left_kernel_basis(incidence_matrix(q));
}

/**
 * Gale matrix whose rows are the sign vectors of cycle_basis_through(q, x);
 * used for the ray dot-product properties around a contractible arrow.
 * Not in normal form, but a genuine left-kernel basis.
 */
inline IntMatrix gale_from_cycle_basis(const Quiver& q, const ArrowIndex& x) {
    CycleBasis basis = cycle_basis_through(q, x);
    IntMatrix g(basis.size(), q.arrow_count());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < q.arrow_count(); ++j)
            g(i, j) = basis[i][j];
    if (rank(g) != g.rows())
        throw std::logic_error("cycle basis rows are rationally dependent");
    return g;
}

/** The ray of one arrow: its column of the Gale matrix. */
inline Ray ray(const IntMatrix& gale, std::size_t flat_arrow) {
    if (flat_arrow >= gale.cols()) throw std::out_of_range("arrow index out of range");
    return gale.col(flat_arrow);
}

inline Ray ray(const IntMatrix& gale, const Quiver& q, const ArrowIndex& x) {
    return ray(gale, q.flat_index(x));
}

/** Standard integer dot product of two rays. */
inline Int ray_dot(const Ray& a, const Ray& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ray length mismatch");
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_GALE_HPP
