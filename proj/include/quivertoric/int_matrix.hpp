/**
 * Dense exact integer matrices: Hermite normal form, saturated left
 * kernel bases, rank, and determinant.
 *
 * All elimination is integer-preserving; HNF output is the canonical
 * form used to make downstream Gale matrices deterministic.
 */

#ifndef QUIVERTORIC_INT_MATRIX_HPP
#define QUIVERTORIC_INT_MATRIX_HPP

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace quivertoric {

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<Int>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw std::invalid_argument("ragged initializer for IntMatrix");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const IntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }
    bool operator!=(const IntMatrix& other) const { return !(*this == other); }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    IntMatrix operator*(const IntMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw std::invalid_argument("dimension mismatch in matrix product");
        IntMatrix p(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    p(i, j) += a * rhs(k, j);
            }
        return p;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (v != 0) return false;
        return true;
    }

    std::vector<Int> row(std::size_t r) const {
        return std::vector<Int>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }

    std::vector<Int> col(std::size_t c) const {
        std::vector<Int> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r == 0 ? "[" : " ") << "[";
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << m(r, c) << (c + 1 < m.cols() ? ", " : "");
        os << "]" << (r + 1 < m.rows() ? ",\n" : "]");
    }
    if (m.rows() == 0) os << "[]";
    return os;
}

struct HermiteResult {
    IntMatrix h;  // row-style HNF of the input
    IntMatrix u;  // unimodular transform with u * input = h
};

namespace detail {

// Combine rows (pr, r) of both h and u by the 2x2 unimodular transform that
// puts gcd(h(pr,col), h(r,col)) at (pr,col) and zero at (r,col).
inline void gcd_rows(IntMatrix& h, IntMatrix& u, std::size_t pr, std::size_t r, std::size_t col) {
    const Int a = h(pr, col);
    const Int b = h(r, col);
    if (b == 0) return;
    if (a == 0) {
        h.swap_rows(pr, r);
        u.swap_rows(pr, r);
        return;
    }
    Int g, s, t;
    extended_gcd(a, b, g, s, t);
    const Int af = a / g, bf = b / g;
    for (std::size_t c = 0; c < h.cols(); ++c) {
        const Int hp = h(pr, c), hr = h(r, c);
        h(pr, c) = s * hp + t * hr;
        h(r, c) = af * hr - bf * hp;
    }
    for (std::size_t c = 0; c < u.cols(); ++c) {
        const Int up = u(pr, c), ur = u(r, c);
        u(pr, c) = s * up + t * ur;
        u(r, c) = af * ur - bf * up;
    }
}

}  // namespace detail

/**
 * Row-style Hermite normal form.
 *
 * Returns (h, u) with u unimodular, u*m = h, pivot entries positive,
 * entries above each pivot reduced into [0, pivot), pivot columns strictly
 * increasing, zero rows at the bottom.
 */
inline HermiteResult hermite_normal_form(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    std::size_t pr = 0;
    for (std::size_t col = 0; col < h.cols() && pr < h.rows(); ++col) {
        // pick the nonzero entry of smallest magnitude as pivot seed
        std::size_t best = h.rows();
        for (std::size_t r = pr; r < h.rows(); ++r) {
            if (h(r, col) == 0) continue;
            if (best == h.rows() ||
                boost::multiprecision::abs(h(r, col)) < boost::multiprecision::abs(h(best, col)))
                best = r;
        }
        if (best == h.rows()) continue;  // column already clear below
        h.swap_rows(pr, best);
        u.swap_rows(pr, best);
        for (std::size_t r = pr + 1; r < h.rows(); ++r)
            detail::gcd_rows(h, u, pr, r, col);
        if (h(pr, col) < 0) {
            for (std::size_t c = 0; c < h.cols(); ++c) h(pr, c) = -h(pr, c);
            for (std::size_t c = 0; c < u.cols(); ++c) u(pr, c) = -u(pr, c);
        }
        const Int pivot = h(pr, col);
        for (std::size_t r = 0; r < pr; ++r) {
            const Int q = floor_div(h(r, col), pivot);
            if (q == 0) continue;
            for (std::size_t c = 0; c < h.cols(); ++c) h(r, c) -= q * h(pr, c);
            for (std::size_t c = 0; c < u.cols(); ++c) u(r, c) -= q * u(pr, c);
        }
        ++pr;
    }
    return {std::move(h), std::move(u)};
}

/** Rank over the rationals (= number of nonzero rows of the HNF). */
inline std::size_t rank(const IntMatrix& m) {
    IntMatrix h = hermite_normal_form(m).h;
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t c = 0; c < h.cols(); ++c)
            if (h(i, c) != 0) { zero = false; break; }
        if (!zero) ++r;
    }
    return r;
}

/**
 * Basis of the saturated left kernel lattice {v in Z^rows : v*m = 0},
 * returned in HNF (so the result is canonical for a given m).
 *
 * Rows of the unimodular transform that correspond to zero rows of the HNF
 * span exactly the integer left kernel; re-normalizing them to HNF gives a
 * deterministic basis.
 */
inline IntMatrix left_kernel_basis(const IntMatrix& m) {
    HermiteResult hr = hermite_normal_form(m);
    std::size_t rk = 0;
    for (std::size_t i = 0; i < hr.h.rows(); ++i) {
        bool zero = true;
        for (std::size_t c = 0; c < hr.h.cols(); ++c)
            if (hr.h(i, c) != 0) { zero = false; break; }
        if (!zero) ++rk;
    }
    const std::size_t kdim = m.rows() - rk;
    IntMatrix kernel(kdim, m.rows());
    for (std::size_t i = 0; i < kdim; ++i)
        for (std::size_t c = 0; c < m.rows(); ++c)
            kernel(i, c) = hr.u(rk + i, c);
    return hermite_normal_form(kernel).h;
}

/** Determinant of a square matrix by fraction-free (Bareiss) elimination. */
inline Int determinant(IntMatrix a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap_row = n;
            for (std::size_t r = k + 1; r < n; ++r)
                if (a(r, k) != 0) { swap_row = r; break; }
            if (swap_row == n) return 0;
            a.swap_rows(k, swap_row);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_INT_MATRIX_HPP
