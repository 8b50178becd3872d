/**
 * Shared arithmetic types and error categories.
 *
 * Everything downstream computes over arbitrary-precision integers;
 * no floating point is used anywhere in the library.
 */

#ifndef QUIVERTORIC_NUMERIC_HPP
#define QUIVERTORIC_NUMERIC_HPP

#include <stdexcept>
#include <string>
#include <boost/multiprecision/cpp_int.hpp>

namespace quivertoric {

using Int = boost::multiprecision::cpp_int;

/** Thrown by parse() on malformed input text; carries a 1-based line number. */
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/** Thrown when an operation requiring a valid quiver receives an invalid one. */
class InvalidQuiverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Thrown when an operation's precondition fails (e.g. contracting a non-contractible arrow). */
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Floor division: largest q with q*b <= a. Requires b > 0. */
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

/** gcd of |a| and |b|; gcd(0,0) = 0. */
inline Int gcd(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(a, b);
}

/** Extended gcd: returns (g, s, t) with s*a + t*b = g = gcd(a,b) >= 0. */
inline void extended_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
    Int old_r = a, r = b;
    Int old_s = 1, s_cur = 0;
    Int old_t = 0, t_cur = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s_cur; old_s = s_cur; s_cur = tmp;
        tmp = old_t - q * t_cur; old_t = t_cur; t_cur = tmp;
    }
    g = old_r; s = old_s; t = old_t;
    if (g < 0) { g = -g; s = -s; t = -t; }
}

}  // namespace quivertoric

#endif  // QUIVERTORIC_NUMERIC_HPP
