#pragma once

// Certified rational interval arithmetic.
//
// Intervals carry exact rational endpoints and every operation returns an
// interval guaranteed to contain the true value. sqrt and log are the only
// irrational primitives the library ever needs: sqrt via integer square
// roots of scaled values, log via argument reduction x = m * 2^e with
// m in [3/4, 3/2) and the atanh series with an explicit tail bound. Both
// honor a "bits" request: result width <= 2^-bits.

#include "bendlab/rational.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace bendlab {

struct Interval {
    Rational lo, hi;

    Interval() : lo(0), hi(0) {}
    explicit Interval(const Rational& point) : lo(point), hi(point) {}
    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) fail("InvalidInterval", "lower endpoint above upper");
    }

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool is_point() const { return lo == hi; }

    // -1 / +1 when the sign is certified, 0 when the interval straddles or
    // touches zero (undecided for a nonzero true value; exact zero must be
    // established symbolically by the caller).
    int sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

inline Interval operator*(const Interval& a, const Interval& b) {
    Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                    std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline Interval operator*(const Rational& c, const Interval& a) {
    if (c >= 0) return Interval(c * a.lo, c * a.hi);
    return Interval(c * a.hi, c * a.lo);
}

inline Interval recip(const Interval& a) {
    if (a.sign() == 0) fail("IntervalDividesZero", "reciprocal of interval containing 0");
    return Interval(Rational(1) / a.hi, Rational(1) / a.lo);
}

inline Interval operator/(const Interval& a, const Interval& b) { return a * recip(b); }

inline Interval abs(const Interval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return Interval(Rational(0), std::max(-a.lo, a.hi));
}

inline Interval pow_iv(const Interval& a, unsigned e) {
    Interval r{Rational(1)};
    Interval base = a;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// Outward dyadic rounding: cheap endpoint-size control for adaptive loops.
inline Interval round_out(const Interval& a, long bits) {
    Int scale = Int(1) << static_cast<unsigned>(bits);
    Rational lo(floor_int(a.lo * Rational(scale)), scale);
    Rational hi(ceil_int(a.hi * Rational(scale)), scale);
    return Interval(lo, hi);
}

inline std::string to_string(const Interval& a) {
    return "[" + format_rational(a.lo) + ", " + format_rational(a.hi) + "]";
}

// --- certified square root -------------------------------------------------

// Encloses sqrt(x) for x >= 0 with width <= 2^-bits.
inline Interval sqrt_point(const Rational& x, long bits) {
    if (x < 0) fail("NegativeDiscriminant", "sqrt of negative rational");
    if (x == 0) return Interval(Rational(0));
    // sqrt(p/q) = sqrt(p*q)/q; scale by 4^bits so the integer sqrt's unit
    // error lands below the requested width.
    const Int& p = num(x);
    const Int& q = den(x);
    Int scaled = p * q << static_cast<unsigned>(2 * bits);
    Int s = isqrt_floor(scaled);
    Int d = q << static_cast<unsigned>(bits);
    return Interval(Rational(s, d), Rational(s + 1, d));
}

inline Interval sqrt_iv(const Interval& a, long bits) {
    if (a.lo < 0) fail("NegativeDiscriminant", "sqrt of interval reaching below 0");
    return Interval(sqrt_point(a.lo, bits).lo, sqrt_point(a.hi, bits).hi);
}

namespace detail {

// atanh(z) = sum z^(2j+1)/(2j+1) for |z| < 1, enclosed with an exact
// geometric tail bound; |z| <= 1/3 in all uses, so convergence is fast.
inline Interval atanh_enclosure(const Rational& z, long bits) {
    Rational z2 = z * z;
    Rational zpow = z;  // z^(2j+1)
    Rational sum = 0;
    Rational target = pow2(-(bits + 1));
    for (long j = 0;; ++j) {
        sum += zpow / Rational(2 * j + 1);
        zpow *= z2;
        // tail <= |z|^(2j+3) / ((2j+3)(1-z^2))
        Rational tail = boost::multiprecision::abs(zpow) /
                        (Rational(2 * j + 3) * (Rational(1) - z2));
        if (tail <= target) return Interval(sum - tail, sum + tail);
        if (j > 4 * bits + 64) fail("InternalError", "atanh series failed to converge");
    }
}

inline Interval log2_enclosure(long bits) {
    // log 2 = 2 atanh(1/3)
    Interval a = atanh_enclosure(Rational(1, 3), bits + 2);
    return Interval(2 * a.lo, 2 * a.hi);
}

}  // namespace detail

// Encloses log(x) for x > 0 with width <= 2^-bits.
inline Interval log_point(const Rational& x, long bits) {
    if (x <= 0) fail("LogDomain", "log of nonpositive rational");
    // Reduce to x = m * 2^e, m in [3/4, 3/2).
    long e = bit_length(num(x)) - bit_length(den(x));
    Rational m = x * pow2(-e);
    if (m < Rational(3, 4)) {
        m *= 2;
        e -= 1;
    } else if (m >= Rational(3, 2)) {
        m /= 2;
        e += 1;
    }
    long guard = 8;
    long ebits = bit_length(Int(e < 0 ? -e : e));
    long w = bits + guard + ebits;
    // Round m down to a w-bit dyadic so the series works on small numbers;
    // log m - log md <= (m - md)/md <= 2^(1-w) for md >= 3/4 - 2^-w.
    Int scale = Int(1) << static_cast<unsigned>(w);
    Rational md(floor_int(m * Rational(scale)), scale);
    Rational z = (md - 1) / (md + 1);  // |z| <= 1/5
    Interval series = detail::atanh_enclosure(z, w + 2);
    Interval log_md(2 * series.lo, 2 * series.hi);
    Interval log_m(log_md.lo, log_md.hi + pow2(1 - w));
    if (e == 0) return log_m;
    Interval l2 = detail::log2_enclosure(w);
    return log_m + Rational(e) * l2;
}

// Encloses log over an interval of positive numbers.
inline Interval log_iv(const Interval& a, long bits) {
    if (a.lo <= 0) fail("LogDomain", "log of interval reaching 0");
    return Interval(log_point(a.lo, bits).lo, log_point(a.hi, bits).hi);
}

// Gaussian elimination on an interval system A x = b. Returns enclosures of
// the solution components, or nothing when some pivot straddles zero (caller
// refines the inputs and retries). For inputs enclosing a nonsingular exact
// system, tight enough enclosures always succeed.
inline std::optional<std::vector<Interval>> linear_solve_iv(
    std::vector<std::vector<Interval>> a, std::vector<Interval> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r)
            if (a[r][col].sign() != 0) {
                pivot = r;
                break;
            }
        if (pivot == n) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col].lo == 0 && a[r][col].hi == 0) continue;
            Interval factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - factor * a[col][c];
            b[r] = b[r] - factor * b[col];
        }
    }
    std::vector<Interval> x(n, Interval(Rational(0)));
    for (std::size_t row = n; row-- > 0;) {
        Interval acc = b[row];
        for (std::size_t c = row + 1; c < n; ++c) acc = acc - a[row][c] * x[c];
        x[row] = acc / a[row][row];
    }
    return x;
}

}  // namespace bendlab
