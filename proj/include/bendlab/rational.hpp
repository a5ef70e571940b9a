#pragma once

// Exact integer / rational scalars and the shared error type.
//
// All arithmetic in the library bottoms out here: boost::multiprecision
// header-only big integers and canonical rationals. Every throwing code path
// uses Error, which carries a stable machine-readable code string that the
// CLI mirrors into its JSON error output.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace bendlab {

// Expression templates are disabled so operators return plain values; the
// interval and polynomial layers lean on std::min/max and temporaries.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

struct Error : std::runtime_error {
    std::string code;

    Error(std::string c, const std::string& what)
        : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw Error(code, what);
}

inline Int num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rational& x) { return boost::multiprecision::denominator(x); }

inline int sign_of(const Rational& x) { return x.sign(); }
inline int sign_of(const Int& x) { return x.sign(); }

// Floor division of integers (quotient rounded toward -inf).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;            // truncates toward zero
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_int(const Rational& x) { return floor_div(num(x), den(x)); }

inline Int ceil_int(const Rational& x) { return -floor_int(-x); }

// Nearest integer with ties broken downward: floor(x + 1/2).
inline Int round_half_down(const Rational& x) { return floor_int(x + Rational(1, 2)); }

inline Int pow_int(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) fail("DivisionByZero", "0 raised to a negative power");
    unsigned long a = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rational r(pow_int(num(base), a), pow_int(den(base), a));
    if (e < 0) r = Rational(1) / r;
    return r;
}

// 2^e as a rational, e may be negative.
inline Rational pow2(long e) {
    if (e >= 0) return Rational(Int(1) << static_cast<unsigned>(e));
    return Rational(1, Int(1) << static_cast<unsigned>(-e));
}

// floor(sqrt(x)) for x >= 0.
inline Int isqrt_floor(const Int& x) {
    if (x < 0) fail("NegativeDiscriminant", "isqrt of negative integer");
    return boost::multiprecision::sqrt(x);
}

inline bool is_perfect_square(const Int& x, Int* root = nullptr) {
    if (x < 0) return false;
    Int r = boost::multiprecision::sqrt(x);
    if (r * r != x) return false;
    if (root) *root = r;
    return true;
}

// Number of bits in |x| (0 -> 0). msb() is the index of the highest set bit.
inline long bit_length(const Int& x) {
    if (x == 0) return 0;
    return static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(x))) + 1;
}

inline std::string format_rational(const Rational& x) {
    std::string s = num(x).str();
    if (den(x) != 1) s += "/" + den(x).str();
    return s;
}

// Strict "p/q" grammar: optional sign, digits, optional "/digits" with
// positive denominator. Canonicalization (gcd reduction, sign on numerator)
// is done by cpp_rational itself.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&]() { fail("ParseError", "not a rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t digits_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits_start) bad();
    Int p(s.substr(0, i));
    if (i == s.size()) return Rational(p);
    if (s[i] != '/') bad();
    ++i;
    std::size_t den_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == den_start || i != s.size()) bad();
    Int q(s.substr(den_start));
    if (q == 0) fail("ParseError", "zero denominator in '" + s + "'");
    return Rational(p, q);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace bendlab
