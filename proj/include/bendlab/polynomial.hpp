#pragma once

// Dense univariate polynomials over an exact field K, plus the rational-
// coefficient toolkit the number-field layer needs: Sturm sequences, real
// root isolation and refinement, resultants, Yun's square-free decomposition
// and exact rational-root extraction.
//
// Coefficients are stored in ascending order and kept trimmed, so degree()
// is size-1 and the zero polynomial has empty storage. K must provide field
// arithmetic plus the customization points k_is_zero / k_zero_like /
// k_one_like (ADL-found; defined below for Rational, and by the number-field
// headers for their element types).

#include "bendlab/interval.hpp"
#include "bendlab/rational.hpp"

#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

namespace bendlab {

inline bool k_is_zero(const Rational& x) { return x == 0; }
inline Rational k_zero_like(const Rational&) { return Rational(0); }
inline Rational k_one_like(const Rational&) { return Rational(1); }

template <typename K>
struct Poly {
    std::vector<K> c;  // ascending; trimmed so c.empty() or c.back() != 0

    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && k_is_zero(c.back())) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }  // -1 for 0
    const K& lc() const { return c.back(); }

    K eval(const K& x) const {
        if (c.empty()) return k_zero_like(x);
        K r = c.back();
        for (auto it = c.rbegin() + 1; it != c.rend(); ++it) r = r * x + *it;
        return r;
    }
};

template <typename K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) {
    std::vector<K> r = a.c.size() >= b.c.size() ? a.c : b.c;
    const std::vector<K>& s = a.c.size() >= b.c.size() ? b.c : a.c;
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = r[i] + s[i];
    return Poly<K>(std::move(r));
}

template <typename K>
Poly<K> operator-(const Poly<K>& a) {
    std::vector<K> r = a.c;
    for (auto& x : r) x = k_zero_like(x) - x;
    return Poly<K>(std::move(r));
}

template <typename K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) {
    return a + (-b);
}

template <typename K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<K>();
    std::vector<K> r(a.c.size() + b.c.size() - 1, k_zero_like(a.c[0]));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
    return Poly<K>(std::move(r));
}

template <typename K>
Poly<K> operator*(const K& s, const Poly<K>& a) {
    std::vector<K> r = a.c;
    for (auto& x : r) x = s * x;
    return Poly<K>(std::move(r));
}

template <typename K>
bool operator==(const Poly<K>& a, const Poly<K>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!k_is_zero(a.c[i] - b.c[i])) return false;
    return true;
}

// Euclidean division by a nonzero divisor (K a field).
template <typename K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
    if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly<K>(), a};
    std::vector<K> rem = a.c;
    std::vector<K> quo(a.c.size() - b.c.size() + 1, k_zero_like(b.lc()));
    for (long i = static_cast<long>(rem.size()) - 1; i >= b.degree(); --i) {
        if (k_is_zero(rem[i])) continue;
        K q = rem[i] / b.lc();
        quo[i - b.degree()] = q;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            rem[i - b.degree() + j] = rem[i - b.degree() + j] - q * b.c[j];
    }
    return {Poly<K>(std::move(quo)), Poly<K>(std::move(rem))};
}

template <typename K>
Poly<K> derivative(const Poly<K>& a) {
    if (a.degree() < 1) return Poly<K>();
    std::vector<K> r(a.c.size() - 1, k_zero_like(a.c[0]));
    K k = k_one_like(a.c[0]);
    for (std::size_t i = 1; i < a.c.size(); ++i) {
        r[i - 1] = k * a.c[i];
        k = k + k_one_like(a.c[0]);
    }
    return Poly<K>(std::move(r));
}

template <typename K>
Poly<K> monic(const Poly<K>& a) {
    if (a.is_zero()) return a;
    K inv = k_one_like(a.lc()) / a.lc();
    return inv * a;
}

// Monic gcd; remainders are monicized each round to keep coefficients tame.
template <typename K>
Poly<K> gcd_monic(Poly<K> a, Poly<K> b) {
    a = monic(a);
    b = monic(b);
    while (!b.is_zero()) {
        Poly<K> r = divmod(a, b).second;
        a = b;
        b = monic(r);
    }
    return a;
}

// Yun's square-free decomposition (characteristic 0): returns monic pairwise
// coprime square-free g_i with f ~ prod g_i^i, listed as (g_i, i) for the i
// that actually occur.
template <typename K>
std::vector<std::pair<Poly<K>, int>> yun_squarefree(const Poly<K>& f) {
    std::vector<std::pair<Poly<K>, int>> out;
    if (f.degree() < 1) return out;
    Poly<K> fp = derivative(f);
    Poly<K> a = gcd_monic(f, fp);
    Poly<K> b = divmod(monic(f), a).first;
    Poly<K> c = divmod(fp, a).first;
    Poly<K> d = c - derivative(b);
    for (int i = 1; b.degree() >= 1; ++i) {
        Poly<K> g = gcd_monic(b, d);
        if (g.degree() >= 1) out.emplace_back(g, i);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - derivative(b);
    }
    return out;
}

// --- rational-coefficient toolkit -------------------------------------------

using QPoly = Poly<Rational>;

inline Interval eval_iv(const QPoly& f, const Interval& x) {
    Interval r{Rational(0)};
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = r * x + Interval(*it);
    return r;
}

// Resultant over the rationals via the Euclidean remainder recursion.
inline Rational resultant(const QPoly& f, const QPoly& g) {
    if (f.is_zero() || g.is_zero()) return Rational(0);
    if (f.degree() == 0) return pow_rational(f.c[0], g.degree());
    if (g.degree() == 0) return pow_rational(g.c[0], f.degree());
    QPoly r = divmod(f, g).second;
    long m = f.degree(), n = g.degree();
    Rational sgn = (m * n) % 2 == 0 ? Rational(1) : Rational(-1);
    if (r.is_zero()) return Rational(0);
    return sgn * pow_rational(g.lc(), m - r.degree()) * resultant(g, r);
}

template <typename K>
std::vector<Poly<K>> sturm_chain(const Poly<K>& f) {
    std::vector<Poly<K>> chain;
    chain.push_back(f);
    Poly<K> d = derivative(f);
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        const Poly<K>& a = chain[chain.size() - 2];
        const Poly<K>& b = chain.back();
        Poly<K> r = divmod(a, b).second;
        if (r.is_zero()) break;
        Poly<K> next = -r;
        // Only positive rational scalings preserve the Sturm sign pattern
        // (for general K the sign of lc depends on the embedding, so the
        // remainder is kept as-is there).
        if constexpr (std::is_same_v<K, Rational>) {
            Rational l = next.lc();
            if (l < 0) l = -l;
            next = (Rational(1) / l) * next;
        }
        chain.push_back(std::move(next));
    }
    return chain;
}

inline int count_sign_changes(const std::vector<int>& signs) {
    int changes = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

// sign_eval(p, x) must return the exact sign of p(x); for K = Rational this
// is plain evaluation, for field elements the adaptive embedding sign.
template <typename K, typename SignEval>
int sturm_count(const std::vector<Poly<K>>& chain, const Rational& a, const Rational& b,
                SignEval sign_eval) {
    std::vector<int> sa, sb;
    sa.reserve(chain.size());
    sb.reserve(chain.size());
    for (const auto& p : chain) {
        sa.push_back(sign_eval(p, a));
        sb.push_back(sign_eval(p, b));
    }
    return count_sign_changes(sa) - count_sign_changes(sb);
}

// Number of real roots in (a, b] of a square-free rational polynomial.
inline int sturm_count_q(const std::vector<QPoly>& chain, const Rational& a, const Rational& b) {
    return sturm_count(chain, a, b,
                       [](const QPoly& p, const Rational& x) { return sign_of(p.eval(x)); });
}

// Strict bound: every real root lies in (-B, B).
inline Rational cauchy_bound(const QPoly& f) {
    if (f.degree() < 1) return Rational(1);
    Rational m(0);
    for (std::size_t i = 0; i + 1 < f.c.size(); ++i) {
        Rational a = boost::multiprecision::abs(f.c[i] / f.lc());
        if (a > m) m = a;
    }
    return m + 2;
}

// Exact rational roots of a rational polynomial, ascending, via the rational
// root theorem on the primitive integer scaling. Returns each root once.
inline std::vector<Rational> rational_roots(const QPoly& f) {
    std::vector<Rational> roots;
    if (f.degree() < 1) return roots;
    // scale to integer coefficients
    Int lcm = 1;
    for (const auto& a : f.c) lcm = boost::multiprecision::lcm(lcm, den(a));
    std::vector<Int> ic(f.c.size());
    for (std::size_t i = 0; i < f.c.size(); ++i) ic[i] = num(f.c[i]) * (lcm / den(f.c[i]));
    // strip zero roots
    std::size_t shift = 0;
    while (shift < ic.size() - 1 && ic[shift] == 0) ++shift;
    if (shift > 0) roots.push_back(Rational(0));
    Int c0 = boost::multiprecision::abs(ic[shift]);
    Int cl = boost::multiprecision::abs(ic.back());
    auto divisors = [](const Int& v) {
        std::vector<Int> ds;
        for (Int d = 1; d * d <= v; ++d)
            if (v % d == 0) {
                ds.push_back(d);
                ds.push_back(v / d);
            }
        return ds;
    };
    // Desk-scale guard: coefficient divisors beyond ~10^12 are not enumerable.
    if (c0 <= Int(1000000000000LL) && cl <= Int(1000000000000LL)) {
        for (const Int& p : divisors(c0))
            for (const Int& q : divisors(cl))
                for (int s : {1, -1}) {
                    Rational cand(s * p, q);
                    if (f.eval(cand) == 0) roots.push_back(cand);
                }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// Isolating intervals for ALL real roots of a nonzero rational polynomial,
// ascending and pairwise disjoint. Exact rational roots come back as point
// intervals; the others as open intervals with a sign change at the ends.
// Multiplicities are erased (the square-free part is isolated).
inline std::vector<Interval> isolate_real_roots(const QPoly& f_in) {
    if (f_in.is_zero()) fail("InvalidPolynomial", "cannot isolate roots of the zero polynomial");
    QPoly f = monic(f_in);
    if (f.degree() == 0) return {};
    // square-free part
    QPoly g = divmod(f, gcd_monic(f, derivative(f))).first;
    // pull out exact rational roots so bisection never lands on a root
    std::vector<Interval> points;
    for (const Rational& r : rational_roots(g)) {
        points.push_back(Interval(r));
        g = divmod(g, QPoly({-r, Rational(1)})).first;
    }
    std::vector<Interval> out = points;
    if (g.degree() >= 1) {
        auto chain = sturm_chain(g);
        Rational bound = cauchy_bound(g);
        // g has no rational roots any more, so no rational split point can be
        // a root and sign changes at endpoints are automatic for count 1.
        std::function<void(Rational, Rational, int)> split = [&](Rational a, Rational b, int count) {
            if (count == 0) return;
            if (count == 1) {
                Interval iv(a, b);
                // keep isolating intervals disjoint from the exact point roots
                for (const Interval& pt : points)
                    while (iv.lo < pt.lo && pt.lo < iv.hi) {
                        Rational m = (iv.lo + iv.hi) / 2;
                        if (sign_of(g.eval(iv.lo)) == sign_of(g.eval(m)))
                            iv = Interval(m, iv.hi);
                        else
                            iv = Interval(iv.lo, m);
                    }
                out.push_back(iv);
                return;
            }
            Rational m = (a + b) / 2;
            int left = sturm_count_q(chain, a, m);
            split(a, m, left);
            split(m, b, count - left);
        };
        split(-bound, bound, sturm_count_q(chain, -bound, bound));
    }
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    return out;
}

// Shrinks an isolating interval of f (sign change or exact point) to width
// <= 2^-bits by bisection. The interval must contain exactly one root.
inline Interval refine_root(const QPoly& f, Interval iv, long bits) {
    if (iv.is_point()) return iv;
    Rational lo = iv.lo, hi = iv.hi;
    int slo = sign_of(f.eval(lo));
    int shi = sign_of(f.eval(hi));
    if (slo == 0) return Interval(lo);
    if (shi == 0) return Interval(hi);
    if (slo == shi) fail("InternalError", "refine_root: no sign change on isolating interval");
    Rational w = pow2(-bits);
    while (hi - lo > w) {
        Rational m = (lo + hi) / 2;
        int sm = sign_of(f.eval(m));
        if (sm == 0) return Interval(m);
        if (sm == slo)
            lo = m;
        else
            hi = m;
    }
    return Interval(lo, hi);
}

}  // namespace bendlab
