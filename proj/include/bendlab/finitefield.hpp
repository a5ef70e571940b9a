#pragma once

// Small finite fields F_q with q = p or p^2, reduction of extension-field
// data modulo a rational prime (images of the base-field generator and of s
// found by exhaustive root search), and exact breadth-first closure of the
// generated matrix group using canonical packed keys.

#include "bendlab/matrix.hpp"
#include "bendlab/numfield.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace bendlab {

// F_p (deg 1) or F_{p^2} = F_p[y]/(y^2 + g1 y + g0). Elements are the
// indices c0 + c1*p with digits c0, c1 < p.
class SmallField {
  public:
    explicit SmallField(long p) : p_(p), q_(p), g1_(0), g0_(0) {}
    SmallField(long p, long g1, long g0) : p_(p), q_(p * p), g1_(g1 % p), g0_(g0 % p) {
        if (g1_ < 0) g1_ += p;
        if (g0_ < 0) g0_ += p;
    }

    long p() const { return p_; }
    long q() const { return q_; }
    bool quadratic() const { return q_ != p_; }

    long add(long a, long b) const {
        return from_digits((digit0(a) + digit0(b)) % p_, (digit1(a) + digit1(b)) % p_);
    }
    long neg(long a) const {
        return from_digits((p_ - digit0(a)) % p_, (p_ - digit1(a)) % p_);
    }
    long sub(long a, long b) const { return add(a, neg(b)); }
    long mul(long a, long b) const {
        long a0 = digit0(a), a1 = digit1(a), b0 = digit0(b), b1 = digit1(b);
        long c0 = a0 * b0 % p_, c1 = (a0 * b1 + a1 * b0) % p_, c2 = a1 * b1 % p_;
        // y^2 = -g1 y - g0
        long r0 = (c0 + (p_ - g0_) * c2) % p_;
        long r1 = (c1 + (p_ - g1_) * c2) % p_;
        return from_digits(r0, r1);
    }
    long inv(long a) const {
        if (a == 0) fail("InternalError", "inverse of zero in a finite field");
        for (long b = 1; b < q_; ++b)
            if (mul(a, b) == 1) return b;
        fail("InternalError", "finite field inverse not found");
    }

    // reduce an exact rational; the denominator must be a unit mod p
    long from_rational(const Rational& r) const {
        Int n = num(r) % p_, d = den(r) % p_;
        if (n < 0) n += p_;
        if (d == 0)
            fail("BadReduction", "denominator of " + format_rational(r) + " is divisible by " +
                                     std::to_string(p_));
        return mul(static_cast<long>(n), inv(static_cast<long>(d)));
    }

    // value of a rational-coefficient polynomial at a field element
    long eval_poly(const QPoly& f, long x) const {
        long acc = 0;
        for (std::size_t i = f.c.size(); i-- > 0;) acc = add(mul(acc, x), from_rational(f.c[i]));
        return acc;
    }

    std::string show(long a) const {
        if (!quadratic()) return std::to_string(a);
        long a0 = digit0(a), a1 = digit1(a);
        if (a1 == 0) return std::to_string(a0);
        return std::to_string(a0) + "+" + std::to_string(a1) + "y";
    }

  private:
    long digit0(long a) const { return a % p_; }
    long digit1(long a) const { return a / p_; }
    long from_digits(long c0, long c1) const { return c0 + c1 * p_; }

    long p_, q_, g1_, g0_;
};

inline bool is_prime_long(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Reduction of a quadratic extension modulo p: theta goes to a root of the
// base minimal polynomial, s to a root of x^2 - u x + 1, extending to F_{p^2}
// when needed. An unachievable reduction within q <= p^2 that is a size
// matter (not a divisibility failure) comes back as an obstruction string.
// ---------------------------------------------------------------------------
struct ReductionContext {
    SmallField fq;
    long p;
    long theta;  // image of the base-field generator
    long s_img;  // image of s

    long reduce_base(const AlgebraicNumber& a) const {
        long acc = 0;
        const auto& c = a.coords();
        for (std::size_t i = c.size(); i-- > 0;)
            acc = fq.add(fq.mul(acc, theta), fq.from_rational(c[i]));
        return acc;
    }
    long reduce_ext(const ExtElement& x) const {
        return fq.add(reduce_base(x.a()), fq.mul(reduce_base(x.b()), s_img));
    }
};

struct ReductionOutcome {
    std::optional<ReductionContext> ctx;
    std::string obstruction;  // set when ctx is empty
};

inline ReductionOutcome make_reduction(const QuadExtension& ext, long p) {
    if (!is_prime_long(p)) fail("BadReduction", std::to_string(p) + " is not prime");
    const NumberField& F = ext.base();
    const QPoly& f = F.min_poly();

    SmallField fp(p);
    // image of theta in F_p?
    std::optional<long> theta_p;
    for (long r = 0; r < p; ++r)
        if (fp.eval_poly(f, r) == 0) {
            theta_p = r;
            break;
        }

    auto s_poly_root = [](const SmallField& k, long ubar) -> std::optional<long> {
        // root of x^2 - ubar x + 1
        for (long r = 0; r < k.q(); ++r)
            if (k.add(k.sub(k.mul(r, r), k.mul(ubar, r)), 1 % k.p()) == 0) return r;
        return std::nullopt;
    };

    auto reduce_base_in = [&](const SmallField& k, long theta) {
        long acc = 0;
        const auto& c = ext.trace().coords();
        for (std::size_t i = c.size(); i-- > 0;) acc = k.add(k.mul(acc, theta), k.from_rational(c[i]));
        return acc;
    };

    if (theta_p) {
        long ubar = reduce_base_in(fp, *theta_p);
        if (auto s0 = s_poly_root(fp, ubar)) {
            if (p > 9)
                return {std::nullopt, "q = " + std::to_string(p) + " exceeds the q <= 9 bound"};
            return {ReductionContext{fp, p, *theta_p, *s0}, ""};
        }
        // F_{p^2} with modulus exactly x^2 - ubar x + 1 (irreducible here)
        if (p * p > 9)
            return {std::nullopt, "q = " + std::to_string(p * p) + " exceeds the q <= 9 bound"};
        SmallField fq(p, (p - ubar) % p, 1 % p);
        return {ReductionContext{fq, p, *theta_p, p /* the class of y */}, ""};
    }

    // theta needs a quadratic extension: first monic irreducible y^2 + a y + b
    if (p * p > 9)
        return {std::nullopt,
                "base generator needs q = " + std::to_string(p * p) + " > 9"};
    std::optional<SmallField> fq;
    for (long a = 0; a < p && !fq; ++a)
        for (long b = 0; b < p && !fq; ++b) {
            bool has_root = false;
            for (long r = 0; r < p; ++r)
                if ((r * r + a * r + b) % p == 0) has_root = true;
            if (!has_root) fq = SmallField(p, a, b);
        }
    if (!fq) fail("InternalError", "no irreducible quadratic modulo " + std::to_string(p));
    std::optional<long> theta_q;
    for (long r = 0; r < fq->q(); ++r)
        if (fq->eval_poly(f, r) == 0) {
            theta_q = r;
            break;
        }
    if (!theta_q)
        fail("BadReduction", "defining polynomial has no root modulo " + std::to_string(p) +
                                 " in F_p or F_{p^2}");
    long ubar = reduce_base_in(*fq, *theta_q);
    if (auto s0 = s_poly_root(*fq, ubar))
        return {ReductionContext{*fq, p, *theta_q, *s0}, ""};
    return {std::nullopt, "s needs a degree-4 extension over F_" + std::to_string(p) +
                              " (q = p^4 > 9)"};
}

// ---------------------------------------------------------------------------
// Matrices over F_q, canonical packed keys, BFS closure
// ---------------------------------------------------------------------------
struct FqMatrix {
    long m = 0;
    std::array<std::uint8_t, 16> e{};  // row-major, entries < q <= 9

    std::uint64_t key() const {
        std::uint64_t k = 0;
        for (long i = 0; i < m * m; ++i) k = (k << 4) | e[i];
        return k;
    }
};

inline FqMatrix fq_identity(const SmallField& fq, long m) {
    FqMatrix r;
    r.m = m;
    for (long i = 0; i < m; ++i) r.e[i * m + i] = static_cast<std::uint8_t>(1 % fq.p());
    return r;
}

inline FqMatrix fq_mul(const SmallField& fq, const FqMatrix& a, const FqMatrix& b) {
    FqMatrix r;
    r.m = a.m;
    for (long i = 0; i < a.m; ++i)
        for (long j = 0; j < a.m; ++j) {
            long acc = 0;
            for (long k = 0; k < a.m; ++k) acc = fq.add(acc, fq.mul(a.e[i * a.m + k], b.e[k * a.m + j]));
            r.e[i * a.m + j] = static_cast<std::uint8_t>(acc);
        }
    return r;
}

// Gaussian inverse; the input must be invertible over F_q.
inline std::optional<FqMatrix> fq_inverse(const SmallField& fq, const FqMatrix& a) {
    long m = a.m;
    std::array<long, 32> w{};  // [A | I] with rows of length 2m
    for (long i = 0; i < m; ++i) {
        for (long j = 0; j < m; ++j) w[i * 2 * m + j] = a.e[i * m + j];
        w[i * 2 * m + m + i] = 1 % fq.p();
    }
    for (long col = 0; col < m; ++col) {
        long piv = -1;
        for (long i = col; i < m; ++i)
            if (w[i * 2 * m + col] != 0) {
                piv = i;
                break;
            }
        if (piv == -1) return std::nullopt;
        if (piv != col)
            for (long j = 0; j < 2 * m; ++j) std::swap(w[piv * 2 * m + j], w[col * 2 * m + j]);
        long iv = fq.inv(w[col * 2 * m + col]);
        for (long j = 0; j < 2 * m; ++j) w[col * 2 * m + j] = fq.mul(w[col * 2 * m + j], iv);
        for (long i = 0; i < m; ++i) {
            if (i == col || w[i * 2 * m + col] == 0) continue;
            long f0 = w[i * 2 * m + col];
            for (long j = 0; j < 2 * m; ++j)
                w[i * 2 * m + j] = fq.sub(w[i * 2 * m + j], fq.mul(f0, w[col * 2 * m + j]));
        }
    }
    FqMatrix r;
    r.m = m;
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) r.e[i * m + j] = static_cast<std::uint8_t>(w[i * 2 * m + m + j]);
    return r;
}

struct ClosureResult {
    unsigned long long order = 0;
    bool exceeded = false;  // BFS stopped at the cap
};

inline ClosureResult bfs_closure(const SmallField& fq, const std::vector<FqMatrix>& gens,
                                 unsigned long long cap) {
    std::vector<FqMatrix> step = gens;
    for (const auto& g : gens) {
        auto gi = fq_inverse(fq, g);
        if (!gi) fail("BadReduction", "generator is singular modulo p");
        step.push_back(*gi);
    }
    FqMatrix id = fq_identity(fq, gens.empty() ? 1 : gens[0].m);
    std::unordered_set<std::uint64_t> seen;
    std::deque<FqMatrix> frontier;
    seen.insert(id.key());
    frontier.push_back(id);
    while (!frontier.empty()) {
        FqMatrix cur = frontier.front();
        frontier.pop_front();
        for (const auto& g : step) {
            FqMatrix nxt = fq_mul(fq, cur, g);
            if (seen.insert(nxt.key()).second) {
                if (seen.size() > cap) return {seen.size(), true};
                frontier.push_back(nxt);
            }
        }
    }
    return {seen.size(), false};
}

// |SL(m, q)| = q^{m(m-1)/2} * prod_{k=2}^{m} (q^k - 1)
inline unsigned long long sl_order(long m, long q) {
    unsigned long long r = 1;
    for (long i = 0; i < m * (m - 1) / 2; ++i) r *= static_cast<unsigned long long>(q);
    unsigned long long qk = q;
    for (long k = 2; k <= m; ++k) {
        qk *= static_cast<unsigned long long>(q);
        r *= (qk - 1);
    }
    return r;
}

}  // namespace bendlab
