#pragma once

// Exact arithmetic in a totally real number field F = Q[x]/(f) and in its
// quadratic extension L = F(s) with s^2 = u*s - 1.
//
// Elements of F are reduced power-basis coefficient vectors over the
// rationals. Real embeddings are certified rational intervals obtained by
// refining isolating intervals of the roots of f; the *identity* embedding is
// a distinguished root (public place index 0, remaining places follow in
// ascending root order). Sign queries are decided by adaptive refinement and
// are exact: a nonzero reduced element can never evaluate to zero at a root
// of the irreducible f, so refinement terminates; exact zero is a symbolic
// coefficient check, never a numeric one.
//
// L is always handled relative to F (degree-2 tower). The Galois involution
// is tau(a + b s) = (a + b u) - b s, i.e. tau(s) = u - s = 1/s.

#include "bendlab/interval.hpp"
#include "bendlab/polynomial.hpp"
#include "bendlab/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bendlab {

class AlgebraicNumber;

namespace detail {

struct NumberFieldData {
    QPoly f;                      // monic, integer coefficients, irreducible, totally real
    std::vector<Interval> roots;  // isolating intervals, ascending, pairwise disjoint
    int identity = 0;             // index into roots of the identity embedding
    std::string label;
};

// Refinement cap for adaptive sign decisions; reaching it means a bug, not
// bad luck, because nonzero values are bounded away from zero.
constexpr long kSignBitsCap = 1L << 22;

}  // namespace detail

class NumberField {
  public:
    // identity_root indexes the ascending real-root list; -1 picks the
    // largest root (the natural choice for the worked fields here).
    explicit NumberField(const QPoly& min_poly, int identity_root = -1,
                         std::string label = std::string()) {
        auto d = std::make_shared<detail::NumberFieldData>();
        d->f = monic_integer_checked(min_poly);
        d->label = std::move(label);
        long deg = d->f.degree();
        if (deg < 1) fail("InvalidPolynomial", "minimal polynomial must have degree >= 1");
        validate_irreducible(d->f);
        d->roots = isolate_real_roots(d->f);
        if (static_cast<long>(d->roots.size()) != deg)
            fail("NotTotallyReal", "minimal polynomial has " + std::to_string(d->roots.size()) +
                                       " real roots, degree is " + std::to_string(deg));
        if (identity_root == -1) identity_root = static_cast<int>(deg) - 1;
        if (identity_root < 0 || identity_root >= deg)
            fail("InvalidPlace", "identity root index out of range");
        d->identity = identity_root;
        d_ = std::move(d);
    }

    long degree() const { return d_->f.degree(); }
    long places() const { return degree(); }
    const QPoly& min_poly() const { return d_->f; }
    const std::string& label() const { return d_->label; }
    int identity_root_index() const { return d_->identity; }

    // Public place 0 is the identity embedding; places 1..d-1 are the other
    // roots in ascending order.
    int root_index(int place) const {
        if (place < 0 || place >= places())
            fail("InvalidPlace", "place index out of range");
        if (place == 0) return d_->identity;
        int idx = place - 1;
        if (idx >= d_->identity) ++idx;
        return idx;
    }

    // Certified enclosure of the root at the given public place.
    Interval root_box(int place, long bits) const {
        return refine_root(d_->f, d_->roots[root_index(place)], bits);
    }

    bool same(const NumberField& o) const {
        if (d_ == o.d_) return true;
        return d_->f == o.d_->f && d_->identity == o.d_->identity;
    }

    inline AlgebraicNumber zero() const;
    inline AlgebraicNumber one() const;
    inline AlgebraicNumber gen() const;  // theta, the class of x
    inline AlgebraicNumber from_rational(const Rational& r) const;
    inline AlgebraicNumber element(std::vector<Rational> coords) const;

  private:
    static QPoly monic_integer_checked(const QPoly& f) {
        if (f.is_zero() || f.lc() != 1)
            fail("InvalidPolynomial", "minimal polynomial must be monic");
        for (const auto& c : f.c)
            if (den(c) != 1)
                fail("InvalidPolynomial", "minimal polynomial must have integer coefficients");
        return f;
    }

    // Exact for degree <= 4 (rational roots + quadratic-factor search);
    // for larger degrees: no rational roots and square-free, which every
    // operation downstream actually relies on.
    static void validate_irreducible(const QPoly& f) {
        long deg = f.degree();
        if (deg == 1) return;
        if (gcd_monic(f, derivative(f)).degree() > 0)
            fail("ReduciblePolynomial", "minimal polynomial has repeated factors");
        if (!rational_roots(f).empty())
            fail("ReduciblePolynomial", "minimal polynomial has a rational root");
        if (deg <= 3 || deg > 4) return;
        // degree 4: search for a monic quadratic factor x^2 + bx + c with
        // 2b, c rational of bounded shape via factoring over Z (Gauss): any
        // factorization has integer coefficients, so enumerate divisors of
        // the constant term c0 = c * c' and match.
        Int c0 = num(f.c[0]);
        if (c0 == 0) fail("ReduciblePolynomial", "zero constant term");
        Int a3 = num(f.c[3]), a2 = num(f.c[2]), a1 = num(f.c[1]);
        Int limit = boost::multiprecision::abs(c0);
        if (limit > Int(1000000000000LL))
            fail("InvalidPolynomial", "degree-4 irreducibility check: constant term too large");
        std::vector<Int> cdivs;
        for (Int e = 1; e * e <= limit; ++e)
            if (limit % e == 0) {
                cdivs.push_back(e);
                cdivs.push_back(limit / e);
            }
        for (const Int& cc : cdivs) {
            {
                for (int s1 : {1, -1}) {
                    Int c = s1 * cc;
                    if (c == 0) continue;
                    Int cp_num = c0 / c;  // c' with c*c' = c0
                    // f = (x^2+bx+c)(x^2+b'x+c') forces b+b'=a3, c+c'+bb'=a2,
                    // bc'+b'c=a1. Solve the linear system in b, b'.
                    // b*c' + (a3-b)*c = a1  =>  b(c'-c) = a1 - a3*c
                    Int cp = cp_num;
                    Int rhs = a1 - a3 * c;
                    Int diff = cp - c;
                    Int b, bp;
                    if (diff == 0) {
                        if (rhs != 0) continue;
                        // b + b' = a3 and bb' = a2 - 2c: discriminant check
                        Int disc = a3 * a3 - 4 * (a2 - 2 * c);
                        Int r;
                        if (disc < 0 || !is_perfect_square(disc, &r)) continue;
                        if ((a3 + r) % 2 != 0) continue;
                        b = (a3 + r) / 2;
                        bp = a3 - b;
                    } else {
                        if (rhs % diff != 0) continue;
                        b = rhs / diff;
                        bp = a3 - b;
                    }
                    if (c + cp + b * bp == a2 && b * cp + bp * c == a1)
                        fail("ReduciblePolynomial", "degree-4 minimal polynomial factors");
                }
            }
        }
    }

    std::shared_ptr<const detail::NumberFieldData> d_;
};

class AlgebraicNumber {
  public:
    AlgebraicNumber(NumberField field, std::vector<Rational> coords)
        : F_(std::move(field)), c_(reduce(F_, std::move(coords))) {}

    const NumberField& field() const { return F_; }
    const std::vector<Rational>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_rational(Rational* out = nullptr) const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        if (out) *out = c_[0];
        return true;
    }

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_fields(a, b);
        std::vector<Rational> r = a.c_;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.c_[i];
        return AlgebraicNumber(a.F_, std::move(r));
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a) {
        std::vector<Rational> r = a.c_;
        for (auto& x : r) x = -x;
        return AlgebraicNumber(a.F_, std::move(r));
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return a + (-b);
    }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_fields(a, b);
        QPoly prod = QPoly(std::vector<Rational>(a.c_)) * QPoly(std::vector<Rational>(b.c_));
        return AlgebraicNumber(a.F_, divmod(prod, a.F_.min_poly()).second.c);
    }
    friend AlgebraicNumber operator*(const Rational& s, const AlgebraicNumber& a) {
        std::vector<Rational> r = a.c_;
        for (auto& x : r) x *= s;
        return AlgebraicNumber(a.F_, std::move(r));
    }
    AlgebraicNumber inverse() const {
        if (is_zero()) fail("DivisionByZero", "inverse of zero field element");
        // extended Euclid in Q[x]: u*g + v*f = 1 since f is irreducible
        QPoly g{std::vector<Rational>(c_)};
        QPoly r0 = F_.min_poly(), r1 = g;
        QPoly s0({Rational(0)}), s1({Rational(1)});  // coefficients of g
        while (!r1.is_zero()) {
            auto [q, r2] = divmod(r0, r1);
            QPoly s2 = s0 - q * s1;
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd (a nonzero constant), s0 * g == r0 (mod f)
        Rational inv_c = Rational(1) / r0.c[0];
        QPoly res = inv_c * s0;
        return AlgebraicNumber(F_, divmod(res, F_.min_poly()).second.c);
    }
    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return a * b.inverse();
    }
    AlgebraicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        AlgebraicNumber base = *this;
        AlgebraicNumber r = F_.one();
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_fields(a, b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return !(a == b);
    }

    // Certified enclosure of sigma_place(x), width <= 2^-bits.
    Interval embed(int place, long bits) const {
        QPoly g{std::vector<Rational>(c_)};
        Rational target = pow2(-bits);
        for (long tb = bits + 8; tb <= detail::kSignBitsCap; tb *= 2) {
            Interval v = eval_iv(g, F_.root_box(place, tb));
            if (v.width() <= target) return v;
        }
        fail("InternalError", "embedding refinement failed to converge");
    }

    // Exact sign at a place (0 only for the zero element).
    int sign_at(int place) const {
        if (is_zero()) return 0;
        QPoly g{std::vector<Rational>(c_)};
        for (long tb = 32; tb <= detail::kSignBitsCap; tb *= 2) {
            int s = eval_iv(g, F_.root_box(place, tb)).sign();
            if (s != 0) return s;
        }
        fail("InternalError", "sign refinement failed to converge");
    }

    // Field norm N_{F/Q}(x) = prod of all embeddings, exact.
    Rational norm() const {
        if (is_zero()) return Rational(0);
        return resultant(F_.min_poly(), QPoly(std::vector<Rational>(c_)));
    }

    // Monic minimal polynomial over Q (exact, via linear algebra on powers).
    QPoly minimal_polynomial() const {
        long d = F_.degree();
        std::vector<std::vector<Rational>> powers;  // coords of x^0, x^1, ...
        AlgebraicNumber p = F_.one();
        for (long k = 0; k <= d; ++k) {
            powers.push_back(p.c_);
            // Is x^k a combination of lower powers? Solve by elimination.
            std::vector<Rational> dep;
            if (dependency(powers, d, &dep)) return QPoly(std::move(dep));
            p = p * (*this);
        }
        fail("InternalError", "minimal polynomial not found within field degree");
    }

    bool is_integral() const {
        QPoly m = minimal_polynomial();
        for (const auto& c : m.c)
            if (den(c) != 1) return false;
        return true;
    }

    bool is_unit() const {
        if (is_zero()) return false;
        return is_integral() && inverse().is_integral();
    }

  private:
    static std::vector<Rational> reduce(const NumberField& F, std::vector<Rational> coords) {
        std::size_t d = static_cast<std::size_t>(F.degree());
        if (coords.size() > d) {
            QPoly r = divmod(QPoly(std::move(coords)), F.min_poly()).second;
            coords = std::move(r.c);
        }
        coords.resize(d, Rational(0));
        return coords;
    }

    static void check_fields(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        if (!a.F_.same(b.F_)) fail("FieldMismatch", "operands live in different number fields");
    }

    // If the last row of `powers` depends linearly on the previous ones,
    // writes the monic dependency polynomial and returns true.
    static bool dependency(const std::vector<std::vector<Rational>>& powers, long d,
                           std::vector<Rational>* out) {
        std::size_t k = powers.size() - 1;  // try to express powers[k]
        // Solve sum_{i<k} t_i powers[i] = powers[k] by Gaussian elimination.
        std::vector<std::vector<Rational>> m(static_cast<std::size_t>(d),
                                             std::vector<Rational>(k + 1, Rational(0)));
        for (std::size_t i = 0; i < k; ++i)
            for (long row = 0; row < d; ++row) m[row][i] = powers[i][row];
        for (long row = 0; row < d; ++row) m[row][k] = powers[k][row];
        std::vector<long> pivot_col;
        long row = 0;
        for (std::size_t col = 0; col < k && row < d; ++col) {
            long pr = -1;
            for (long r = row; r < d; ++r)
                if (m[r][col] != 0) {
                    pr = r;
                    break;
                }
            if (pr == -1) continue;
            std::swap(m[row], m[pr]);
            Rational inv = Rational(1) / m[row][col];
            for (auto& x : m[row]) x *= inv;
            for (long r = 0; r < d; ++r)
                if (r != row && m[r][col] != 0) {
                    Rational f0 = m[r][col];
                    for (std::size_t c2 = 0; c2 <= k; ++c2) m[r][c2] -= f0 * m[row][c2];
                }
            pivot_col.push_back(static_cast<long>(col));
            ++row;
        }
        // Consistent iff no row has 0...0 | nonzero.
        for (long r = row; r < d; ++r)
            if (m[r][k] != 0) return false;
        std::vector<Rational> t(k, Rational(0));
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            t[static_cast<std::size_t>(pivot_col[i])] = m[i][k];
        out->assign(k + 1, Rational(0));
        for (std::size_t i = 0; i < k; ++i) (*out)[i] = -t[i];
        (*out)[k] = 1;
        return true;
    }

    NumberField F_;
    std::vector<Rational> c_;
};

inline AlgebraicNumber NumberField::zero() const { return AlgebraicNumber(*this, {Rational(0)}); }
inline AlgebraicNumber NumberField::one() const { return AlgebraicNumber(*this, {Rational(1)}); }
inline AlgebraicNumber NumberField::gen() const {
    return AlgebraicNumber(*this, {Rational(0), Rational(1)});
}
inline AlgebraicNumber NumberField::from_rational(const Rational& r) const {
    return AlgebraicNumber(*this, {r});
}
inline AlgebraicNumber NumberField::element(std::vector<Rational> coords) const {
    return AlgebraicNumber(*this, std::move(coords));
}

inline bool k_is_zero(const AlgebraicNumber& x) { return x.is_zero(); }
inline AlgebraicNumber k_zero_like(const AlgebraicNumber& x) { return x.field().zero(); }
inline AlgebraicNumber k_one_like(const AlgebraicNumber& x) { return x.field().one(); }

// Exact square root in F, if one exists. Decision procedure: negative at any
// place rules a root out; otherwise scale to an algebraic integer, try every
// embedding sign pattern, reconstruct candidate coordinates from certified
// intervals (denominators divide |disc f| for integral elements) and verify
// y^2 = x exactly. Interval widths shrink until every pattern is either
// verified or refuted, so the answer is always definitive.
inline std::optional<AlgebraicNumber> try_sqrt_in_field(const AlgebraicNumber& x) {
    const NumberField& F = x.field();
    long d = F.degree();
    if (x.is_zero()) return F.zero();
    for (int p = 0; p < d; ++p)
        if (x.sign_at(p) < 0) return std::nullopt;
    if (d == 1) {
        Rational r;
        x.is_rational(&r);
        Int root;
        if (!is_perfect_square(num(r) * den(r), &root)) return std::nullopt;
        return F.from_rational(Rational(root, den(r)));
    }
    // scale so all coordinates are integers
    Int t = 1;
    for (const auto& c : x.coords()) t = boost::multiprecision::lcm(t, den(c));
    AlgebraicNumber scaled = Rational(t * t) * x;
    Rational D = boost::multiprecision::abs(resultant(F.min_poly(), derivative(F.min_poly())));
    Int Dz = num(D);  // disc is a nonzero integer for monic integral f
    std::size_t patterns = std::size_t(1) << static_cast<unsigned>(d - 1);
    std::vector<bool> dead(patterns, false);
    for (long bits = 64; bits <= 65536; bits *= 2) {
        // Vandermonde system rows: sum_k a_k theta_j^k = eps_j sqrt(sigma_j(scaled))
        std::vector<std::vector<Interval>> V(static_cast<std::size_t>(d));
        std::vector<Interval> rhs_base(static_cast<std::size_t>(d));
        bool refine = false;
        for (long j = 0; j < d; ++j) {
            Interval box = F.root_box(static_cast<int>(j), bits);
            V[j].clear();
            for (long k = 0; k < d; ++k) V[j].push_back(pow_iv(box, static_cast<unsigned>(k)));
            Interval val = scaled.embed(static_cast<int>(j), bits);
            if (val.lo < 0) val = Interval(Rational(0), val.hi);  // sign test said >= 0
            rhs_base[j] = sqrt_iv(val, bits);
        }
        std::size_t alive = 0;
        for (std::size_t pat = 0; pat < patterns; ++pat) {
            if (dead[pat]) continue;
            std::vector<Interval> rhs = rhs_base;
            for (long j = 1; j < d; ++j)
                if (pat >> (j - 1) & 1) rhs[j] = -rhs[j];
            auto sol = linear_solve_iv(V, rhs);
            if (!sol) {
                refine = true;
                ++alive;
                continue;
            }
            bool determined = true;
            std::vector<Rational> cand(static_cast<std::size_t>(d));
            for (long k = 0; k < d; ++k) {
                Interval scaled_coord = Rational(Dz) * (*sol)[k];
                if (scaled_coord.width() >= Rational(1, 2)) {
                    determined = false;
                    break;
                }
                cand[k] = Rational(round_half_down(scaled_coord.mid()), Dz);
            }
            if (!determined) {
                refine = true;
                ++alive;
                continue;
            }
            AlgebraicNumber y = F.element(cand);
            if (y * y == scaled) return Rational(1, t) * y;
            dead[pat] = true;
        }
        if (!refine && alive == 0) return std::nullopt;
        bool all_dead = true;
        for (std::size_t pat = 0; pat < patterns; ++pat) all_dead = all_dead && dead[pat];
        if (all_dead) return std::nullopt;
    }
    fail("InternalError", "square-root search failed to converge");
}

// --- quadratic extension L = F(s), s^2 = u s - 1 ----------------------------

class ExtElement;

namespace detail {

struct QuadExtensionData {
    NumberField F;
    AlgebraicNumber u;     // trace of s
    AlgebraicNumber disc;  // u^2 - 4
    std::vector<int> disc_sign;  // per public F-place: +1 split (real pair), -1 complex
    int identity_sign = 1;       // sign of sigma_0(u): picks which root has |s|>1

    QuadExtensionData(NumberField f, AlgebraicNumber uu, AlgebraicNumber dd)
        : F(std::move(f)), u(std::move(uu)), disc(std::move(dd)) {}
};

}  // namespace detail

class QuadExtension {
  public:
    // Validates: disc = u^2-4 is not a square in F (else SquareDiscriminant)
    // and is positive at the identity place (else NegativeDiscriminant).
    // The Salem place pattern is NOT enforced here; unit_rank_report checks it.
    QuadExtension(const NumberField& F, const AlgebraicNumber& u) {
        if (!F.same(u.field())) fail("FieldMismatch", "trace element lives in a different field");
        AlgebraicNumber dd = u * u - Rational(4) * F.one();
        if (try_sqrt_in_field(dd))
            fail("SquareDiscriminant", "u^2-4 is a square in F: x^2-ux+1 is reducible");
        if (dd.sign_at(0) < 0)
            fail("NegativeDiscriminant", "u^2-4 is negative at the identity place");
        auto d = std::make_shared<detail::QuadExtensionData>(F, u, dd);
        for (int p = 0; p < F.places(); ++p) d->disc_sign.push_back(dd.sign_at(p));
        d->identity_sign = u.sign_at(0);
        d_ = std::move(d);
    }

    const NumberField& base() const { return d_->F; }
    const AlgebraicNumber& trace() const { return d_->u; }
    const AlgebraicNumber& disc() const { return d_->disc; }
    int disc_sign(int f_place) const { return d_->disc_sign[f_place]; }

    // Count of base places where x^2 - ux + 1 splits into two real roots.
    int split_places() const {
        int c = 0;
        for (int s : d_->disc_sign) c += (s > 0);
        return c;
    }

    bool same(const QuadExtension& o) const {
        if (d_ == o.d_) return true;
        return d_->F.same(o.d_->F) && d_->u == o.d_->u;
    }

    // Real embeddings of s over the identity place: index 0 is the root with
    // |s| > 1 (s > 1 when sigma_0(u) > 2), index 1 its reciprocal partner.
    Interval s_box(int which, long bits) const {
        Interval ub = d_->u.embed(0, bits + 4);
        Interval sq = sqrt_iv(d_->disc.embed(0, 2 * bits + 8), bits + 4);
        int sgn = d_->identity_sign >= 0 ? 1 : -1;
        if (which == 1) sgn = -sgn;
        Interval num_iv = sgn > 0 ? ub + sq : ub - sq;
        return Rational(1, 2) * num_iv;
    }

    inline ExtElement zero() const;
    inline ExtElement one() const;
    inline ExtElement gen() const;  // s
    inline ExtElement from_base(const AlgebraicNumber& a) const;
    inline ExtElement from_rational(const Rational& r) const;
    inline ExtElement element(AlgebraicNumber a, AlgebraicNumber b) const;

  private:
    std::shared_ptr<const detail::QuadExtensionData> d_;
};

class ExtElement {
  public:
    ExtElement(QuadExtension ext, AlgebraicNumber a, AlgebraicNumber b)
        : E_(std::move(ext)), a_(std::move(a)), b_(std::move(b)) {
        if (!E_.base().same(a_.field()) || !E_.base().same(b_.field()))
            fail("FieldMismatch", "component lives outside the base field");
    }

    const QuadExtension& ext() const { return E_; }
    const AlgebraicNumber& a() const { return a_; }
    const AlgebraicNumber& b() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool in_base() const { return b_.is_zero(); }

    friend ExtElement operator+(const ExtElement& x, const ExtElement& y) {
        check_ext(x, y);
        return ExtElement(x.E_, x.a_ + y.a_, x.b_ + y.b_);
    }
    friend ExtElement operator-(const ExtElement& x) { return ExtElement(x.E_, -x.a_, -x.b_); }
    friend ExtElement operator-(const ExtElement& x, const ExtElement& y) { return x + (-y); }
    friend ExtElement operator*(const ExtElement& x, const ExtElement& y) {
        check_ext(x, y);
        // (a + b s)(c + e s) with s^2 = u s - 1:
        const AlgebraicNumber &a = x.a_, &b = x.b_, &c = y.a_, &e = y.b_;
        const AlgebraicNumber& u = x.E_.trace();
        return ExtElement(x.E_, a * c - b * e, a * e + b * c + b * e * u);
    }
    friend ExtElement operator*(const Rational& s, const ExtElement& x) {
        return ExtElement(x.E_, s * x.a_, s * x.b_);
    }

    ExtElement tau() const {
        // tau(a + b s) = (a + b u) - b s
        return ExtElement(E_, a_ + b_ * E_.trace(), -b_);
    }

    // norm_{L/F}(x) = x tau(x) = a^2 + a b u + b^2, an element of F.
    AlgebraicNumber rel_norm() const {
        return a_ * a_ + a_ * b_ * E_.trace() + b_ * b_;
    }

    ExtElement inverse() const {
        if (is_zero()) fail("DivisionByZero", "inverse of zero extension element");
        AlgebraicNumber n = rel_norm();
        ExtElement t = tau();
        AlgebraicNumber ninv = n.inverse();
        return ExtElement(E_, t.a_ * ninv, t.b_ * ninv);
    }
    friend ExtElement operator/(const ExtElement& x, const ExtElement& y) {
        return x * y.inverse();
    }
    ExtElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        ExtElement base = *this;
        ExtElement r = E_.one();
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    friend bool operator==(const ExtElement& x, const ExtElement& y) {
        check_ext(x, y);
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const ExtElement& x, const ExtElement& y) { return !(x == y); }

    // x tau(x) = 1 exactly.
    bool is_unitary() const {
        if (is_zero()) fail("ZeroElement", "unitarity test on zero");
        return rel_norm() == E_.base().one();
    }

    // Real embeddings of L over the identity place of F: which in {0, 1} as
    // in QuadExtension::s_box. Width <= 2^-bits.
    Interval embed_real(int which, long bits) const {
        Rational target = pow2(-bits);
        for (long tb = bits + 8; tb <= detail::kSignBitsCap; tb *= 2) {
            Interval v = a_.embed(0, tb) + b_.embed(0, tb) * E_.s_box(which, tb);
            if (v.width() <= target) return v;
        }
        fail("InternalError", "extension embedding failed to converge");
    }

    // Exact sign of the element under the chosen real embedding of L.
    int sign_real(int which) const {
        if (is_zero()) return 0;
        for (long tb = 32; tb <= detail::kSignBitsCap; tb *= 2) {
            int s = (a_.embed(0, tb) + b_.embed(0, tb) * E_.s_box(which, tb)).sign();
            if (s != 0) return s;
        }
        fail("InternalError", "extension sign refinement failed to converge");
    }

    // |x| at a complex place of L lying over the base place f_place (>= 1
    // for special units). Exact trick: |a+bs|^2 = sigma(a^2+abu+b^2), the
    // relative norm, because s and s-bar are conjugate with product 1.
    Interval modulus_complex(int f_place, long bits) const {
        AlgebraicNumber n = rel_norm();
        return sqrt_iv(n.embed(f_place, 2 * bits + 4), bits + 1);
    }

  private:
    static void check_ext(const ExtElement& x, const ExtElement& y) {
        if (!x.E_.same(y.E_)) fail("FieldMismatch", "operands live in different extensions");
    }

    QuadExtension E_;
    AlgebraicNumber a_, b_;
};

inline ExtElement QuadExtension::zero() const {
    return ExtElement(*this, base().zero(), base().zero());
}
inline ExtElement QuadExtension::one() const {
    return ExtElement(*this, base().one(), base().zero());
}
inline ExtElement QuadExtension::gen() const {
    return ExtElement(*this, base().zero(), base().one());
}
inline ExtElement QuadExtension::from_base(const AlgebraicNumber& a) const {
    return ExtElement(*this, a, base().zero());
}
inline ExtElement QuadExtension::from_rational(const Rational& r) const {
    return ExtElement(*this, base().from_rational(r), base().zero());
}
inline ExtElement QuadExtension::element(AlgebraicNumber a, AlgebraicNumber b) const {
    return ExtElement(*this, std::move(a), std::move(b));
}

inline bool k_is_zero(const ExtElement& x) { return x.is_zero(); }
inline ExtElement k_zero_like(const ExtElement& x) { return x.ext().zero(); }
inline ExtElement k_one_like(const ExtElement& x) { return x.ext().one(); }

// readable rendering, mostly for certificates and error messages
inline std::string to_string(const AlgebraicNumber& x) {
    const auto& c = x.coords();
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (sign_of(c[i]) == 0) continue;
        if (!out.empty()) out += " + ";
        out += format_rational(c[i]);
        if (i >= 1) out += "*th";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

inline std::string to_string(const ExtElement& x) {
    if (x.b().is_zero()) return to_string(x.a());
    std::string out = "(" + to_string(x.a()) + ") + (" + to_string(x.b()) + ")*s";
    return out;
}

}  // namespace bendlab
