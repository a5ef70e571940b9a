#pragma once

// Special-unit search: find units u of a totally real field F with u > N at
// the identity embedding and 0 < sigma(u) < 1 at every other embedding, then
// build the quadratic extension L = F(s) with s + 1/s = u. Also: fundamental
// units of real quadratic fields by continued fractions, and the Dirichlet
// rank bookkeeping for the tower.

#include "bendlab/interval.hpp"
#include "bendlab/matrix.hpp"
#include "bendlab/numfield.hpp"

#include <string>
#include <vector>

namespace bendlab {

namespace detail {
constexpr long kCFIterationCap = 100000;
constexpr long kLogSolveBitsMax = 1L << 14;
constexpr long kSpecialUnitScaleCap = 10000;
}  // namespace detail

// ---------------------------------------------------------------------------
// Fundamental unit of a real quadratic field by the continued-fraction
// expansion of omega (omega = sqrt(D), or (1+sqrt(D))/2 when D = 1 mod 4, for
// D the squarefree part of disc(f)). Scans convergents h/k and returns the
// first epsilon = h - k*conj(omega) with |Norm(epsilon)| = 1, normalized to
// be > 1 at the identity place; this is the fundamental unit of O_F.
// ---------------------------------------------------------------------------
inline AlgebraicNumber fundamental_unit_quadratic(const NumberField& F) {
    if (F.degree() != 2)
        fail("UnsupportedDegree", "fundamental unit search by continued fractions requires a real quadratic field");
    const QPoly& f = F.min_poly();
    Int p = num(f.c[1]);  // f = x^2 + p x + q, integer coefficients
    Int q = num(f.c[0]);
    Int delta = p * p - 4 * q;  // > 0 and not a square (irreducible, totally real)

    // squarefree part: delta = sigma^2 * D
    Int sigma = 1, D = delta;
    for (Int e = 2; e * e <= D && e <= 1000000; ++e) {
        while (D % (e * e) == 0) {
            D /= e * e;
            sigma *= e;
        }
    }
    if (D > Int("1000000000000")) {
        // trial division removed all square factors below 10^6; a remaining
        // cofactor >= 10^12 could still hide the square of a larger prime
        Int r;
        if (is_perfect_square(D, &r)) {
            sigma *= r;
            D = 1;
        } else {
            fail("UnitSearchBudget", "discriminant too large to certify a squarefree part");
        }
    }
    if (D <= 1) fail("InternalError", "squarefree part of a real quadratic discriminant must exceed 1");

    // PQa continued-fraction state for omega = (P0 + sqrt(D))/Q0
    bool half = (D % 4 == 1);
    Int P = half ? Int(1) : Int(0);
    Int Q = half ? Int(2) : Int(1);
    Int sD = isqrt_floor(D);
    Rational tr_omega = half ? Rational(1) : Rational(0);
    Rational nm_omega = half ? Rational(1 - D, 4) : Rational(-D);

    Int h_prev = 1, h_prev2 = 0;  // h_{-1}, h_{-2}
    Int k_prev = 0, k_prev2 = 1;
    Int h = 0, k = 0;
    bool found = false;
    for (long i = 0; i < detail::kCFIterationCap; ++i) {
        if (Q <= 0) fail("InternalError", "continued-fraction state left the reduced regime");
        Int a = floor_div(P + sD, Q);
        h = a * h_prev + h_prev2;
        k = a * k_prev + k_prev2;
        // Norm(h - k*omega_bar) = h^2 - h k Tr(omega) + k^2 Norm(omega)
        Rational nrm = Rational(h) * Rational(h) - Rational(h) * Rational(k) * tr_omega +
                       Rational(k) * Rational(k) * nm_omega;
        if (nrm == Rational(1) || nrm == Rational(-1)) {
            found = true;
            break;
        }
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        Int Pn = a * Q - P;
        Int Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    if (!found) fail("UnitSearchBudget", "continued-fraction expansion exceeded the iteration cap");

    // express sqrt(D) in the power basis: (2*theta + p)^2 = delta = sigma^2 D
    AlgebraicNumber s2p = F.element({Rational(p), Rational(2)});
    int sg = s2p.sign_at(0);
    AlgebraicNumber sqrtD = Rational(sg, sigma) * s2p;  // identity embedding +sqrt(D)

    AlgebraicNumber eps = F.zero();
    if (half) {
        // epsilon = h - k(1-sqrt(D))/2 = (2h-k)/2 + (k/2) sqrt(D)
        eps = F.from_rational(Rational(2 * h - k, 2)) + Rational(k, 2) * sqrtD;
    } else {
        eps = F.from_rational(Rational(h)) + Rational(k) * sqrtD;
    }
    if (!eps.is_unit()) fail("InternalError", "continued-fraction candidate failed the exact unit check");
    if ((eps - F.one()).sign_at(0) <= 0)
        fail("InternalError", "continued-fraction unit is not greater than 1 at the identity place");
    return eps;
}

// ---------------------------------------------------------------------------
// Special-unit search (the constructive lemma)
// ---------------------------------------------------------------------------
struct UnitSearchProblem {
    NumberField field;
    std::vector<AlgebraicNumber> fundamental_units;
    Rational threshold;

    UnitSearchProblem(NumberField F, std::vector<AlgebraicNumber> units, Rational N)
        : field(std::move(F)), fundamental_units(std::move(units)), threshold(std::move(N)) {
        if (threshold <= Rational(0)) fail("InvalidThreshold", "threshold N must be a positive rational");
        if (static_cast<long>(fundamental_units.size()) != field.degree() - 1)
            fail("InvalidUnitCount", "need exactly [F:Q]-1 fundamental units (Dirichlet rank), got " +
                                         std::to_string(fundamental_units.size()));
        for (const auto& u : fundamental_units) {
            if (!u.field().same(field)) fail("FieldMismatch", "fundamental unit from a different field");
            Rational nrm = u.norm();
            if (nrm != Rational(1) && nrm != Rational(-1))
                fail("InvalidUnit", "listed element has field norm " + format_rational(nrm) + ", not +-1");
            if (!u.is_unit()) fail("InvalidUnit", "listed element is not an algebraic unit");
        }
    }
};

struct SpecialUnit {
    AlgebraicNumber u;
    std::vector<long> power_witness;          // exponents over the supplied fundamental units
    std::vector<Interval> embedding_evidence;  // per place, width <= 2^-40
};

namespace detail {

// nearest integer to every coordinate of t*c, rounding half up; nullopt if
// some coordinate's interval straddles a rounding boundary at this precision
inline std::optional<std::vector<long>> round_scaled(const std::vector<Interval>& c, long t) {
    std::vector<long> m(c.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rational half(1, 2);
        Int lo = floor_int(Rational(t) * c[i].lo + half);
        Int hi = floor_int(Rational(t) * c[i].hi + half);
        if (lo != hi) return std::nullopt;
        m[i] = static_cast<long>(lo);
    }
    return m;
}

}  // namespace detail

inline SpecialUnit find_special_unit(const UnitSearchProblem& prob) {
    const NumberField& F = prob.field;
    long d = F.degree();
    if (d == 1)
        fail("RankZeroField", "the unit group of the rational integers is {+-1}; no unit exceeds a threshold");
    long k = d - 1;

    // totally positive generators
    std::vector<AlgebraicNumber> v;
    v.reserve(k);
    for (const auto& u : prob.fundamental_units) v.push_back(u * u);

    // Solve sum_i c_i log sigma_j(v_i) = -1/k on the non-identity places j;
    // by Norm(v_i) = 1 the identity row is then +1, the lemma's target vector.
    long bits = 64;
    auto solve_coords = [&](long b) -> std::optional<std::vector<Interval>> {
        std::vector<std::vector<Interval>> rows(k, std::vector<Interval>(k, Interval(Rational(0))));
        std::vector<Interval> rhs(k, Interval(Rational(-1, k)));
        for (long j = 1; j < d; ++j)
            for (long i = 0; i < k; ++i)
                rows[j - 1][i] = log_iv(v[i].embed(static_cast<int>(j), b + 8), b);
        return linear_solve_iv(rows, rhs);
    };

    std::optional<std::vector<Interval>> coords;
    while (true) {
        coords = solve_coords(bits);
        if (coords) break;
        bits *= 2;
        if (bits > detail::kLogSolveBitsMax)
            fail("DegenerateBasis",
                 "log-embedding matrix could not be certified invertible; supplied units are "
                 "multiplicatively dependent or degenerate");
    }

    for (long t = 1; t <= detail::kSpecialUnitScaleCap; ++t) {
        std::optional<std::vector<long>> m = detail::round_scaled(*coords, t);
        while (!m && bits <= detail::kLogSolveBitsMax) {
            bits *= 2;
            if (auto better = solve_coords(bits)) coords = better;
            m = detail::round_scaled(*coords, t);
        }
        if (!m) continue;  // rounding boundary unresolved at the precision cap: try the next scale
        bool all_zero = true;
        for (long mi : *m)
            if (mi != 0) all_zero = false;
        if (all_zero) continue;

        AlgebraicNumber w = F.one();
        for (long i = 0; i < k; ++i) w = w * v[i].pow((*m)[i]);

        // exact verification of both lemma conditions
        bool ok = (w - F.from_rational(prob.threshold)).sign_at(0) > 0;
        for (long j = 1; ok && j < d; ++j) {
            ok = w.sign_at(static_cast<int>(j)) > 0 &&
                 (w - F.one()).sign_at(static_cast<int>(j)) < 0;
        }
        if (!ok) continue;

        SpecialUnit out{w, {}, {}};
        out.power_witness.reserve(k);
        for (long i = 0; i < k; ++i) out.power_witness.push_back(2 * (*m)[i]);
        out.embedding_evidence.reserve(d);
        for (long j = 0; j < d; ++j) out.embedding_evidence.push_back(w.embed(static_cast<int>(j), 40));
        return out;
    }
    fail("UnitSearchBudget", "no special unit found within the exponent-scaling budget");
}

// ---------------------------------------------------------------------------
// Tower construction and rank bookkeeping
// ---------------------------------------------------------------------------
inline QuadExtension build_extension(const NumberField& F, const AlgebraicNumber& u) {
    return QuadExtension(F, u);
}

// Minimal polynomial of x over Q, computed inside the 2d-dimensional Q-vector
// space of L with basis theta^i * s^j.
inline QPoly absolute_minimal_polynomial(const ExtElement& x) {
    long d = x.ext().base().degree();
    long m = 2 * d;
    auto flat = [&](const ExtElement& e) {
        std::vector<Rational> row(m, Rational(0));
        const auto& ac = e.a().coords();
        const auto& bc = e.b().coords();
        for (std::size_t i = 0; i < ac.size(); ++i) row[i] = ac[i];
        for (std::size_t i = 0; i < bc.size(); ++i) row[d + i] = bc[i];
        return row;
    };
    std::vector<std::vector<Rational>> powers{flat(x.ext().one())};
    ExtElement xp = x.ext().one();
    for (long j = 1; j <= m; ++j) {
        xp = xp * x;
        powers.push_back(flat(xp));
        // dependency among rows 0..j = kernel of the transpose
        auto kern = kernel_basis(Matrix<Rational>::from_rows(powers).transpose());
        if (kern.empty()) continue;
        const auto& cvec = kern[0];
        if (k_is_zero(cvec[j])) fail("InternalError", "power dependency missed its leading term");
        std::vector<Rational> coeff(j + 1);
        Rational lead_inv = Rational(1) / cvec[j];
        for (long i = 0; i <= j; ++i) coeff[i] = cvec[i] * lead_inv;
        return QPoly(std::move(coeff));
    }
    fail("InternalError", "no power dependency found within the ambient dimension");
}

struct UnitRankReport {
    long degree_F = 0;
    long rank_F = 0;
    long rank_L = 0;
    long real_places_L = 0;
    long complex_pairs_L = 0;
};

// Dirichlet rank of O_L from the real/complex place split of L = F(s). The
// Salem pattern demands the discriminant u^2-4 be positive at the identity
// place only: then L has 2 real places and [F:Q]-1 complex pairs, so
// rank_L = 2 + ([F:Q]-1) - 1 = [F:Q] = rank_F + 1.
inline UnitRankReport unit_rank_report(const QuadExtension& ext) {
    long d = ext.base().degree();
    if (ext.split_places() != 1)
        fail("PlaceCountMismatch",
             "u^2-4 is positive at a non-identity embedding: root isolation contradicts the Salem "
             "place pattern (2 real places, [F:Q]-1 complex pairs)");
    // independent cross-check by root isolation when s generates L over Q
    QPoly g = absolute_minimal_polynomial(ext.gen());
    if (g.degree() == 2 * d) {
        auto roots = isolate_real_roots(g);
        if (static_cast<long>(roots.size()) != 2)
            fail("PlaceCountMismatch",
                 "absolute minimal polynomial of s has " + std::to_string(roots.size()) +
                     " real roots; the Salem pattern requires exactly 2");
    }
    UnitRankReport r;
    r.degree_F = d;
    r.rank_F = d - 1;
    r.real_places_L = 2;
    r.complex_pairs_L = d - 1;
    r.rank_L = r.real_places_L + r.complex_pairs_L - 1;
    return r;
}

}  // namespace bendlab
