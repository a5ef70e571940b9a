#pragma once

// Convex projective geometry: cross ratios, the Hilbert metric on the open
// segment, Klein balls of diagonal forms, and the cusp domains Omega_0 /
// Omega_1; the parabolic groups P_0 / P_1 with their horosphere foliations;
// the Zariski closure of P_1 with its orbit-openness rank test; duality.
//
// Boundary intersections are found exactly (quadratic domains) or by
// certified bisection with adaptive precision (the transcendental boundary
// of Omega_1). All distances come back as intervals of requested width.

#include "bendlab/forms.hpp"
#include "bendlab/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bendlab {

// ---------------------------------------------------------------------------
// Projective points with exact rational homogeneous coordinates
// ---------------------------------------------------------------------------
struct ProjPoint {
    std::vector<Rational> coords;

    explicit ProjPoint(std::vector<Rational> c) : coords(std::move(c)) {
        bool nonzero = false;
        for (const auto& v : coords)
            if (sign_of(v) != 0) nonzero = true;
        if (!nonzero) fail("ZeroVector", "projective points need a nonzero coordinate vector");
    }

    long dim() const { return static_cast<long>(coords.size()); }

    // last-coordinate-1 normalization of the affine patch
    std::optional<std::vector<Rational>> chart() const {
        const Rational& last = coords.back();
        if (sign_of(last) == 0) return std::nullopt;
        std::vector<Rational> out(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) out[i] = coords[i] / last;
        return out;
    }
};

inline bool proportional(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size()) return false;
    // all 2x2 minors vanish
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] != a[j] * b[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Cross ratio [a:x:y:b] of four collinear points, exact. In the chart where
// a sits at 0 and b at infinity the cross ratio is t(y)/t(x).
// ---------------------------------------------------------------------------
inline Rational cross_ratio(const ProjPoint& a, const ProjPoint& x, const ProjPoint& y,
                            const ProjPoint& b) {
    long m = a.dim();
    if (x.dim() != m || y.dim() != m || b.dim() != m)
        fail("SizeMismatch", "cross ratio needs four points of one projective space");
    if (proportional(a.coords, b.coords))
        fail("CoincidentPoints", "outer points a and b coincide");
    if (proportional(x.coords, y.coords)) return Rational(1);

    // coordinates (lambda, mu) of z in the basis {a, b} of the common line
    auto line_coords = [&](const ProjPoint& z) {
        // pick two rows making the a,b block invertible
        long r1 = -1, r2 = -1;
        for (long i = 0; i < m && r2 == -1; ++i)
            for (long j = i + 1; j < m && r2 == -1; ++j)
                if (a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i] != Rational(0)) {
                    r1 = i;
                    r2 = j;
                }
        if (r1 == -1) fail("InternalError", "independent points with no invertible 2x2 block");
        Rational det = a.coords[r1] * b.coords[r2] - a.coords[r2] * b.coords[r1];
        Rational lam = (z.coords[r1] * b.coords[r2] - z.coords[r2] * b.coords[r1]) / det;
        Rational mu = (a.coords[r1] * z.coords[r2] - a.coords[r2] * z.coords[r1]) / det;
        // consistency on every remaining row = collinearity
        for (long i = 0; i < m; ++i)
            if (lam * a.coords[i] + mu * b.coords[i] != z.coords[i])
                fail("NotCollinear", "point does not lie on the line through a and b");
        return std::make_pair(lam, mu);
    };

    auto [lx, mx] = line_coords(x);
    auto [ly, my] = line_coords(y);
    if (sign_of(lx) == 0 || sign_of(mx) == 0 || sign_of(ly) == 0 || sign_of(my) == 0)
        fail("CoincidentPoints", "inner point coincides with an outer point");
    Rational tx = mx / lx, ty = my / ly;
    return ty / tx;
}

// ---------------------------------------------------------------------------
// Hilbert metric, quadratic-boundary domains. The chord x + t(y-x) meets the
// boundary quadric q = 0 where A t^2 + 2 B t + C = 0 with A = q(y-x),
// B = b(x, y-x), C = q(x); the distance is half the log of the cross ratio
// of (root_a, x, y, root_b). Coefficients live in the form's field and are
// evaluated at the identity place.
// ---------------------------------------------------------------------------
namespace detail {

constexpr long kHilbertBitsCap = 1L << 20;

// cross ratio interval from enclosures of the boundary parameters; either
// side may sit at infinity (nullopt)
inline Interval chord_cross_ratio(const std::optional<Interval>& ta,
                                  const std::optional<Interval>& tb) {
    Interval one(Rational(1));
    if (ta && tb) return (*tb * (one - *ta)) / ((-*ta) * (*tb - one));
    if (tb) return *tb / (*tb - one);                 // a at infinity
    if (ta) return (one - *ta) / (-*ta);              // b at infinity
    fail("InternalError", "chord with both boundary points at infinity");
}

// distance from certified boundary-parameter enclosures, refined by the
// caller until the requested width is reached
inline std::optional<Interval> chord_distance(const std::optional<Interval>& ta,
                                              const std::optional<Interval>& tb, long bits,
                                              long precision) {
    // denominators must be sign-definite before dividing
    if (ta && (*ta).hi >= Rational(0)) return std::nullopt;
    if (tb && (*tb).lo <= Rational(1)) return std::nullopt;
    Interval cr = chord_cross_ratio(ta, tb);
    if (cr.lo <= Rational(0)) return std::nullopt;
    Interval d = Rational(1, 2) * log_iv(cr, bits);
    if (d.width() > pow2(-precision)) return std::nullopt;
    return d;
}

}  // namespace detail

// q(x) as an exact field element for the symmetric matrix Q over F
inline AlgebraicNumber quadratic_value(const BaseMatrix& q, const std::vector<Rational>& x) {
    const NumberField& F = q.sample().field();
    AlgebraicNumber acc = F.zero();
    for (long i = 0; i < q.rows(); ++i)
        for (long j = 0; j < q.cols(); ++j) acc = acc + (x[i] * x[j]) * q.at(i, j);
    return acc;
}

inline AlgebraicNumber bilinear_value(const BaseMatrix& q, const std::vector<Rational>& x,
                                      const std::vector<Rational>& y) {
    const NumberField& F = q.sample().field();
    AlgebraicNumber acc = F.zero();
    for (long i = 0; i < q.rows(); ++i)
        for (long j = 0; j < q.cols(); ++j) acc = acc + (x[i] * y[j]) * q.at(i, j);
    return acc;
}

// Hilbert distance in the projective domain {q < 0} for a symmetric matrix Q
// whose restriction to the chart at infinity is positive semidefinite (true
// for the Klein balls, Omega_0 and the segment). Interval width <= 2^-precision.
inline Interval hilbert_distance_quadric(const BaseMatrix& q, const ProjPoint& x,
                                         const ProjPoint& y, long precision) {
    long m = q.rows();
    if (x.dim() != m || y.dim() != m) fail("SizeMismatch", "point dimension does not match the form");
    // interiority, exactly
    for (const ProjPoint* p : {&x, &y}) {
        int s = quadratic_value(q, p->coords).sign_at(0);
        if (s == 0) fail("PointOnBoundary", "point lies on the boundary quadric: distance is infinite");
        if (s > 0) fail("PointOutside", "point lies outside the domain");
    }
    if (proportional(x.coords, y.coords)) return Interval(Rational(0));

    auto xc = x.chart(), yc = y.chart();
    if (!xc || !yc) fail("InternalError", "interior point of a quadric domain left the affine chart");
    std::vector<Rational> w(m);
    for (long i = 0; i < m; ++i) w[i] = (*yc)[i] - (*xc)[i];

    AlgebraicNumber A = quadratic_value(q, w);
    AlgebraicNumber B = bilinear_value(q, *xc, w);
    AlgebraicNumber C = quadratic_value(q, *xc);

    bool a_degenerate = A.is_zero();  // one boundary point at infinity
    int b_sign = a_degenerate ? B.sign_at(0) : 0;
    if (a_degenerate && b_sign == 0)
        fail("InternalError", "degenerate chord: projective line inside the domain");

    for (long bits = precision + 8; bits <= detail::kHilbertBitsCap; bits *= 2) {
        std::optional<Interval> ta, tb;
        if (a_degenerate) {
            // q(z(t)) = 2 B t + C, root at -C/(2B); the infinite end is on the
            // side where 2Bt + C stays negative
            Interval biv = B.embed(0, bits), civ = C.embed(0, bits);
            if (biv.sign() == 0) continue;
            Interval t0 = -civ / (Rational(2) * biv);
            if (b_sign > 0)
                tb = t0;  // root beyond y, a at infinity
            else
                ta = t0;  // root behind x, b at infinity
        } else {
            Interval aiv = A.embed(0, bits), biv = B.embed(0, bits), civ = C.embed(0, bits);
            Interval disc = biv * biv - aiv * civ;
            if (disc.sign() <= 0) continue;
            Interval root = sqrt_iv(disc, bits);
            if (aiv.sign() == 0) continue;
            ta = (-biv - root) / aiv;
            tb = (-biv + root) / aiv;
        }
        if (auto d = detail::chord_distance(ta, tb, bits, precision)) return *d;
    }
    fail("InternalError", "hilbert distance did not certify within the precision cap");
}

// --- concrete quadratic domains ---

// open segment (-1, 1) on the projective line: points [p : 1]
inline Interval hilbert_distance_segment(const Rational& x, const Rational& y, long precision) {
    NumberField Q1(QPoly({Rational(0), Rational(1)}), -1, "Q");
    BaseMatrix q(2, 2, Q1.zero());
    q.at(0, 0) = Q1.one();
    q.at(1, 1) = Q1.from_rational(Rational(-1));
    return hilbert_distance_quadric(q, ProjPoint({x, Rational(1)}), ProjPoint({y, Rational(1)}),
                                    precision);
}

// Klein ball of J = diag(alpha_1..alpha_n, -1): interior is q < 0
inline Interval hilbert_distance_klein(const Form& j, const ProjPoint& x, const ProjPoint& y,
                                       long precision) {
    return hilbert_distance_quadric(j.matrix_F(), x, y, precision);
}

// Omega_0 = {x_1 x_{n+1} > (x_2^2+...+x_n^2)/2}: q0 = sum/2 - x_1 x_{n+1}
inline BaseMatrix omega0_quadric(long n) {
    if (n < 1) fail("DimensionTooSmall", "Omega_0 needs n >= 1");
    NumberField Q1(QPoly({Rational(0), Rational(1)}), -1, "Q");
    BaseMatrix q(n + 1, n + 1, Q1.zero());
    for (long i = 1; i < n; ++i) q.at(i, i) = Q1.from_rational(Rational(1, 2));
    q.at(0, n) = Q1.from_rational(Rational(-1, 2));
    q.at(n, 0) = Q1.from_rational(Rational(-1, 2));
    return q;
}

inline Interval hilbert_distance_omega0(long n, const ProjPoint& x, const ProjPoint& y,
                                        long precision) {
    return hilbert_distance_quadric(omega0_quadric(n), x, y, precision);
}

// ---------------------------------------------------------------------------
// Omega_1 (transcendental boundary), in the chart x_{n+1} = 1:
//   interior   f(z) = z_1 + log z_2 - (z_3^2+...+z_n^2)/2 > 0,  z_2 > 0.
// Signs of f - c at rational points are exact when z_2 = 1 and otherwise
// decided by interval refinement, which terminates because log of a rational
// other than 1 is irrational.
// ---------------------------------------------------------------------------
namespace detail {

struct Omega1Chart {
    long n;
    std::vector<Rational> z;  // chart coordinates z_1..z_n
};

inline Omega1Chart omega1_chart(long n, const ProjPoint& p) {
    if (n < 2) fail("DimensionTooSmall", "Omega_1 needs n >= 2");
    if (p.dim() != n + 1) fail("SizeMismatch", "point dimension does not match the model");
    int s2 = sign_of(p.coords[1]) * sign_of(p.coords[n]);
    if (s2 < 0) fail("PointOutside", "x_2 x_{n+1} < 0: point is outside Omega_1");
    if (s2 == 0) fail("PointOnBoundary", "x_2 x_{n+1} = 0: point is not interior to Omega_1");
    auto c = p.chart();
    if (!c) fail("InternalError", "x_{n+1} = 0 should have been rejected already");
    Omega1Chart out{n, std::vector<Rational>(c->begin(), c->end() - 1)};
    return out;
}

// sign of f(z) - c at a rational chart point with z_2 > 0
inline int omega1_sign(const std::vector<Rational>& z, const Rational& c) {
    Rational r = z[0] - c;
    for (std::size_t i = 2; i < z.size(); ++i) r -= z[i] * z[i] / 2;
    const Rational& ell = z[1];
    if (ell == Rational(1)) return sign_of(r);
    for (long bits = 64; bits <= kHilbertBitsCap; bits *= 2) {
        Interval h = Interval(r) + log_point(ell, bits);
        if (h.sign() != 0) return h.sign();
    }
    // unreachable: r + log(ell) is irrational for rational ell != 1
    fail("InternalError", "Omega_1 sign evaluation exceeded the precision cap");
}

inline std::vector<Rational> chord_point(const std::vector<Rational>& x,
                                         const std::vector<Rational>& w, const Rational& t) {
    std::vector<Rational> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + t * w[i];
    return z;
}

// Does the chord x + t w leave Omega_1 through the ideal segment l_infty as
// t -> dir * infinity? Exactly decidable from the direction vector.
inline bool omega1_infinite_side(const std::vector<Rational>& w, int dir) {
    for (std::size_t i = 2; i < w.size(); ++i)
        if (sign_of(w[i]) != 0) return false;
    int s1 = dir * sign_of(w[0]), s2 = dir * sign_of(w[1]);
    return (s1 > 0 && s2 >= 0) || (s1 == 0 && s2 > 0);
}

// certified enclosure of the boundary parameter on one side of the chord;
// inside_t must satisfy f(z(inside_t)) > 0
inline Interval omega1_boundary_param(const std::vector<Rational>& x,
                                      const std::vector<Rational>& w, Rational inside_t, int dir,
                                      const Rational& eps) {
    auto sgn = [&](const Rational& t) { return omega1_sign(chord_point(x, w, t), Rational(0)); };
    // bracket an outside parameter
    Rational in_t = inside_t, out_t;
    int s2 = dir * sign_of(w[1]);
    if (s2 < 0) {
        // window edge where z_2 hits 0
        Rational edge = -x[1] / w[1];
        Rational t = (in_t + edge) / 2;
        while (true) {
            std::vector<Rational> z = chord_point(x, w, t);
            int s = sign_of(z[1]) > 0 ? omega1_sign(z, Rational(0)) : -1;
            if (s < 0) break;
            if (s == 0) return Interval(t);
            in_t = t;
            t = (t + edge) / 2;
        }
        out_t = t;
    } else {
        Rational step(dir);
        Rational t = inside_t + step;
        while (true) {
            int s = sgn(t);
            if (s < 0) break;
            if (s == 0) return Interval(t);
            in_t = t;
            step = Rational(2) * step;
            t = t + step;
        }
        out_t = t;
    }
    // bisection; keep f(in_t) > 0 > f(out_t)
    while (true) {
        Rational width = out_t - in_t;
        if (width < Rational(0)) width = -width;
        if (width <= eps) break;
        Rational m = (in_t + out_t) / 2;
        int s = sgn(m);
        if (s == 0) return Interval(m);
        (s > 0 ? in_t : out_t) = m;
    }
    return in_t < out_t ? Interval(in_t, out_t) : Interval(out_t, in_t);
}

}  // namespace detail

inline Interval hilbert_distance_omega1(long n, const ProjPoint& x, const ProjPoint& y,
                                        long precision) {
    detail::Omega1Chart cx = detail::omega1_chart(n, x);
    detail::Omega1Chart cy = detail::omega1_chart(n, y);
    for (const auto* c : {&cx, &cy}) {
        int s = detail::omega1_sign(c->z, Rational(0));
        if (s == 0) fail("PointOnBoundary", "point lies on the boundary of Omega_1");
        if (s < 0) fail("PointOutside", "point lies outside Omega_1");
    }
    if (cx.z == cy.z) return Interval(Rational(0));

    std::vector<Rational> w(cx.z.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = cy.z[i] - cx.z[i];

    bool inf_b = detail::omega1_infinite_side(w, +1);
    bool inf_a = detail::omega1_infinite_side(w, -1);
    if (inf_a && inf_b) fail("InternalError", "chord of Omega_1 inside the domain in both directions");

    Rational eps = pow2(-(precision + 8));
    for (long bits = precision + 8; bits <= detail::kHilbertBitsCap; bits *= 2) {
        std::optional<Interval> ta, tb;
        if (!inf_a) ta = detail::omega1_boundary_param(cx.z, w, Rational(0), -1, eps);
        if (!inf_b) tb = detail::omega1_boundary_param(cx.z, w, Rational(1), +1, eps);
        if (auto d = detail::chord_distance(ta, tb, bits, precision)) return *d;
        eps = eps * pow2(-32);
    }
    fail("InternalError", "Omega_1 distance did not certify within the precision cap");
}

// ---------------------------------------------------------------------------
// Cusp models and their translation groups
// ---------------------------------------------------------------------------
struct CuspModel {
    int type;  // 0 | 1
    long n;

    CuspModel(int t, long dim) : type(t), n(dim) {
        if (t != 0 && t != 1) fail("ParseError", "cusp type must be 0 or 1");
        if (t == 0 && n < 1) fail("DimensionTooSmall", "type 0 needs n >= 1");
        if (t == 1 && n < 2) fail("DimensionTooSmall", "type 1 needs n >= 2");
    }
};

struct CuspTranslation {
    Matrix<Rational> matrix;
    bool parabolic;
};

// type 0:  [[1, v, |v|^2/2], [0, I_{n-1}, v^t], [0, 0, 1]]
inline CuspTranslation cusp_translation(const CuspModel& m, const std::vector<Rational>& v) {
    if (m.type != 0) fail("ParseError", "this overload builds type-0 translations");
    if (static_cast<long>(v.size()) != m.n - 1)
        fail("SizeMismatch", "type 0 translation takes v of length n-1");
    long sz = m.n + 1;
    Matrix<Rational> p = Matrix<Rational>::identity(sz, Rational(0));
    Rational half_norm(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        p.at(0, 1 + i) = v[i];
        p.at(1 + i, sz - 1) = v[i];
        half_norm += v[i] * v[i] / 2;
    }
    p.at(0, sz - 1) = half_norm;
    return {std::move(p), true};
}

// type 1:  [[1, 0, v, w], [0, e, 0, 0], [0, 0, I_{n-2}, v^t], [0, 0, 0, 1]]
// with w = |v|^2/2. The diagonal entry e is exp(u) which is transcendental
// for rational u != 0, so the exact matrix uses the Zariski-closure
// convention: e = u_param when u_param != 0, and the parabolic case
// u_param = 0 gives the exact value e = exp(0) = 1.
inline CuspTranslation cusp_translation(const CuspModel& m, const Rational& u_param,
                                        const std::vector<Rational>& v) {
    if (m.type != 1) fail("ParseError", "this overload builds type-1 translations");
    if (static_cast<long>(v.size()) != m.n - 2)
        fail("SizeMismatch", "type 1 translation takes v of length n-2");
    long sz = m.n + 1;
    bool parabolic = (u_param == Rational(0));
    Matrix<Rational> p = Matrix<Rational>::identity(sz, Rational(0));
    p.at(1, 1) = parabolic ? Rational(1) : u_param;
    Rational half_norm(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        p.at(0, 2 + i) = v[i];
        p.at(2 + i, sz - 1) = v[i];
        half_norm += v[i] * v[i] / 2;
    }
    p.at(0, sz - 1) = half_norm;
    return {std::move(p), parabolic};
}

// ---------------------------------------------------------------------------
// Horosphere leaves
//   type 0:  H_c = {[x_1:...:x_n:1] | x_1 - (x_2^2+...+x_n^2)/2 = c}
//   type 1:  H_c = {[x_1:...:x_n:1] | x_1 + log x_2 - (x_3^2+...+x_n^2)/2 = c, x_2 > 0}
// Rational points can only sit on a rational type-1 leaf when x_2 = 1.
// ---------------------------------------------------------------------------
namespace detail {

// classification of a rational point against the leaf H_c: -1 below / off,
// 0 on the leaf, +1 above; "on" is exact
inline int leaf_compare(const CuspModel& m, const Rational& c, const std::vector<Rational>& z) {
    if (m.type == 0) {
        Rational val = z[0];
        for (std::size_t i = 1; i < z.size(); ++i) val -= z[i] * z[i] / 2;
        return sign_of(val - c);
    }
    if (sign_of(z[1]) <= 0) return -1;  // wrong side of the leaf's chart
    std::vector<Rational> zz = z;
    return omega1_sign(zz, c);
}

}  // namespace detail

inline bool horosphere_check(const CuspModel& m, const Rational& c, const ProjPoint& p,
                             const Matrix<Rational>& g) {
    if (c <= Rational(0)) fail("InvalidThreshold", "horosphere leaves require c > 0");
    if (p.dim() != m.n + 1) fail("SizeMismatch", "point dimension does not match the model");
    if (g.rows() != m.n + 1 || g.cols() != m.n + 1)
        fail("SizeMismatch", "matrix size does not match the model");
    auto chart = p.chart();
    if (!chart) fail("NotOnLeaf", "x_{n+1} = 0: point is not on any leaf");
    std::vector<Rational> z(chart->begin(), chart->end() - 1);
    if (m.type == 1 && z[1] != Rational(1))
        fail("NotOnLeaf",
             "rational points on a rational type-1 leaf must have x_2 = 1 (log x_2 is "
             "irrational otherwise)");
    if (detail::leaf_compare(m, c, z) != 0)
        fail("NotOnLeaf", "point does not satisfy the H_c equation");

    std::vector<Rational> q = g.apply(p.coords);
    if (sign_of(q.back()) == 0) return false;  // image left the affine patch
    std::vector<Rational> zq(q.size() - 1);
    for (std::size_t i = 0; i + 1 < q.size(); ++i) zq[i] = q[i] / q.back();
    return detail::leaf_compare(m, c, zq) == 0;
}

// ---------------------------------------------------------------------------
// Orbit openness for the Zariski closure of P_1 (dimension n): tangent
// directions at the identity are u -> E_{2,2}, w -> E_{1,n+1} and
// v_i -> E_{1,2+i} + E_{2+i,n+1}. The projective orbit is open at [x] iff
// span({X x} + {x}) is everything, i.e. rank n after projecting out x.
// ---------------------------------------------------------------------------
struct OrbitReport {
    long rank = 0;
    bool open = false;
};

inline OrbitReport orbit_openness(const ProjPoint& x, long n) {
    if (n < 2) fail("DimensionTooSmall", "the closure of P_1 needs n >= 2");
    if (x.dim() != n + 1) fail("SizeMismatch", "point dimension does not match n");
    EchelonSpan<Rational> span;
    span.add(x.coords);
    std::vector<Rational> zero(n + 1, Rational(0));
    {
        std::vector<Rational> t = zero;  // E_{2,2} x = x_2 e_2
        t[1] = x.coords[1];
        span.add(t);
    }
    {
        std::vector<Rational> t = zero;  // E_{1,n+1} x = x_{n+1} e_1
        t[0] = x.coords[n];
        span.add(t);
    }
    for (long i = 0; i < n - 2; ++i) {  // (E_{1,2+i} + E_{2+i,n+1}) x
        std::vector<Rational> t = zero;
        t[0] = x.coords[2 + i];
        t[2 + i] = x.coords[n];
        span.add(t);
    }
    OrbitReport r;
    r.rank = span.dim() - 1;
    r.open = (r.rank == n);
    return r;
}

// ---------------------------------------------------------------------------
// Duality g -> (g^{-1})^t
// ---------------------------------------------------------------------------
template <typename K>
Matrix<K> dual_element(const Matrix<K>& g) {
    return g.inverse().transpose();
}

// ---------------------------------------------------------------------------
// Plot-only SVG rendering of 2-D sections of Omega_0 / Omega_1 with a few
// horosphere leaves (double arithmetic; never feeds back into any check).
// ---------------------------------------------------------------------------
inline std::string render_cusp_svg(const CuspModel& m, const std::vector<Rational>& leaves) {
    const double width = 480, height = 480;
    // world window: x horizontal in [-4,4] (type 0) or (0,4] (type 1),
    // vertical coordinate z_1 in [0, 8]
    auto map_x = [&](double x) { return (x + 4.0) / 8.0 * width; };
    auto map_y = [&](double y) { return height - y / 8.0 * height; };
    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string((int)width) +
                      "' height='" + std::to_string((int)height) + "'>\n";
    auto polyline = [&](double c, bool boundary) {
        std::string pts;
        for (int i = 0; i <= 400; ++i) {
            double t = -4.0 + 8.0 * i / 400.0;
            double y;
            if (m.type == 0) {
                y = c + t * t / 2.0;
            } else {
                if (t <= 1e-6) continue;
                y = c - std::log(t);
            }
            if (y < 0 || y > 8) continue;
            pts += std::to_string(map_x(t)) + "," + std::to_string(map_y(y)) + " ";
        }
        svg += "  <polyline fill='none' stroke='" + std::string(boundary ? "#000" : "#2a6") +
               "' stroke-width='" + (boundary ? "2" : "1") + "' points='" + pts + "'/>\n";
    };
    polyline(0.0, true);  // boundary c = 0
    for (const auto& c : leaves) polyline(to_double(c), false);
    svg += "</svg>\n";
    return svg;
}

}  // namespace bendlab
