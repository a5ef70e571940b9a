// Projective layer: cross ratios, Hilbert metrics on quadric and
// transcendental domains, cusp translation groups, horosphere leaves, orbit
// openness, and duality. Oracles: classical cross-ratio values, closed-form
// distances computed by hand, and an independent double-precision chord
// solver for the Klein disk.

#include <bendlab/desk.hpp>
#include <bendlab/projgeom.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace bendlab;
using testsupport::Q;
using testsupport::error_code_of;

namespace {

ProjPoint pt(std::vector<long> v) {
    std::vector<Rational> c;
    for (long x : v) c.emplace_back(x);
    return ProjPoint(std::move(c));
}

ProjPoint ptq(std::vector<Rational> v) { return ProjPoint(std::move(v)); }

// Independent double-precision Hilbert distance on the unit Klein disk:
// solve the chord quadratic, form the cross ratio, halve the log.
double disk_distance_double(double x0, double x1, double y0, double y1) {
    double w0 = y0 - x0, w1 = y1 - x1;
    double A = w0 * w0 + w1 * w1;
    double B = x0 * w0 + x1 * w1;
    double C = x0 * x0 + x1 * x1 - 1.0;
    double disc = std::sqrt(B * B - A * C);
    double ta = (-B - disc) / A;  // < 0
    double tb = (-B + disc) / A;  // > 1
    double cr = (tb * (1.0 - ta)) / ((-ta) * (tb - 1.0));
    return 0.5 * std::log(cr);
}

bool overlaps(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

TEST_CASE("projective points normalize into the affine chart", "[projgeom]") {
    ProjPoint p = pt({2, 4, 2});
    auto c = p.chart();
    REQUIRE(c.has_value());
    CHECK((*c)[0] == Q(1));
    CHECK((*c)[1] == Q(2));
    CHECK((*c)[2] == Q(1));
    CHECK_FALSE(pt({1, 1, 0}).chart().has_value());

    CHECK(proportional(pt({1, 2, 3}).coords, pt({-2, -4, -6}).coords));
    CHECK_FALSE(proportional(pt({1, 2, 3}).coords, pt({1, 2, 4}).coords));

    CHECK(error_code_of([] { ProjPoint({Q(0), Q(0)}); }) == "ZeroVector");
}

TEST_CASE("cross ratio reproduces classical values", "[projgeom]") {
    // On the affine line [t:1]: cr(-1, 0, 1/2, 1) = 3.
    ProjPoint a = pt({-1, 1}), b = pt({1, 1});
    ProjPoint x = pt({0, 1});
    ProjPoint y = ptq({Q(1, 2), Q(1)});
    CHECK(cross_ratio(a, x, y, b) == Q(3));

    // Harmonic conjugates: cr(-1, 0, infinity, 1) = -1.
    CHECK(cross_ratio(a, x, pt({1, 0}), b) == Q(-1));

    // Equal inner points give 1; swapping the inner pair inverts.
    CHECK(cross_ratio(a, x, x, b) == Q(1));
    CHECK(cross_ratio(a, y, x, b) == Q(1, 3));
    // Reversing the whole quadruple preserves the value.
    CHECK(cross_ratio(b, y, x, a) == Q(3));

    // Scale invariance of homogeneous coordinates.
    CHECK(cross_ratio(ptq({Q(-2), Q(2)}), x, y, b) == Q(3));

    CHECK(error_code_of([&] { cross_ratio(a, x, y, ptq({Q(-3), Q(3)})); }) == "CoincidentPoints");
    CHECK(error_code_of([&] { cross_ratio(a, a, y, b); }) == "CoincidentPoints");
    CHECK(error_code_of(
              [&] { cross_ratio(pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1}), pt({1, 1, 0})); }) ==
          "NotCollinear");
    CHECK(error_code_of([&] { cross_ratio(a, x, y, pt({1, 1, 1})); }) == "SizeMismatch");
}

TEST_CASE("segment distance matches the closed form", "[projgeom]") {
    // d(0, 1/2) = log(3)/2: cross ratio of (-1, 0, 1/2, 1) is 3.
    Interval d = hilbert_distance_segment(Q(0), Q(1, 2), 50);
    CHECK(d.width() <= pow2(-50));
    Rational half_log3 = parse_rational(
        "54930614433405484569762261846/100000000000000000000000000000");
    Rational slack(1, Int("10000000000000000000000000000"));
    CHECK(d.lo - slack <= half_log3);
    CHECK(half_log3 <= d.hi + slack);

    // d(-1/2, 1/2) = log(3): the cross ratio squares.
    Interval d2 = hilbert_distance_segment(Q(-1, 2), Q(1, 2), 50);
    CHECK(overlaps(d2, Rational(2) * d));

    // Exact zero for equal points; symmetry within certified width.
    CHECK(hilbert_distance_segment(Q(1, 3), Q(1, 3), 30).is_point());
    CHECK(hilbert_distance_segment(Q(1, 3), Q(1, 3), 30).lo == Q(0));
    Interval ab = hilbert_distance_segment(Q(-3, 4), Q(1, 8), 44);
    Interval ba = hilbert_distance_segment(Q(1, 8), Q(-3, 4), 44);
    CHECK(overlaps(ab, ba));

    CHECK(error_code_of([] { hilbert_distance_segment(Q(1), Q(0), 20); }) == "PointOnBoundary");
    CHECK(error_code_of([] { hilbert_distance_segment(Q(2), Q(0), 20); }) == "PointOutside");
}

TEST_CASE("klein disk distance agrees with the double-precision solver", "[projgeom]") {
    NumberField F = desk::field();
    Form disk(F, {F.one(), F.one()});

    const std::vector<std::array<Rational, 4>> pairs = {
        {Q(0), Q(0), Q(1, 2), Q(0)},
        {Q(1, 4), Q(1, 4), Q(-1, 2), Q(1, 3)},
        {Q(3, 4), Q(0), Q(0), Q(3, 4)},
        {Q(-7, 8), Q(1, 16), Q(7, 8), Q(-1, 16)},
        {Q(1, 3), Q(2, 5), Q(2, 5), Q(1, 3)},
    };
    for (const auto& [x0, x1, y0, y1] : pairs) {
        Interval iv = hilbert_distance_klein(disk, ptq({x0, x1, Q(1)}), ptq({y0, y1, Q(1)}), 40);
        CHECK(iv.width() <= pow2(-40));
        double oracle =
            disk_distance_double(to_double(x0), to_double(x1), to_double(y0), to_double(y1));
        double mid = to_double(Rational(1, 2) * (iv.lo + iv.hi));
        CHECK(std::abs(mid - oracle) < 1e-9);
    }

    // Exact rational isometry: the 3-4-5 rotation preserves the disk form.
    std::vector<std::vector<Rational>> rot_rows = {
        {Q(3, 5), Q(-4, 5), Q(0)}, {Q(4, 5), Q(3, 5), Q(0)}, {Q(0), Q(0), Q(1)}};
    Matrix<Rational> rot = Matrix<Rational>::from_rows(rot_rows);
    Matrix<Rational> jr =
        Matrix<Rational>::from_rows({{Q(1), Q(0), Q(0)}, {Q(0), Q(1), Q(0)}, {Q(0), Q(0), Q(-1)}});
    REQUIRE(rot.transpose() * jr * rot == jr);

    for (const auto& [x0, x1, y0, y1] : pairs) {
        ProjPoint px = ptq({x0, x1, Q(1)});
        ProjPoint py = ptq({y0, y1, Q(1)});
        ProjPoint rx = ProjPoint(rot.apply(px.coords));
        ProjPoint ry = ProjPoint(rot.apply(py.coords));
        Interval before = hilbert_distance_klein(disk, px, py, 40);
        Interval after = hilbert_distance_klein(disk, rx, ry, 40);
        CHECK(overlaps(before, after));
    }
}

TEST_CASE("omega0 distances reproduce hand-computed chords", "[projgeom]") {
    // Quadric of the chart domain x_1 > (x_2^2 + x_3^2)/2 for n = 3.
    BaseMatrix q = omega0_quadric(3);
    NumberField F = q.sample().field();
    // q evaluates to (x_2^2 + x_3^2)/2 - x_1 x_4.
    CHECK(quadratic_value(q, {Q(2), Q(1), Q(1), Q(1)}) == F.from_rational(Q(-1)));
    CHECK(quadratic_value(q, {Q(1, 2), Q(1), Q(0), Q(1)}) == F.zero());

    // Vertical chord: one boundary point at t = -1, the other at infinity;
    // the cross ratio degenerates to (1 - ta)/(-ta) = 2, d = log(2)/2.
    Interval d = hilbert_distance_omega0(3, pt({2, 1, 1, 1}), pt({3, 1, 1, 1}), 44);
    Interval half_log2 = Rational(1, 2) * log_point(Q(2), 50);
    CHECK(overlaps(d, half_log2));

    // Horizontal chord in the parabola section: boundary at t = +-sqrt(2)
    // from x = (1,0,0), y = (1,1,0); cross ratio (1+sqrt2)^2 = 3 + 2 sqrt2.
    Interval dh = hilbert_distance_omega0(3, pt({1, 0, 0, 1}), pt({1, 1, 0, 1}), 44);
    double oracle = 0.5 * std::log(3.0 + 2.0 * std::sqrt(2.0));
    CHECK(std::abs(to_double(Rational(1, 2) * (dh.lo + dh.hi)) - oracle) < 1e-9);

    // Same point, scaled coordinates: exact zero.
    CHECK(hilbert_distance_omega0(3, pt({2, 1, 1, 1}), pt({4, 2, 2, 2}), 20).lo == Q(0));

    CHECK(error_code_of([] {
              hilbert_distance_omega0(3, ptq({Q(1, 2), Q(1), Q(0), Q(1)}), pt({2, 1, 1, 1}), 20);
          }) == "PointOnBoundary");
    CHECK(error_code_of(
              [] { hilbert_distance_omega0(3, pt({0, 1, 0, 1}), pt({2, 1, 1, 1}), 20); }) ==
          "PointOutside");
    CHECK(error_code_of([] { omega0_quadric(0); }) == "DimensionTooSmall");
}

TEST_CASE("omega1 distances handle the transcendental boundary", "[projgeom]") {
    // Vertical chord at z_2 = 1: f(z) = z_1 + log z_2 - z_3^2/2 reduces to
    // z_1, boundary exactly at t = -1, far side open: d = log(2)/2 again.
    Interval d = hilbert_distance_omega1(3, pt({1, 1, 0, 1}), pt({2, 1, 0, 1}), 44);
    Interval half_log2 = Rational(1, 2) * log_point(Q(2), 50);
    CHECK(overlaps(d, half_log2));

    // Chord along z_2: boundary where 1 + log(1+t) = 0, i.e. ta = 1/e - 1;
    // cross ratio (2 - 1/e)/(1 - 1/e).
    Interval d2 = hilbert_distance_omega1(3, pt({1, 1, 0, 1}), pt({1, 2, 0, 1}), 44);
    double inv_e = std::exp(-1.0);
    double oracle = 0.5 * std::log((2.0 - inv_e) / (1.0 - inv_e));
    CHECK(std::abs(to_double(Rational(1, 2) * (d2.lo + d2.hi)) - oracle) < 1e-9);
    CHECK(d2.width() <= pow2(-44));

    // Exact zero on proportional input.
    CHECK(hilbert_distance_omega1(3, pt({1, 1, 0, 1}), pt({2, 2, 0, 2}), 20).lo == Q(0));

    CHECK(error_code_of([] { hilbert_distance_omega1(3, pt({0, 1, 0, 1}), pt({1, 1, 0, 1}), 20); }) ==
          "PointOnBoundary");
    CHECK(error_code_of(
              [] { hilbert_distance_omega1(3, pt({-1, 1, 0, 1}), pt({1, 1, 0, 1}), 20); }) ==
          "PointOutside");
    CHECK(error_code_of(
              [] { hilbert_distance_omega1(3, pt({1, -1, 0, 1}), pt({1, 1, 0, 1}), 20); }) ==
          "PointOutside");
    CHECK(error_code_of([] { hilbert_distance_omega1(1, pt({1, 1}), pt({2, 1}), 20); }) ==
          "DimensionTooSmall");
}

TEST_CASE("cusp translations form the expected abelian families", "[projgeom]") {
    CuspModel m0(0, 3);
    CuspTranslation t = cusp_translation(m0, {Q(2), Q(-1)});
    CHECK(t.parabolic);
    // [[1, v, |v|^2/2], [0, I, v^t], [0, 0, 1]] with v = (2, -1).
    CHECK(t.matrix.at(0, 1) == Q(2));
    CHECK(t.matrix.at(0, 2) == Q(-1));
    CHECK(t.matrix.at(0, 3) == Q(5, 2));
    CHECK(t.matrix.at(1, 3) == Q(2));
    CHECK(t.matrix.at(2, 3) == Q(-1));
    CHECK(t.matrix.at(1, 1) == Q(1));
    CHECK(t.matrix.at(3, 3) == Q(1));

    // Translation law T(v) T(w) = T(v+w).
    CuspTranslation tw = cusp_translation(m0, {Q(1, 2), Q(3)});
    CuspTranslation tsum = cusp_translation(m0, {Q(5, 2), Q(2)});
    CHECK(t.matrix * tw.matrix == tsum.matrix);
    CHECK(tw.matrix * t.matrix == tsum.matrix);

    CuspModel m1(1, 3);
    CuspTranslation par = cusp_translation(m1, Q(0), {Q(3)});
    CHECK(par.parabolic);
    CHECK(par.matrix.at(1, 1) == Q(1));
    CuspTranslation hyp = cusp_translation(m1, Q(2), {Q(0)});
    CHECK_FALSE(hyp.parabolic);
    CHECK(hyp.matrix.at(1, 1) == Q(2));

    CHECK(error_code_of([&] { cusp_translation(m1, {Q(1), Q(2)}); }) == "ParseError");
    CHECK(error_code_of([&] { cusp_translation(m0, {Q(1)}); }) == "SizeMismatch");
    CHECK(error_code_of([&] { cusp_translation(m0, Q(1), {Q(1)}); }) == "ParseError");
    CHECK(error_code_of([] { CuspModel(2, 3); }) == "ParseError");
    CHECK(error_code_of([] { CuspModel(0, 0); }) == "DimensionTooSmall");
    CHECK(error_code_of([] { CuspModel(1, 1); }) == "DimensionTooSmall");
}

TEST_CASE("horosphere leaves are preserved exactly by parabolics", "[projgeom]") {
    CuspModel m0(0, 3);
    Rational c(3, 2);
    // Build points on H_c by construction: z_1 = c + (z_2^2 + z_3^2)/2.
    auto on_leaf0 = [&](Rational z2, Rational z3) {
        return ptq({c + (z2 * z2 + z3 * z3) / 2, z2, z3, Q(1)});
    };
    CuspTranslation t = cusp_translation(m0, {Q(2), Q(-1, 3)});
    CHECK(horosphere_check(m0, c, on_leaf0(Q(0), Q(0)), t.matrix));
    CHECK(horosphere_check(m0, c, on_leaf0(Q(-5, 2), Q(7)), t.matrix));

    // A matrix off the translation family moves the point off the leaf.
    Matrix<Rational> stretch = Matrix<Rational>::identity(4, Q(0));
    stretch.at(0, 0) = Q(2);
    stretch.at(3, 3) = Q(1, 2);
    CHECK_FALSE(horosphere_check(m0, c, on_leaf0(Q(1), Q(1)), stretch));

    // Type 1: rational leaf points need x_2 = 1, so z_1 = c + z_3^2/2.
    CuspModel m1(1, 3);
    auto on_leaf1 = [&](Rational z3) { return ptq({c + z3 * z3 / 2, Q(1), z3, Q(1)}); };
    CuspTranslation par = cusp_translation(m1, Q(0), {Q(5, 4)});
    CHECK(horosphere_check(m1, c, on_leaf1(Q(2)), par.matrix));
    CuspTranslation hyp = cusp_translation(m1, Q(2), {Q(0)});
    CHECK_FALSE(horosphere_check(m1, c, on_leaf1(Q(2)), hyp.matrix));

    // Image that leaves the affine patch reports false, not an error.
    Matrix<Rational> collapse(4, 4, Q(0));
    collapse.at(0, 0) = Q(1);
    CHECK_FALSE(horosphere_check(m0, c, on_leaf0(Q(1), Q(0)), collapse));

    CHECK(error_code_of([&] { horosphere_check(m0, Q(0), on_leaf0(Q(0), Q(0)), t.matrix); }) ==
          "InvalidThreshold");
    CHECK(error_code_of([&] { horosphere_check(m0, Q(-1), on_leaf0(Q(0), Q(0)), t.matrix); }) ==
          "InvalidThreshold");
    CHECK(error_code_of([&] { horosphere_check(m0, c, pt({1, 1, 1}), t.matrix); }) ==
          "SizeMismatch");
    CHECK(error_code_of([&] {
              horosphere_check(m0, c, on_leaf0(Q(0), Q(0)), Matrix<Rational>::identity(3, Q(0)));
          }) == "SizeMismatch");
    CHECK(error_code_of([&] { horosphere_check(m0, c, pt({1, 0, 0, 0}), t.matrix); }) ==
          "NotOnLeaf");
    CHECK(error_code_of([&] { horosphere_check(m0, c, pt({0, 0, 0, 1}), t.matrix); }) ==
          "NotOnLeaf");
    CHECK(error_code_of([&] { horosphere_check(m1, c, ptq({c, Q(2), Q(0), Q(1)}), t.matrix); }) ==
          "NotOnLeaf");
}

TEST_CASE("orbit openness rank matches the kernel description", "[projgeom]") {
    // Open exactly when x_2 != 0 and x_{n+1} != 0.
    CHECK(orbit_openness(pt({1, 1, 1, 1}), 3).open);
    CHECK(orbit_openness(pt({1, 1, 1, 1}), 3).rank == 3);
    CHECK(orbit_openness(pt({-3, 2, 0, 5}), 3).open);

    CHECK_FALSE(orbit_openness(pt({1, 0, 1, 1}), 3).open);
    CHECK(orbit_openness(pt({1, 0, 1, 1}), 3).rank == 2);
    CHECK_FALSE(orbit_openness(pt({1, 1, 1, 0}), 3).open);
    CHECK(orbit_openness(pt({1, 1, 1, 0}), 3).rank == 2);
    CHECK(orbit_openness(pt({1, 0, 0, 0}), 3).rank == 0);
    CHECK(orbit_openness(pt({0, 0, 1, 0}), 3).rank == 1);

    // Homogeneity: scaling the representative changes nothing.
    CHECK(orbit_openness(pt({2, 2, 2, 2}), 3).rank == 3);
    CHECK(orbit_openness(pt({-2, 0, -2, -2}), 3).rank == 2);

    // n = 4 has one more mixing direction.
    CHECK(orbit_openness(pt({1, 1, 1, 1, 1}), 4).rank == 4);
    CHECK(orbit_openness(pt({1, 1, 1, 1, 1}), 4).open);
    CHECK(orbit_openness(pt({1, 0, 1, 1, 1}), 4).rank == 3);

    CHECK(error_code_of([] { orbit_openness(pt({1, 1}), 1); }) == "DimensionTooSmall");
    CHECK(error_code_of([] { orbit_openness(pt({1, 1, 1}), 3); }) == "SizeMismatch");
}

TEST_CASE("duality conjugates the group to the inverse form", "[projgeom]") {
    NumberField F = desk::field();
    BaseMatrix a = desk::gen_a(F);
    BaseMatrix b = desk::gen_b(F);
    BaseMatrix j = desk::form(F).matrix_F();
    BaseMatrix jinv = j.inverse();

    for (const BaseMatrix& g : {a, b, a * b}) {
        BaseMatrix d = dual_element(g);
        // g in SO(J) implies g^{-t} preserves J^{-1}.
        CHECK(d.transpose() * jinv * d == jinv);
        CHECK(dual_element(d) == g);
    }
    CHECK(dual_element(a * b) == dual_element(a) * dual_element(b));
}

TEST_CASE("svg rendering emits well-formed plots", "[projgeom]") {
    std::string svg0 = render_cusp_svg(CuspModel(0, 3), {Q(1), Q(2), Q(3)});
    CHECK(svg0.find("<svg") == 0);
    CHECK(svg0.find("</svg>") != std::string::npos);
    // one boundary curve plus one polyline per leaf
    std::size_t count = 0;
    for (std::size_t p = svg0.find("<polyline"); p != std::string::npos;
         p = svg0.find("<polyline", p + 1))
        ++count;
    CHECK(count == 4);

    std::string svg1 = render_cusp_svg(CuspModel(1, 3), {Q(1)});
    CHECK(svg1.find("<svg") == 0);
    CHECK(svg1.find("</svg>") != std::string::npos);
}
