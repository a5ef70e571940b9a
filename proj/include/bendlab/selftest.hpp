#pragma once

// The acceptance checks, shared between `bendlab selftest` and the
// standalone acceptance test binary. Each check is self-contained, seeds its
// own RNG, and pins every tolerance in code. A check fails on the first
// violated expectation or when it exceeds its runtime budget.

#include "bendlab/certify.hpp"
#include "bendlab/desk.hpp"
#include "bendlab/pipeline.hpp"
#include "bendlab/projgeom.hpp"
#include "bendlab/units.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bendlab {

struct Checker {
    bool ok = true;
    std::string message;

    void expect(bool cond, const std::string& what) {
        if (ok && !cond) {
            ok = false;
            message = what;
        }
    }
};

struct SelfTest {
    int criterion;  // 1..9, or 0 for auxiliary checks
    std::string name;
    double budget_seconds;
    std::function<void(Checker&, const std::string& data_dir)> body;
};

struct SelfTestResult {
    std::string name;
    bool pass = false;
    double seconds = 0;
    std::string message;
};

namespace detail {

inline long rnd(std::mt19937& g, long lo, long hi) {
    return lo + static_cast<long>(g() % static_cast<unsigned long>(hi - lo + 1));
}

inline std::string evidence_value(const Certificate& c, const std::string& key) {
    for (const auto& [k, v] : c.evidence)
        if (k == key) return v;
    return "";
}

inline NumberField field_sqrt2() {
    return NumberField(QPoly({Rational(-2), Rational(0), Rational(1)}), -1, "Q(sqrt2)");
}

// |a| <= b guarantees a + b*sqrt2 > 0 and a - b*sqrt2 < 0: a valid form entry
inline AlgebraicNumber random_alpha(const NumberField& F, std::mt19937& g) {
    if (F.degree() == 1) return F.from_rational(Rational(rnd(g, 1, 9)));
    long b = rnd(g, 1, 9);
    long a = rnd(g, -b, b);
    return AlgebraicNumber(F, {Rational(a), Rational(b)});
}

// interval midpoints agree within tol
inline bool close(const Interval& a, const Interval& b, const Rational& tol) {
    return a.lo <= b.hi + tol && b.lo <= a.hi + tol;
}

// --- criterion 1: diagonal bending blocks are special-unitary, exactly ---
inline void check_bending_unitarity(Checker& c, const std::string&) {
    std::mt19937 g(20260814u);
    std::vector<std::pair<NumberField, AlgebraicNumber>> bases;
    NumberField FQ = desk::field();
    bases.emplace_back(FQ, FQ.from_rational(Rational(3)));
    NumberField F2 = field_sqrt2();
    bases.emplace_back(F2, AlgebraicNumber(F2, {Rational(3), Rational(2)}));
    for (const auto& [F, trace] : bases) {
        QuadExtension E(F, trace);
        ExtElement s = E.gen();
        std::vector<ExtElement> units = {s, s * s, E.zero() - s};
        for (long n = 2; n <= 4; ++n) {
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<AlgebraicNumber> alphas;
                for (long i = 0; i < n; ++i) alphas.push_back(random_alpha(F, g));
                Form j(F, alphas);
                for (const ExtElement& u : units)
                    c.expect(su_membership(bending_matrix(u, n), j),
                             "bending matrix failed exact su membership over " + F.label() +
                                 " at n = " + std::to_string(n));
            }
        }
    }
}

// --- criterion 2: special-unit search over Q(sqrt2), rank-zero error over Q ---
inline void check_special_unit(Checker& c, const std::string&) {
    NumberField F2 = field_sqrt2();
    AlgebraicNumber fu(F2, {Rational(1), Rational(1)});  // 1 + sqrt2
    SpecialUnit su = find_special_unit(UnitSearchProblem(F2, {fu}, Rational(10)));
    c.expect(su.u == AlgebraicNumber(F2, {Rational(17), Rational(12)}),
             "expected the unit 17 + 12 sqrt2");
    c.expect(su.power_witness == std::vector<long>{4}, "expected power witness (1+sqrt2)^4");
    c.expect(su.embedding_evidence.size() == 2, "expected evidence at both places");
    if (!c.ok) return;
    const Interval& id = su.embedding_evidence[0];
    const Interval& other = su.embedding_evidence[1];
    Rational w40 = pow2(-40);
    c.expect(id.lo > Rational(10), "identity embedding not certified > 10");
    c.expect(other.lo > Rational(0) && other.hi < Rational(1),
             "other embedding not certified inside (0,1)");
    c.expect(id.width() <= w40 && other.width() <= w40, "evidence wider than 2^-40");

    bool rank_zero = false;
    try {
        find_special_unit(UnitSearchProblem(desk::field(), {}, Rational(10)));
    } catch (const Error& e) {
        rank_zero = (e.code == "RankZeroField");
    }
    c.expect(rank_zero, "search over Q did not raise RankZeroField");
}

// --- criterion 3: the bundled HNN instance bends into SU(J), exactly ---
inline void check_desk_bending(Checker& c, const std::string& data_dir) {
    LoadedInstance li = load_instance(data_dir + "/desk/instance.ini");
    const BendingInstance& inst = li.instance;
    c.expect(inst.form.n() == 2, "bundled instance is not n = 2");
    c.expect(inst.unit == li.ext.gen(), "bundled instance is not bent at u = s");
    auto rep = bend(inst);
    for (const auto& [name, m] : rep)
        c.expect(su_membership(m, inst.form),
                 "bent image of '" + name + "' failed exact su membership");
    FieldMatrix b = bending_matrix(inst.unit, inst.form.n());
    for (const Word& w : inst.decomposition.lambda_words) {
        FieldMatrix edge = evaluate_word(inst.lifted_rep(), w);
        c.expect(centralizes_block(b, edge) && b * edge == edge * b,
                 "B_s does not centralize the edge generator exactly");
    }
}

// --- criterion 4: Hilbert metric values, invariance, metric axioms ---
inline void check_hilbert_metric(Checker& c, const std::string&) {
    // pinned: log(3)/2 = 0.54930614433405484569762261846... (+-1e-29)
    Rational half_log3 =
        parse_rational("54930614433405484569762261846/100000000000000000000000000000");
    Rational tol12 = parse_rational("1/1000000000000");
    Interval d0 = hilbert_distance_segment(Rational(0), Rational(1, 2), 50);
    c.expect(d0.lo >= half_log3 - tol12 && d0.hi <= half_log3 + tol12,
             "d(0, 1/2) on the segment is not log(3)/2 within 1e-12");

    NumberField F = desk::field();
    Form j(F, {F.one(), F.one()});  // Klein disk, J = diag(1,1,-1)
    Matrix<Rational> m = Matrix<Rational>::from_rows(
        {{Rational(2), Rational(1), Rational(2)},
         {Rational(1), Rational(2), Rational(2)},
         {Rational(2), Rational(2), Rational(3)}});
    Matrix<Rational> jr = Matrix<Rational>::from_rows(
        {{Rational(1), Rational(0), Rational(0)},
         {Rational(0), Rational(1), Rational(0)},
         {Rational(0), Rational(0), Rational(-1)}});
    // derived isometry: verify m is in SO(J;Z) before using it
    c.expect(m.transpose() * jr * m == jr,
             "candidate integer matrix does not preserve diag(1,1,-1)");

    std::mt19937 g(404u);
    auto disk_point = [&]() {
        while (true) {
            Rational x(rnd(g, -15, 15), 16), y(rnd(g, -15, 15), 16);
            if (x * x + y * y < Rational(1)) return ProjPoint({x, y, Rational(1)});
        }
    };
    Rational tol10 = parse_rational("1/10000000000");
    for (int i = 0; i < 100 && c.ok; ++i) {
        ProjPoint p = disk_point(), q = disk_point();
        Interval d1 = hilbert_distance_klein(j, p, q, 44);
        Interval d2 = hilbert_distance_klein(j, ProjPoint(m.apply(p.coords)),
                                             ProjPoint(m.apply(q.coords)), 44);
        c.expect(close(d1, d2, tol10), "Klein distance not invariant under the SO(J;Z) element");
    }
    for (int i = 0; i < 200 && c.ok; ++i) {
        ProjPoint p = disk_point(), q = disk_point(), r = disk_point();
        Interval pq = hilbert_distance_klein(j, p, q, 40);
        Interval qp = hilbert_distance_klein(j, q, p, 40);
        Interval qr = hilbert_distance_klein(j, q, r, 40);
        Interval pr = hilbert_distance_klein(j, p, r, 40);
        c.expect(close(pq, qp, tol10), "Hilbert distance is not symmetric");
        c.expect(pr.lo <= pq.hi + qr.hi + tol10, "triangle inequality violated");
    }
}

// --- criterion 5: cusp translations preserve horosphere leaves ---
inline void check_cusp_models(Checker& c, const std::string&) {
    std::mt19937 g(505u);
    for (long n : {3L, 4L}) {
        CuspModel m0(0, n);
        for (int i = 0; i < 50 && c.ok; ++i) {
            Rational lc(rnd(g, 1, 4));
            std::vector<Rational> z(n);
            for (long k = 1; k < n; ++k) z[k] = Rational(rnd(g, -8, 8), 4);
            z[0] = lc;
            for (long k = 1; k < n; ++k) z[0] += z[k] * z[k] / 2;
            std::vector<Rational> coords = z;
            coords.push_back(Rational(1));
            std::vector<Rational> v(n - 1);
            for (auto& t : v) t = Rational(rnd(g, -8, 8), 4);
            CuspTranslation tr = cusp_translation(m0, v);
            c.expect(tr.parabolic, "type-0 translations must be parabolic");
            c.expect(horosphere_check(m0, lc, ProjPoint(coords), tr.matrix),
                     "type-0 translation moved a point off its leaf");
        }

        CuspModel m1(1, n);
        for (int i = 0; i < 25 && c.ok; ++i) {
            Rational lc(rnd(g, 1, 4));
            std::vector<Rational> z(n);
            z[1] = Rational(1);  // the exactly checkable chart slice
            for (long k = 2; k < n; ++k) z[k] = Rational(rnd(g, -8, 8), 4);
            z[0] = lc;
            for (long k = 2; k < n; ++k) z[0] += z[k] * z[k] / 2;
            std::vector<Rational> coords = z;
            coords.push_back(Rational(1));
            std::vector<Rational> v(n - 2);
            for (auto& t : v) t = Rational(rnd(g, -8, 8), 4);
            CuspTranslation para = cusp_translation(m1, Rational(0), v);
            c.expect(para.parabolic, "u = 0 must be parabolic");
            c.expect(horosphere_check(m1, lc, ProjPoint(coords), para.matrix),
                     "type-1 parabolic moved a point off its leaf");
            CuspTranslation loxo = cusp_translation(m1, Rational(2), v);
            c.expect(!loxo.parabolic, "u = 2 must not be parabolic");
            c.expect(!horosphere_check(m1, lc, ProjPoint(coords), loxo.matrix),
                     "non-parabolic element unexpectedly preserved the leaf");
        }
    }
}

// --- criterion 6: orbit openness vs. the kernel criterion and a sampler ---

// numerical rank of the local orbit cloud around x under the closure of P_1
// (doubles; independent of the exact tangent-space computation)
inline long sampled_orbit_rank(const std::vector<double>& x) {
    const std::size_t dim = x.size();  // n + 1
    const long n = static_cast<long>(dim) - 1;
    const double h = 1e-4;
    std::mt19937 g(606u);
    auto small = [&]() { return (static_cast<double>(g()) / 4294967296.0 * 2.0 - 1.0) * h; };
    double xn = 0;
    for (double t : x) xn += t * t;
    xn = std::sqrt(xn);
    std::vector<std::vector<double>> rows;
    for (int trial = 0; trial < 60; ++trial) {
        double u = small(), w = small();
        std::vector<double> v(static_cast<std::size_t>(n - 2));
        for (auto& t : v) t = small();
        // group element: exp(u) on the (2,2) slot, translation (v, w)
        std::vector<double> y(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) y[i] = x[i];
        y[1] = std::exp(u) * x[1];
        double vnorm2 = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            y[0] += v[i] * x[2 + i];
            y[2 + i] += v[i] * x[dim - 1];
            vnorm2 += v[i] * v[i];
        }
        y[0] += (w + vnorm2 / 2) * x[dim - 1];
        double ynorm = 0, dot = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            ynorm += y[i] * y[i];
            dot += y[i] * x[i];
        }
        ynorm = std::sqrt(ynorm);
        double sign = dot < 0 ? -1.0 : 1.0;
        std::vector<double> row(dim);
        for (std::size_t i = 0; i < dim; ++i) row[i] = (sign * y[i] / ynorm - x[i] / xn) / h;
        rows.push_back(std::move(row));
    }
    // modified Gram-Schmidt with a scale cutoff well above the O(h) noise
    std::vector<std::vector<double>> basis;
    for (auto& row : rows) {
        for (const auto& b : basis) {
            double d = 0;
            for (std::size_t i = 0; i < dim; ++i) d += row[i] * b[i];
            for (std::size_t i = 0; i < dim; ++i) row[i] -= d * b[i];
        }
        double nrm = 0;
        for (double t : row) nrm += t * t;
        nrm = std::sqrt(nrm);
        if (nrm > 5e-3) {
            for (double& t : row) t /= nrm;
            basis.push_back(row);
        }
    }
    return static_cast<long>(basis.size());
}

inline void check_orbit_openness(Checker& c, const std::string&) {
    const long n = 3;
    long seen = 0;
    for (long z1 = -2; z1 <= 2 && seen < 200; ++z1)
        for (long z2 = -2; z2 <= 2 && seen < 200; ++z2)
            for (long z3 = -2; z3 <= 2 && seen < 200; ++z3)
                for (long z4 = -2; z4 <= 2 && seen < 200; ++z4) {
                    if (z1 == 0 && z2 == 0 && z3 == 0 && z4 == 0) continue;
                    ++seen;
                    ProjPoint p({Rational(z1), Rational(z2), Rational(z3), Rational(z4)});
                    OrbitReport r = orbit_openness(p, n);
                    bool outside_kernels = (z2 != 0) && (z4 != 0);
                    c.expect(r.open == outside_kernels,
                             "openness disagrees with the kernel criterion at (" +
                                 std::to_string(z1) + "," + std::to_string(z2) + "," +
                                 std::to_string(z3) + "," + std::to_string(z4) + ")");
                    c.expect(r.open == (r.rank == n), "rank / openness mismatch");
                }
    c.expect(seen == 200, "grid did not produce 200 points");

    const std::vector<std::vector<long>> spots = {
        {1, 1, 1, 1}, {2, -1, 1, 1}, {1, 2, -1, 1}, {3, 1, 1, 2}, {1, 1, 0, 1},
        {1, 0, 1, 1}, {1, 1, 1, 0}, {1, 0, 0, 0},  {0, 0, 1, 0}, {0, 1, 0, 2}};
    for (const auto& s : spots) {
        ProjPoint p({Rational(s[0]), Rational(s[1]), Rational(s[2]), Rational(s[3])});
        OrbitReport r = orbit_openness(p, n);
        std::vector<double> x(s.begin(), s.end());
        long sampled = sampled_orbit_rank(x);
        c.expect(sampled == r.rank, "sampler rank " + std::to_string(sampled) +
                                        " != exact rank " + std::to_string(r.rank) + " at (" +
                                        std::to_string(s[0]) + "," + std::to_string(s[1]) + "," +
                                        std::to_string(s[2]) + "," + std::to_string(s[3]) + ")");
    }
}

// --- criterion 7: proximality / irreducibility / invariant forms ---
inline void check_certification(Checker& c, const std::string&) {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);

    auto fm = [&](std::vector<std::vector<long>> rows) {
        FieldMatrix m(static_cast<long>(rows.size()), static_cast<long>(rows.size()), E.zero());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows.size(); ++k)
                m.at(static_cast<long>(i), static_cast<long>(k)) =
                    E.from_rational(Rational(rows[i][k]));
        return m;
    };

    Certificate hyp = proximality(fm({{4, -1}, {1, 0}}));  // eigenvalues 2 +- sqrt3
    c.expect(hyp.verdict == "pass", "hyperbolic block not certified proximal");
    c.expect(!evidence_value(hyp, "separation_at_least").empty(),
             "proximality pass lacks a separation bound");

    Certificate idc = proximality(fm({{1, 0}, {0, 1}}));
    c.expect(idc.verdict == "fail" && idc.detail.find("repeated") != std::string::npos,
             "identity not rejected as repeated");

    Certificate rot = proximality(fm({{0, -1}, {1, 0}}));  // exact rational rotation
    c.expect(rot.verdict == "fail" && rot.detail.find("conjugate pair") != std::string::npos,
             "rotation not rejected via its conjugate pair");

    BendingInstance bent = desk::bent_instance();
    auto rep = bend(bent);
    std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};
    Certificate burn = burnside_irreducibility(pair, 6);
    c.expect(burn.verdict == "pass" && evidence_value(burn, "span_dimension") == "9",
             "bent desk pair does not span the 9-dimensional matrix space");

    std::vector<FieldMatrix> single = {lift_to_ext(E, desk::gen_a(F))};
    Certificate burn1 = burnside_irreducibility(single, 6);
    c.expect(burn1.verdict == "inconclusive" && evidence_value(burn1, "span_dimension") == "3",
             "single block generator should span exactly 3");

    BendingInstance unbent = desk::instance(E.one());
    std::vector<FieldMatrix> ugens;
    for (const auto& [name, m] : bend(unbent)) ugens.push_back(m);
    auto sym = invariant_form_basis(ugens, FormSymmetry::symmetric);
    c.expect(sym.size() >= 1, "unbent generators lost the invariant symmetric form");
    c.expect(span_contains(sym, unbent.form.matrix_L(E).flatten()),
             "invariant symmetric space does not contain J");

    auto bsym = invariant_form_basis(pair, FormSymmetry::symmetric);
    c.expect(bsym.empty(), "finding: unexpected invariant symmetric form space of dimension " +
                               std::to_string(bsym.size()) + " for the bent pair");
}

// --- criterion 8: congruence image: SL(3,2) in full, Lagrange, determinism ---
inline void check_congruence_image(Checker& c, const std::string&) {
    NumberField F = desk::field();
    QuadExtension E6(F, F.from_rational(Rational(6)));  // s-poly is (x+1)^2 mod 2

    auto elem = [&](long i, long k) {
        FieldMatrix m = FieldMatrix::identity(3, E6.zero());
        m.at(i, k) = E6.one();
        return m;
    };
    std::vector<FieldMatrix> gens = {elem(0, 1), elem(1, 0), elem(1, 2), elem(2, 1)};
    Certificate full = congruence_image_order(gens, 2);
    c.expect(full.verdict == "pass", "SL(3,2) generators did not fill the congruence image");
    c.expect(evidence_value(full, "order") == "168", "BFS order is not 168");
    c.expect(evidence_value(full, "q") == "2", "reduction is not over F_2");
    c.expect(evidence_value(full, "lagrange_divides") == "true", "Lagrange check failed");

    // the bundled bent pair reduces to a proper subgroup at p = 2; divisibility
    // must still hold for that BFS run
    BendingInstance bent = desk::bent_instance();
    auto rep = bend(bent);
    std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};
    Certificate proper = congruence_image_order(pair, 2);
    c.expect(proper.verdict == "fail", "bent desk pair should be proper mod 2");
    c.expect(evidence_value(proper, "lagrange_divides") == "true",
             "Lagrange check failed on the proper image");

    Certificate again = congruence_image_order(gens, 2);
    c.expect(certificate_json(full).dump() == certificate_json(again).dump(),
             "congruence certificate is not byte-identical across runs");
}

// --- criterion 9: unit-rank identity and the Salem modulus pattern ---
inline void check_unit_rank(Checker& c, const std::string&) {
    NumberField FQ = desk::field();
    QuadExtension e_desk = desk::extension(FQ);
    UnitRankReport r1 = unit_rank_report(e_desk);
    c.expect(r1.degree_F == 1 && r1.rank_F == 0 && r1.rank_L == 1 &&
                 r1.complex_pairs_L == 0,
             "unit ranks over Q should be rank_F = 0, rank_L = 1");
    c.expect(r1.rank_L == 2 + (2 * r1.degree_F - 2) / 2 - 1, "place-counting identity failed");

    NumberField F2 = detail::field_sqrt2();
    std::vector<QuadExtension> exts;
    exts.emplace_back(F2, AlgebraicNumber(F2, {Rational(3), Rational(2)}));
    exts.emplace_back(F2, AlgebraicNumber(F2, {Rational(17), Rational(12)}));
    Rational w40 = pow2(-40);
    for (const QuadExtension& E : exts) {
        UnitRankReport r = unit_rank_report(E);
        c.expect(r.degree_F == 2 && r.rank_F == 1 && r.rank_L == 2 && r.complex_pairs_L == 1,
                 "unit ranks over Q(sqrt2) should be rank_F = 1, rank_L = 2");
        c.expect(r.rank_L == 2 + (2 * r.degree_F - 2) / 2 - 1, "place-counting identity failed");
        // at the non-identity place s is complex of modulus exactly 1:
        // |s|^2 = (u/2)^2 + (4 - u^2)/4; certify numerically at 2^-40
        Interval u = E.trace().embed(1, 100);
        Interval disc = u * u - Interval(Rational(4));
        c.expect(disc.hi < Rational(0), "discriminant not negative at the non-identity place");
        Interval modsq = (u * u + (Interval(Rational(4)) - u * u)) * Interval(Rational(1, 4));
        c.expect(modsq.contains(Rational(1)) && modsq.width() <= w40,
                 "complex embedding modulus not certified to be 1 within 2^-40");
    }
}

// --- auxiliary: bundled pipeline output matches the committed golden report ---
inline void check_golden_report(Checker& c, const std::string& data_dir) {
    std::string golden_path = data_dir + "/desk/golden_report.json";
    std::string golden = read_text_file(golden_path);
    Pipeline p = build_pipeline(data_dir + "/desk/pipeline.ini");
    PipelineResult r = run_pipeline(p, false);
    c.expect(r.exit_code == 0, "bundled pipeline did not pass its hard checks");
    c.expect(r.report.dump(2) + "\n" == golden,
             "golden report mismatch: " + golden_path + " does not match the recomputed report");
}

}  // namespace detail

inline const std::vector<SelfTest>& self_tests() {
    static const std::vector<SelfTest> tests = {
        {1, "bending-unitarity", 1.0, detail::check_bending_unitarity},
        {2, "special-unit", 1.0, detail::check_special_unit},
        {3, "desk-bending", 1.0, detail::check_desk_bending},
        {4, "hilbert-metric", 5.0, detail::check_hilbert_metric},
        {5, "cusp-models", 2.0, detail::check_cusp_models},
        {6, "orbit-openness", 2.0, detail::check_orbit_openness},
        {7, "certification", 10.0, detail::check_certification},
        {8, "congruence-image", 5.0, detail::check_congruence_image},
        {9, "unit-rank", 1.0, detail::check_unit_rank},
        {0, "golden-report", 10.0, detail::check_golden_report},
    };
    return tests;
}

inline SelfTestResult run_self_test(const SelfTest& t, const std::string& data_dir) {
    SelfTestResult r;
    r.name = t.name;
    Checker c;
    auto start = std::chrono::steady_clock::now();
    try {
        t.body(c, data_dir);
    } catch (const Error& e) {
        c.ok = false;
        c.message = std::string("unexpected error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.ok && r.seconds > t.budget_seconds) {
        c.ok = false;
        std::ostringstream os;
        os << "runtime " << r.seconds << " s exceeded the " << t.budget_seconds << " s budget";
        c.message = os.str();
    }
    r.pass = c.ok;
    r.message = c.message;
    return r;
}

// Runs every test whose name contains `filter`, printing one line each.
// Returns the process exit code: 0 when all selected tests pass.
inline int run_self_tests(const std::string& data_dir, const std::string& filter,
                          std::ostream& out) {
    int failures = 0;
    long selected = 0;
    for (const SelfTest& t : self_tests()) {
        if (t.name.find(filter) == std::string::npos) continue;
        ++selected;
        SelfTestResult r = run_self_test(t, data_dir);
        std::ostringstream line;
        if (t.criterion > 0)
            line << "criterion " << t.criterion << " (" << t.name << "): ";
        else
            line << "check (" << t.name << "): ";
        line << (r.pass ? "PASS" : "FAIL");
        std::ostringstream secs;
        secs.setf(std::ios::fixed);
        secs.precision(2);
        secs << r.seconds;
        line << " [" << secs.str() << " s / " << t.budget_seconds << " s]";
        if (!r.pass) line << " -- " << r.message;
        out << line.str() << "\n";
        if (!r.pass) ++failures;
    }
    if (selected == 0) {
        out << "no self tests match filter '" << filter << "'\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace bendlab
