// Thinness certificates: proximality of eigenvalue moduli, Burnside word
// spans, invariant-form solution spaces, congruence image orders, and the
// aggregate report. Every numeric pin below is recomputed by hand in the
// comments next to it.

#include "bendlab/certify.hpp"
#include "bendlab/desk.hpp"
#include "bendlab/finitefield.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

using namespace bendlab;
using testsupport::error_code_of;
using testsupport::Q;

namespace {

std::optional<std::string> evidence_of(const Certificate& c, const std::string& key) {
    for (const auto& [k, v] : c.evidence)
        if (k == key) return v;
    return std::nullopt;
}

std::optional<std::string> parameter_of(const Certificate& c, const std::string& key) {
    for (const auto& [k, v] : c.parameters)
        if (k == key) return v;
    return std::nullopt;
}

FieldMatrix lift_rows(const QuadExtension& ext, std::vector<std::vector<long>> rows) {
    return lift_to_ext(ext, desk::matrix(ext.base(), std::move(rows)));
}

FqMatrix fq_mat(long m, std::initializer_list<int> vals) {
    FqMatrix r;
    r.m = m;
    long i = 0;
    for (int v : vals) r.e[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(v);
    return r;
}

}  // namespace

TEST_CASE("proximality certifies dominant simple eigenvalues", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);

    SECTION("hyperbolic block with a rational runner-up") {
        // eigenvalues 1 and 2 +- sqrt(3); top squared modulus 7 + 4 sqrt(3)
        Certificate c = proximality(lift_to_ext(E, desk::gen_a(F)));
        CHECK(c.check == "proximality");
        REQUIRE(c.verdict == "pass");
        CHECK(c.detail == "unique simple real eigenvalue of maximal modulus, certified separation");
        CHECK(evidence_of(c, "top_root_box").has_value());  // irrational top: box, not value
        CHECK(evidence_of(c, "top_squared_modulus").has_value());
        // runner-up is the exact rational eigenvalue 1
        CHECK(evidence_of(c, "runner_up_squared_modulus_at_most") == std::string("1"));
        // certified gap is a lower bound for the true gap (7 + 4 sqrt 3) - 1 ~ 12.9282
        Rational sep = parse_rational(*evidence_of(c, "separation_at_least"));
        CHECK(sep > Q(0));
        CHECK(sep < Q(1293, 100));
    }

    SECTION("two-by-two hyperbolic block") {
        // both roots 2 +- sqrt(3) share the factor; separation <= 8 sqrt(3) ~ 13.8564
        Certificate c = proximality(lift_rows(E, {{2, 1}, {3, 2}}));
        REQUIRE(c.verdict == "pass");
        Rational sep = parse_rational(*evidence_of(c, "separation_at_least"));
        CHECK(sep > Q(0));
        CHECK(sep < parse_rational("13857/1000"));
    }

    SECTION("exact top eigenvalue in the extension") {
        // diag(s, 1, 1): s = (3 + sqrt 5)/2 is a simple exact root; s^2 = (7 + 3 sqrt 5)/2
        // so the separation s^2 - 1 ~ 5.854 is certified to interval width 2^-64
        FieldMatrix d = FieldMatrix::from_rows({{E.gen(), E.zero(), E.zero()},
                                                {E.zero(), E.one(), E.zero()},
                                                {E.zero(), E.zero(), E.one()}});
        Certificate c = proximality(d);
        REQUIRE(c.verdict == "pass");
        CHECK(evidence_of(c, "top_root").has_value());
        CHECK(evidence_of(c, "runner_up_squared_modulus_at_most") == std::string("1"));
        Rational sep = parse_rational(*evidence_of(c, "separation_at_least"));
        CHECK(sep > Q(117, 20));   // 5.85
        CHECK(sep < Q(293, 50));   // 5.86
    }
}

TEST_CASE("proximality rejects ties, pairs, and repeated tops", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);

    SECTION("identity has a repeated top eigenvalue") {
        Certificate c = proximality(lift_rows(E, {{1, 0}, {0, 1}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "the eigenvalue of maximal modulus is repeated (multiplicity 2)");
        CHECK(evidence_of(c, "top_root") == std::string("1"));
    }

    SECTION("bending matrices are never proximal") {
        // diag(tau(s)^2, s, s): the top eigenvalue s appears twice
        Certificate c = proximality(bending_matrix(E.gen(), 2));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "the eigenvalue of maximal modulus is repeated (multiplicity 2)");
        CHECK(evidence_of(c, "top_root").has_value());
    }

    SECTION("rotation has no real eigenvalue") {
        Certificate c = proximality(lift_rows(E, {{0, -1}, {1, 0}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "no real eigenvalue: the maximal modulus is attained by a conjugate pair");
    }

    SECTION("conjugate pair dominating a real eigenvalue") {
        // block diag(1, [[1,-2],[1,1]]): pair modulus^2 = 3 beats the real eigenvalue 1
        Certificate c = proximality(lift_rows(E, {{1, 0, 0}, {0, 1, -2}, {0, 1, 1}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "the maximal modulus is attained by a complex conjugate pair");
        CHECK(evidence_of(c, "top_squared_modulus").has_value());
    }

    SECTION("swap: exact tie between the real eigenvalues 1 and -1") {
        Certificate c = proximality(lift_rows(E, {{0, 1}, {1, 0}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "exact modulus tie between two real eigenvalues");
        CHECK(evidence_of(c, "tied_squared_modulus").has_value());
    }

    SECTION("negation tie between +sqrt(2) and -sqrt(2)") {
        Certificate c = proximality(lift_rows(E, {{0, 2}, {1, 0}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "exact modulus tie: eigenvalues r and -r");
        CHECK(evidence_of(c, "tied_squared_modulus").has_value());
    }

    SECTION("real eigenvalue tied with a conjugate pair") {
        // block diag(1, rotation): eigenvalues 1 and +-i all on the unit circle
        Certificate c = proximality(lift_rows(E, {{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}));
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "exact modulus tie between a real eigenvalue and a conjugate pair");
        CHECK(evidence_of(c, "tied_squared_modulus").has_value());
    }

    SECTION("singular matrices are rejected outright") {
        CHECK(error_code_of([&] { proximality(lift_rows(E, {{1, 1}, {1, 1}})); }) == "Singular");
    }

    SECTION("a tiny precision budget comes back inconclusive") {
        Certificate c = proximality(lift_rows(E, {{2, 1}, {3, 2}}), 1);
        REQUIRE(c.verdict == "inconclusive");
        CHECK(c.detail.find("budget") != std::string::npos);
        CHECK(parameter_of(c, "budget_bits") == std::string("1"));
    }
}

TEST_CASE("burnside span measures absolute irreducibility", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);
    auto rep = bend(desk::bent_instance());
    std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};

    SECTION("the bent pair fills the full matrix space") {
        Certificate c = burnside_irreducibility(pair, 6);
        CHECK(c.check == "burnside_irreducibility");
        REQUIRE(c.verdict == "pass");
        CHECK(c.detail == "word span fills the matrix space: absolutely irreducible");
        CHECK(evidence_of(c, "span_dimension") == std::string("9"));
        CHECK(evidence_of(c, "matrix_space_dimension") == std::string("9"));
        CHECK(evidence_of(c, "stabilized_at_length").has_value());
        CHECK(evidence_of(c, "index2_family_full") == std::string("true"));
        CHECK(parameter_of(c, "word_cap") == std::string("6"));
    }

    SECTION("a single generator stabilizes on its polynomial algebra") {
        // powers of gen_a span {I, a, a^2} only (cubic minimal polynomial), and
        // e1 is an invariant line because a is block diagonal
        Certificate c = burnside_irreducibility({rep.at("a")}, 6);
        REQUIRE(c.verdict == "inconclusive");
        CHECK(c.detail == "span dimension 3 of 9 at word cap 6");
        CHECK(evidence_of(c, "span_dimension") == std::string("3"));
        CHECK(evidence_of(c, "stabilized_at_length") == std::string("2"));
        CHECK(evidence_of(c, "witness_subspace_dimension") == std::string("1"));
        CHECK(evidence_of(c, "witness_subspace_basis").has_value());
    }

    SECTION("input validation") {
        CHECK(error_code_of([] { burnside_irreducibility({}, 6); }) == "EmptyGenerators");
        CHECK(error_code_of([&] { burnside_irreducibility(pair, 0); }) == "InvalidThreshold");
        FieldMatrix two = lift_rows(E, {{1, 0}, {0, 1}});
        FieldMatrix three = pair[0];
        CHECK(error_code_of([&] { burnside_irreducibility({three, two}, 6); }) == "SizeMismatch");
    }
}

TEST_CASE("invariant form spaces distinguish bent from unbent", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);
    Form j = desk::form(F);
    FieldMatrix a = lift_to_ext(E, desk::gen_a(F));
    FieldMatrix b = lift_to_ext(E, desk::gen_b(F));

    SECTION("the unbent pair preserves exactly the line through J") {
        auto sym = invariant_form_basis({a, b}, FormSymmetry::symmetric);
        REQUIRE(sym.size() == 1);
        CHECK(span_contains(sym, j.matrix_L(E).flatten()));
        auto anti = invariant_form_basis({a, b}, FormSymmetry::antisymmetric);
        CHECK(anti.empty());
    }

    SECTION("the bent pair admits no invariant form at all") {
        auto rep = bend(desk::bent_instance());
        std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};
        auto sym = invariant_form_basis(pair, FormSymmetry::symmetric);
        CHECK(sym.empty());
        CHECK(invariant_form_basis(pair, FormSymmetry::antisymmetric).empty());
        CHECK_FALSE(span_contains(sym, j.matrix_L(E).flatten()));
    }

    SECTION("a single block generator leaves more forms invariant") {
        // in the eigenbasis of gen_a the products of eigenvalue pairs equal 1
        // exactly for (1,1) and (2+sqrt3, 2-sqrt3): symmetric dim 2, antisym dim 1
        Certificate sym = invariant_form_space({a}, FormSymmetry::symmetric);
        CHECK(sym.check == "invariant_form_space");
        CHECK(sym.verdict == "pass");
        CHECK(sym.detail == "solution space dimension 2");
        CHECK(evidence_of(sym, "dimension") == std::string("2"));
        CHECK(evidence_of(sym, "basis_1").has_value());
        CHECK(evidence_of(sym, "basis_2").has_value());
        CHECK(parameter_of(sym, "symmetry") == std::string("symmetric"));
        Certificate anti = invariant_form_space({a}, FormSymmetry::antisymmetric);
        CHECK(anti.detail == "solution space dimension 1");
        CHECK(parameter_of(anti, "symmetry") == std::string("antisymmetric"));
    }

    SECTION("the space depends only on the generated group") {
        FieldMatrix ab = a * b;
        auto one = invariant_form_basis({a, b}, FormSymmetry::symmetric);
        auto two = invariant_form_basis({a, ab}, FormSymmetry::symmetric);
        REQUIRE(one.size() == two.size());
        for (const auto& v : one) CHECK(span_contains(two, v));
        for (const auto& v : two) CHECK(span_contains(one, v));
    }

    SECTION("empty generator lists are rejected") {
        CHECK(error_code_of([] { invariant_form_basis({}, FormSymmetry::symmetric); }) ==
              "EmptyGenerators");
    }
}

TEST_CASE("congruence image orders match the SL tables", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E6(F, F.from_rational(Q(6)));  // s = 3 + 2 sqrt(2)

    SECTION("an elementary pair generates all of SL(2,2)") {
        std::vector<FieldMatrix> gens = {lift_rows(E6, {{1, 1}, {0, 1}}),
                                         lift_rows(E6, {{1, 0}, {1, 1}})};
        Certificate c = congruence_image_order(gens, 2);
        CHECK(c.check == "congruence_image_order");
        REQUIRE(c.verdict == "pass");
        CHECK(c.detail == "congruence image is all of SL(2,2)");
        CHECK(evidence_of(c, "order") == std::string("6"));
        CHECK(evidence_of(c, "q") == std::string("2"));
        CHECK(evidence_of(c, "s_image") == std::string("1"));  // x^2+1 = (x+1)^2 mod 2
        CHECK(evidence_of(c, "lagrange_divides") == std::string("true"));
    }

    SECTION("a transvection and a 3-cycle generate all of SL(3,2)") {
        std::vector<FieldMatrix> gens = {lift_rows(E6, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}),
                                         lift_rows(E6, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})};
        Certificate c = congruence_image_order(gens, 2);
        REQUIRE(c.verdict == "pass");
        CHECK(c.detail == "congruence image is all of SL(3,2)");
        CHECK(evidence_of(c, "order") == std::string("168"));
        CHECK(evidence_of(c, "sl_order") == std::string("168"));
    }

    SECTION("the bent desk pair is proper modulo 2") {
        auto rep = bend(desk::bent_instance());
        std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};
        Certificate c = congruence_image_order(pair, 2);
        REQUIRE(c.verdict == "fail");
        CHECK(c.detail == "congruence image is proper: order 6 of 60480");
        CHECK(evidence_of(c, "q") == std::string("4"));  // x^2+x+1 irreducible mod 2
        CHECK(evidence_of(c, "theta_image") == std::string("0"));
        CHECK(evidence_of(c, "s_image") == std::string("0+1y"));
        CHECK(evidence_of(c, "lagrange_divides") == std::string("true"));
        CHECK(parameter_of(c, "p") == std::string("2"));
    }

    SECTION("primes whose residue field is too large are inconclusive") {
        auto rep = bend(desk::bent_instance());
        std::vector<FieldMatrix> pair = {rep.at("a"), rep.at("b")};
        // x^2 - 3x + 1 has the root 5 modulo 11, but q = 11 > 9
        Certificate c = congruence_image_order(pair, 11);
        REQUIRE(c.verdict == "inconclusive");
        CHECK(c.detail == "no feasible reduction: q = 11 exceeds the q <= 9 bound");
    }

    SECTION("matrices larger than 4x4 hit the BFS guard") {
        FieldMatrix big = FieldMatrix::identity(5, E6.gen());
        Certificate c = congruence_image_order({big}, 2);
        REQUIRE(c.verdict == "inconclusive");
        CHECK(c.detail == "matrix size 5 exceeds the n+1 <= 4 BFS guard");
    }

    SECTION("bad moduli and bad denominators are rejected") {
        std::vector<FieldMatrix> gens = {lift_rows(E6, {{1, 1}, {0, 1}})};
        CHECK(error_code_of([&] { congruence_image_order(gens, 4); }) == "BadReduction");
        CHECK(error_code_of([&] { congruence_image_order(gens, 1); }) == "BadReduction");
        FieldMatrix half = FieldMatrix::from_rows(
            {{E6.from_rational(Q(1, 2)), E6.zero()}, {E6.zero(), E6.from_rational(Q(2))}});
        CHECK(error_code_of([&] { congruence_image_order({half}, 2); }) == "BadReduction");
        CHECK(error_code_of([] { congruence_image_order({}, 2); }) == "EmptyGenerators");
    }

    SECTION("group orders satisfy the product formula") {
        CHECK(sl_order(2, 2) == 6ULL);
        CHECK(sl_order(2, 3) == 24ULL);
        CHECK(sl_order(3, 2) == 168ULL);
        CHECK(sl_order(3, 4) == 60480ULL);
        CHECK(sl_order(3, 5) == 372000ULL);
        // independent route: |SL(m,q)| = |GL(m,q)| / (q - 1)
        for (long m : {2L, 3L, 4L})
            for (long q : {2L, 3L, 4L, 5L, 7L, 9L}) {
                unsigned long long qm = 1;
                for (long i = 0; i < m; ++i) qm *= static_cast<unsigned long long>(q);
                unsigned long long gl = 1, qk = 1;
                for (long k = 0; k < m; ++k) {
                    gl *= qm - qk;
                    qk *= static_cast<unsigned long long>(q);
                }
                CHECK(sl_order(m, q) == gl / static_cast<unsigned long long>(q - 1));
            }
    }
}

TEST_CASE("finite reductions and BFS closures behave exactly", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);
    QuadExtension E6(F, F.from_rational(Q(6)));

    SECTION("the desk extension lands in F4 at p = 2 and F9 at p = 3") {
        ReductionOutcome two = make_reduction(E, 2);
        REQUIRE(two.ctx.has_value());
        CHECK(two.ctx->fq.q() == 4);
        CHECK(two.ctx->fq.show(two.ctx->s_img) == "0+1y");
        CHECK(two.ctx->reduce_ext(E.gen() * E.gen().tau()) == 1);  // norm 1 survives

        ReductionOutcome three = make_reduction(E, 3);
        REQUIRE(three.ctx.has_value());
        CHECK(three.ctx->fq.q() == 9);
        CHECK(three.ctx->fq.show(three.ctx->s_img) == "0+1y");
    }

    SECTION("split reductions stay in the prime field") {
        ReductionOutcome out = make_reduction(E6, 2);  // x^2+1 = (x+1)^2 mod 2
        REQUIRE(out.ctx.has_value());
        CHECK(out.ctx->fq.q() == 2);
        CHECK(out.ctx->s_img == 1);
        CHECK(out.ctx->theta == 0);
    }

    SECTION("oversized residue fields are reported as obstructions") {
        ReductionOutcome out = make_reduction(E6, 5);  // x^2 - x + 1 irreducible mod 5
        REQUIRE_FALSE(out.ctx.has_value());
        CHECK(out.obstruction == "q = 25 exceeds the q <= 9 bound");
    }

    SECTION("non-prime moduli are rejected") {
        CHECK(error_code_of([&] { make_reduction(E, 4); }) == "BadReduction");
        CHECK(error_code_of([&] { make_reduction(E, 1); }) == "BadReduction");
    }

    SECTION("BFS closure enumerates SL(2,2) and respects its cap") {
        SmallField f2(2);
        std::vector<FqMatrix> gens = {fq_mat(2, {1, 1, 0, 1}), fq_mat(2, {1, 0, 1, 1})};
        ClosureResult full = bfs_closure(f2, gens, 100);
        CHECK(full.order == 6);
        CHECK_FALSE(full.exceeded);
        ClosureResult capped = bfs_closure(f2, gens, 3);
        CHECK(capped.exceeded);
        CHECK(error_code_of([&] { bfs_closure(f2, {fq_mat(2, {1, 0, 1, 0})}, 10); }) ==
              "BadReduction");
    }
}

TEST_CASE("thinness report aggregates every certificate", "[certify]") {
    NumberField F = desk::field();
    QuadExtension E = desk::extension(F);

    SECTION("bent desk instance") {
        ThinnessReport r = thinness_report(desk::bent_instance());
        CHECK(r.summary ==
              "bent instance: no invariant symmetric or antisymmetric form. "
              "su_containment=pass; relators=pass; proximal_word=pass; burnside=pass; "
              "congruence=fail. Note: infinite index of the bent subgroup is not "
              "machine-checked; it is cited from the underlying theory, not verified here.");
        REQUIRE(r.certificates.size() == 7);
        CHECK(r.certificates[0].check == "su_containment");
        CHECK(r.certificates[0].verdict == "pass");
        CHECK(r.certificates[1].check == "relators");
        CHECK(r.certificates[1].verdict == "pass");
        CHECK(r.certificates[2].check == "proximality");
        CHECK(r.certificates[2].verdict == "pass");
        CHECK(evidence_of(r.certificates[2], "word") == std::string("a"));
        CHECK(r.certificates[3].check == "burnside_irreducibility");
        CHECK(r.certificates[3].verdict == "pass");
        CHECK(r.certificates[4].check == "invariant_form_space");
        CHECK(parameter_of(r.certificates[4], "symmetry") == std::string("symmetric"));
        CHECK(evidence_of(r.certificates[4], "dimension") == std::string("0"));
        CHECK(evidence_of(r.certificates[4], "contains_J") == std::string("false"));
        CHECK(r.certificates[5].check == "invariant_form_space");
        CHECK(parameter_of(r.certificates[5], "symmetry") == std::string("antisymmetric"));
        CHECK(evidence_of(r.certificates[5], "dimension") == std::string("0"));
        CHECK(r.certificates[6].check == "congruence_image_order");
        CHECK(r.certificates[6].verdict == "fail");
        CHECK(parameter_of(r.certificates[6], "p") == std::string("2"));
        CHECK(evidence_of(r.certificates[6], "q") == std::string("4"));
    }

    SECTION("the unbent instance keeps J and reports not bent") {
        ThinnessReport r = thinness_report(desk::instance(E.one()));
        CHECK(r.summary.rfind("not bent: invariant symmetric form J present. ", 0) == 0);
        CHECK(r.summary.find("su_containment=pass; relators=pass;") != std::string::npos);
        REQUIRE(r.certificates.size() == 7);
        const Certificate& sym = r.certificates[4];
        CHECK(evidence_of(sym, "dimension") == std::string("1"));
        CHECK(evidence_of(sym, "contains_J") == std::string("true"));
    }

    SECTION("a fixed congruence prime and word cap are honored") {
        ThinnessOptions opt;
        opt.prime = 2;
        opt.word_cap = 4;
        ThinnessReport r = thinness_report(desk::bent_instance(), opt);
        REQUIRE(r.certificates.size() == 7);
        CHECK(parameter_of(r.certificates[3], "word_cap") == std::string("4"));
        CHECK(parameter_of(r.certificates[6], "p") == std::string("2"));
        CHECK(evidence_of(r.certificates[6], "q") == std::string("4"));
    }
}
