// Forms, membership predicates, the bending matrix, words, splittings, and
// the bend itself. Oracles: hand-expanded matrix identities, the bounded
// integer search replayed as an independent check of the bundled stable
// letter, and direct verification of the SU conditions entry by entry.

#include <bendlab/bending.hpp>
#include <bendlab/desk.hpp>
#include <bendlab/forms.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "test_support.hpp"

using namespace bendlab;
using testsupport::Q;
using testsupport::error_code_of;

namespace {

NumberField field_q() { return NumberField(QPoly({Q(0), Q(1)}), -1, "Q"); }

NumberField field_sqrt2() { return NumberField(QPoly({Q(-2), Q(0), Q(1)}), -1, "Q(sqrt2)"); }

Matrix<Rational> rational_matrix(std::vector<std::vector<long>> rows) {
    std::vector<std::vector<Rational>> rr;
    for (auto& r : rows) {
        std::vector<Rational> row;
        for (long v : r) row.emplace_back(v);
        rr.push_back(std::move(row));
    }
    return Matrix<Rational>::from_rows(rr);
}

}  // namespace

TEST_CASE("form validation enforces the signature pattern", "[forms]") {
    NumberField F = field_q();
    Form j(F, {F.one(), F.from_rational(Q(3))});
    CHECK(j.n() == 2);
    BaseMatrix jm = j.matrix_F();
    CHECK(jm.at(0, 0) == F.one());
    CHECK(jm.at(1, 1) == F.from_rational(Q(3)));
    CHECK(jm.at(2, 2) == F.from_rational(Q(-1)));
    CHECK(jm.at(0, 1) == F.zero());

    CHECK(error_code_of([&] { Form(F, {}); }) == "SizeMismatch");
    CHECK(error_code_of([&] { Form(F, {F.from_rational(Q(-1))}); }) == "SignatureViolation");
    CHECK(error_code_of([&] { Form(F, {F.zero()}); }) == "SignatureViolation");

    // Over Q(sqrt2) the alphas must change sign at the conjugate embedding:
    // 3 stays positive there, sqrt2 - 1 flips as required.
    NumberField F2 = field_sqrt2();
    CHECK(error_code_of([&] { Form(F2, {F2.from_rational(Q(3))}); }) == "SignatureViolation");
    Form ok(F2, {F2.element({Q(-1), Q(1)})});
    CHECK(ok.n() == 1);
    CHECK(error_code_of([&] { Form(F2, {F.one()}); }) == "FieldMismatch");
}

TEST_CASE("membership predicates check the defining identities exactly", "[forms]") {
    NumberField F = field_q();
    Form j = desk::form(F);
    BaseMatrix a = desk::gen_a(F);
    BaseMatrix b = desk::gen_b(F);

    CHECK(so_membership(a, j));
    CHECK(so_membership(b, j));
    CHECK(so_membership(BaseMatrix::identity(3, F.zero()), j));

    // diag(1,1,-1) preserves J but has det -1.
    CHECK_FALSE(so_membership(desk::matrix(F, {{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}), j));
    // A shear does not preserve J at all.
    CHECK_FALSE(so_membership(desk::matrix(F, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}), j));

    CHECK(error_code_of([&] { so_membership(BaseMatrix::identity(2, F.zero()), j); }) ==
          "SizeMismatch");
    NumberField F2 = field_sqrt2();
    CHECK(error_code_of([&] { so_membership(BaseMatrix::identity(3, F2.zero()), j); }) ==
          "FieldMismatch");

    QuadExtension E = desk::extension(F);
    CHECK(so_membership(lift_to_ext(E, a), j));
    FieldMatrix with_s = lift_to_ext(E, a);
    with_s.at(0, 0) = E.gen();
    CHECK(error_code_of([&] { so_membership(with_s, j); }) == "EntriesOutsideBaseField");

    // SU: SO sits inside; scaling by s keeps the form but breaks det = 1.
    CHECK(su_membership(lift_to_ext(E, a), j));
    FieldMatrix scaled(3, 3, E.zero());
    for (long i = 0; i < 3; ++i) scaled.at(i, i) = E.gen();
    CHECK_FALSE(su_membership(scaled, j));
    CHECK(error_code_of([&] { su_membership(FieldMatrix::identity(2, E.zero()), j); }) ==
          "SizeMismatch");
}

TEST_CASE("bending matrix is special unitary and centralizes blocks", "[forms]") {
    NumberField F = field_q();
    QuadExtension E = desk::extension(F);
    Form j = desk::form(F);
    ExtElement s = E.gen();

    FieldMatrix b = bending_matrix(s, 2);
    CHECK(b.at(0, 0) == s.tau().pow(2));
    CHECK(b.at(1, 1) == s);
    CHECK(b.at(2, 2) == s);
    CHECK(b.at(0, 1) == E.zero());
    CHECK(b.det() == E.one());
    CHECK(su_membership(b, j));

    // Unitary variants all stay in SU(J).
    for (const ExtElement& u : {s, s.pow(2), -s, s.inverse()}) {
        CHECK(su_membership(bending_matrix(u, 2), j));
    }

    // B_u commutes with the block generator, not with the mixing one.
    CHECK(centralizes_block(b, lift_to_ext(E, desk::gen_a(F))));
    CHECK_FALSE(centralizes_block(b, lift_to_ext(E, desk::gen_b(F))));

    CHECK(error_code_of([&] { bending_matrix(s + E.one(), 2); }) == "NotUnitary");
    CHECK(error_code_of([&] { bending_matrix(s, 0); }) == "SizeMismatch");
}

TEST_CASE("bounded integer search certifies the bundled stable letter", "[forms]") {
    NumberField F = field_q();
    Form j = desk::form(F);

    // Every solution with entries bounded by 6 fixes the line through e1,
    // i.e. is block diagonal; the bundled mixing element needs height 7.
    auto is_block = [](const Matrix<Rational>& m) {
        return (m.at(0, 0) == Q(1) || m.at(0, 0) == Q(-1)) && m.at(1, 0) == Q(0) &&
               m.at(2, 0) == Q(0);
    };
    auto results6 = so_integer_search(j, 6);
    CHECK_FALSE(results6.empty());
    for (const auto& m : results6) {
        CHECK(is_block(m));
        // Independent recheck of the search invariants.
        Matrix<Rational> jr = rational_matrix({{1, 0, 0}, {0, 3, 0}, {0, 0, -1}});
        CHECK(m.transpose() * jr * m == jr);
        CHECK(m.det() == Q(1));
    }

    auto results7 = so_integer_search(j, 7);
    Matrix<Rational> expected_b = rational_matrix({{5, 6, 6}, {2, 1, 2}, {-6, -6, -7}});
    bool found_b = false;
    bool found_mixing = false;
    for (const auto& m : results7) {
        if (m == expected_b) found_b = true;
        if (!is_block(m)) found_mixing = true;
    }
    CHECK(found_b);
    CHECK(found_mixing);
    CHECK_FALSE(is_block(expected_b));

    // max_results truncates deterministically.
    CHECK(so_integer_search(j, 2, 3).size() == 3);

    NumberField F2 = field_sqrt2();
    Form irr(F2, {F2.element({Q(-1), Q(1)})});
    CHECK(error_code_of([&] { so_integer_search(irr, 2); }) == "NonRationalForm");
}

TEST_CASE("word parsing and formatting round-trip", "[bending]") {
    Word w = parse_word("a b^-1 a^2");
    REQUIRE(w.letters.size() == 3);
    CHECK((w.letters[0] == std::pair<std::string, long>{"a", 1}));
    CHECK((w.letters[1] == std::pair<std::string, long>{"b", -1}));
    CHECK((w.letters[2] == std::pair<std::string, long>{"a", 2}));
    CHECK(format_word(w) == "a b^-1 a^2");
    CHECK(format_word(Word{}) == "1");
    CHECK(parse_word("  ").empty());
    CHECK(format_word(parse_word("g1 g2^5   g1^-3")) == "g1 g2^5 g1^-3");

    CHECK(error_code_of([] { parse_word("a^0"); }) == "ParseError");
    CHECK(error_code_of([] { parse_word("a^x"); }) == "ParseError");
    CHECK(error_code_of([] { parse_word("^2"); }) == "ParseError");
    CHECK(error_code_of([] { parse_word("a^2b"); }) == "ParseError");
}

TEST_CASE("decomposition validation catches structural mistakes", "[bending]") {
    Decomposition d = desk::decomposition();
    d.validate();  // the bundled splitting is well-formed

    Decomposition empty;
    CHECK(error_code_of([&] { empty.validate(); }) == "EmptyGenerators");

    Decomposition no_stable;
    no_stable.kind = Decomposition::Kind::hnn;
    no_stable.generators = {"a"};
    CHECK(error_code_of([&] { no_stable.validate(); }) == "UnknownGenerator");

    Decomposition bad_stable = desk::decomposition();
    bad_stable.stable = "c";
    CHECK(error_code_of([&] { bad_stable.validate(); }) == "UnknownGenerator");

    Decomposition stable_in_edge = desk::decomposition();
    stable_in_edge.lambda_words = {parse_word("b")};
    CHECK(error_code_of([&] { stable_in_edge.validate(); }) == "UnknownGenerator");

    Decomposition amalgam;
    amalgam.kind = Decomposition::Kind::amalgam;
    amalgam.generators = {"a", "b"};
    amalgam.side = {{"a", 1}};
    CHECK(error_code_of([&] { amalgam.validate(); }) == "UnknownGenerator");
    amalgam.side = {{"a", 1}, {"b", 3}};
    CHECK(error_code_of([&] { amalgam.validate(); }) == "ParseError");

    Decomposition bad_relator = desk::decomposition();
    bad_relator.relators = {parse_word("a c")};
    CHECK(error_code_of([&] { bad_relator.validate(); }) == "UnknownGenerator");

    Decomposition empty_edge = desk::decomposition();
    empty_edge.lambda_words = {Word{}};
    CHECK(error_code_of([&] { empty_edge.validate(); }) == "ParseError");
}

TEST_CASE("word evaluation multiplies images with exponents", "[bending]") {
    std::map<std::string, Matrix<Rational>> rep;
    rep.emplace("a", rational_matrix({{1, 1}, {0, 1}}));
    rep.emplace("b", rational_matrix({{1, 0}, {1, 1}}));

    CHECK(evaluate_word(rep, parse_word("a b")) == rational_matrix({{2, 1}, {1, 1}}));
    CHECK(evaluate_word(rep, parse_word("a^-1")) == rational_matrix({{1, -1}, {0, 1}}));
    CHECK(evaluate_word(rep, parse_word("a^3")) == rational_matrix({{1, 3}, {0, 1}}));
    CHECK(evaluate_word(rep, Word{}) == Matrix<Rational>::identity(2, Q(0)));
    // a b a^-1 b^-1 is not the identity in SL(2,Z): free pairs stay free.
    CHECK_FALSE(evaluate_word(rep, parse_word("a b a^-1 b^-1")) ==
                Matrix<Rational>::identity(2, Q(0)));

    CHECK(error_code_of([&] { evaluate_word(rep, parse_word("c")); }) == "UnknownGenerator");
    std::map<std::string, Matrix<Rational>> none;
    CHECK(error_code_of([&] { evaluate_word(none, Word{}); }) == "EmptyGenerators");
}

TEST_CASE("bending instance validation enforces exact hypotheses", "[bending]") {
    NumberField F = field_q();
    QuadExtension E = desk::extension(F);
    ExtElement s = E.gen();

    // Baseline: the bundled instance validates.
    BendingInstance inst = desk::bent_instance();
    CHECK(inst.form.n() == 2);
    CHECK(inst.unit == s);

    // Non-integral entry in a base image.
    auto bad_entry = [&] {
        BaseMatrix m = desk::gen_a(F);
        m.at(1, 1) = F.from_rational(Q(1, 2));
        BendingInstance(desk::form(F), {{"a", m}, {"b", desk::gen_b(F)}}, desk::decomposition(), s);
    };
    CHECK(error_code_of(bad_entry) == "InvalidBaseRep");

    // Integral but outside SO(J).
    auto not_so = [&] {
        BaseMatrix m = desk::matrix(F, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
        BendingInstance(desk::form(F), {{"a", m}, {"b", desk::gen_b(F)}}, desk::decomposition(), s);
    };
    CHECK(error_code_of(not_so) == "InvalidBaseRep");

    // Missing and extraneous generator images.
    auto missing = [&] {
        BendingInstance(desk::form(F), {{"a", desk::gen_a(F)}}, desk::decomposition(), s);
    };
    CHECK(error_code_of(missing) == "UnknownGenerator");
    auto extra = [&] {
        BendingInstance(desk::form(F),
                        {{"a", desk::gen_a(F)}, {"b", desk::gen_b(F)}, {"c", desk::gen_a(F)}},
                        desk::decomposition(), s);
    };
    CHECK(error_code_of(extra) == "UnknownGenerator");

    // Non-unitary and non-integral units.
    CHECK(error_code_of([&] { desk::instance(s + E.one()); }) == "NotUnitary");
    ExtElement unitary_fraction =
        E.element(F.from_rational(Q(3, 11)), F.from_rational(Q(-16, 11)));
    REQUIRE(unitary_fraction.is_unitary());
    CHECK(error_code_of([&] { desk::instance(unitary_fraction); }) == "NotIntegral");

    // Edge word whose image B_u fails to centralize.
    auto bad_edge = [&] {
        Decomposition d = desk::decomposition();
        d.stable = "a";
        d.lambda_words = {parse_word("b")};
        BendingInstance(desk::form(F), {{"a", desk::gen_a(F)}, {"b", desk::gen_b(F)}}, d, s);
    };
    CHECK(error_code_of(bad_edge) == "CentralizerViolation");

    // Unit over the wrong base field.
    NumberField F2 = field_sqrt2();
    QuadExtension E2(F2, F2.element({Q(3), Q(2)}));
    auto wrong_field = [&] {
        BendingInstance(desk::form(F), {{"a", desk::gen_a(F)}, {"b", desk::gen_b(F)}},
                        desk::decomposition(), E2.gen());
    };
    CHECK(error_code_of(wrong_field) == "FieldMismatch");
}

TEST_CASE("hnn bend multiplies the stable letter by the bending matrix", "[bending]") {
    NumberField F = field_q();
    QuadExtension E = desk::extension(F);
    Form j = desk::form(F);

    for (const ExtElement& u : {E.gen(), E.gen().pow(2), -E.gen()}) {
        BendingInstance inst = desk::instance(u);
        auto bent = bend(inst);
        FieldMatrix b = bending_matrix(u, 2);

        CHECK(bent.at("a") == lift_to_ext(E, desk::gen_a(F)));
        CHECK(bent.at("b") == b * lift_to_ext(E, desk::gen_b(F)));

        Certificate su = verify_su_containment(bent, j);
        CHECK(su.verdict == "pass");
        REQUIRE(su.evidence.size() == 2);
        for (const auto& [name, val] : su.evidence) CHECK(val == "pass");
    }
}

TEST_CASE("amalgam bend conjugates side-2 generators", "[bending]") {
    NumberField F = field_q();
    QuadExtension E = desk::extension(F);
    Form j = desk::form(F);
    ExtElement s = E.gen();

    Decomposition d;
    d.kind = Decomposition::Kind::amalgam;
    d.generators = {"a", "b"};
    d.side = {{"a", 1}, {"b", 2}};
    d.lambda_words = {parse_word("a")};

    BendingInstance inst(desk::form(F), {{"a", desk::gen_a(F)}, {"b", desk::gen_b(F)}}, d, s);
    auto bent = bend(inst);
    FieldMatrix b = bending_matrix(s, 2);

    CHECK(bent.at("a") == lift_to_ext(E, desk::gen_a(F)));
    CHECK(bent.at("b") == b * lift_to_ext(E, desk::gen_b(F)) * b.inverse());
    CHECK(verify_su_containment(bent, j).verdict == "pass");
}

TEST_CASE("relator verification reports exact pass and fail", "[bending]") {
    NumberField F = field_q();
    QuadExtension E = desk::extension(F);
    auto lifted = desk::bent_instance().lifted_rep();

    // The bundled stable letter is an involution: b^2 = 1 exactly.
    Certificate pass = verify_relators(lifted, {parse_word("b^2"), parse_word("a a^-1")});
    CHECK(pass.verdict == "pass");
    CHECK(pass.detail == "all relators map to the identity");
    REQUIRE(pass.evidence.size() == 2);
    CHECK(pass.evidence[0].second == "b^2 -> identity");

    Certificate vac = verify_relators(lifted, {});
    CHECK(vac.verdict == "pass");
    CHECK(vac.detail == "no relators: passes vacuously");

    Certificate fail = verify_relators(lifted, {parse_word("a")});
    CHECK(fail.verdict == "fail");
    CHECK(fail.detail == "relator 'a' does not map to the identity");

    // SU containment certificate flags the offending generator by name.
    FieldMatrix two(3, 3, E.zero());
    for (long i = 0; i < 3; ++i) two.at(i, i) = E.from_rational(Q(2));
    std::map<std::string, FieldMatrix> bad{{"g", two}};
    Certificate su = verify_su_containment(bad, desk::form(F));
    CHECK(su.verdict == "fail");
    CHECK(su.detail == "generator 'g' violates A* J A = J or det A = 1");
}
