#pragma once

// The bundled worked example ("desk instance"): the rational base field, the
// signature-(2,1) form J = diag(1, 3, -1), a block-diagonal hyperbolic
// generator, an integrally mixing second generator found by bounded search,
// and the HNN splitting along the cyclic subgroup generated by the first.
// Everything here is reproduced by exact search in the tests; the constants
// are pinned so the CLI and the data files agree.

#include "bendlab/bending.hpp"

namespace bendlab::desk {

inline NumberField field() { return NumberField(QPoly({Rational(0), Rational(1)}), -1, "Q"); }

inline Form form(const NumberField& F) {
    return Form(F, {F.from_rational(Rational(1)), F.from_rational(Rational(3))});
}

// s^2 = 3s - 1: s = (3 + sqrt(5))/2, the square of the golden ratio
inline QuadExtension extension(const NumberField& F) {
    return QuadExtension(F, F.from_rational(Rational(3)));
}

inline BaseMatrix matrix(const NumberField& F, std::vector<std::vector<long>> rows) {
    std::vector<std::vector<AlgebraicNumber>> rr;
    for (auto& r : rows) {
        std::vector<AlgebraicNumber> row;
        for (long v : r) row.push_back(F.from_rational(Rational(v)));
        rr.push_back(std::move(row));
    }
    return BaseMatrix::from_rows(rr);
}

// hyperbolic block 1 (+) [[2,1],[3,2]], eigenvalues 1 and 2 +- sqrt(3)
inline BaseMatrix gen_a(const NumberField& F) {
    return matrix(F, {{1, 0, 0}, {0, 2, 1}, {0, 3, 2}});
}

// stable letter: an integer element of SO(J) that mixes the blocks; found by
// exhaustive integer search at height bound 7 (none exists at bound <= 6)
inline BaseMatrix gen_b(const NumberField& F) {
    return matrix(F, {{5, 6, 6}, {2, 1, 2}, {-6, -6, -7}});
}

inline Decomposition decomposition() {
    Decomposition d;
    d.kind = Decomposition::Kind::hnn;
    d.generators = {"a", "b"};
    d.stable = "b";
    d.lambda_words = {parse_word("a")};
    return d;
}

inline BendingInstance instance(const ExtElement& unit) {
    NumberField F = unit.ext().base();
    return BendingInstance(form(F), {{"a", gen_a(F)}, {"b", gen_b(F)}}, decomposition(), unit);
}

// the standard bent instance at u = s
inline BendingInstance bent_instance() {
    NumberField F = field();
    QuadExtension E = extension(F);
    return instance(E.gen());
}

}  // namespace bendlab::desk
