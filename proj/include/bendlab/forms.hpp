#pragma once

// The diagonal forms J = diag(alpha_1, ..., alpha_n, -1), exact membership
// predicates for SO(J, .) and SU(J, O_L, tau), the bending matrix
// B_u = diag(u^-n, u, ..., u), and a bounded brute-force search for integer
// points of SO(J; Z).

#include "bendlab/matrix.hpp"
#include "bendlab/numfield.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bendlab {

using BaseMatrix = Matrix<AlgebraicNumber>;  // entries in F
using FieldMatrix = Matrix<ExtElement>;      // entries in L

class Form {
  public:
    Form(NumberField F, std::vector<AlgebraicNumber> alphas)
        : F_(std::move(F)), alphas_(std::move(alphas)) {
        if (alphas_.empty()) fail("SizeMismatch", "a form needs at least one alpha");
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            const auto& a = alphas_[i];
            if (!a.field().same(F_)) fail("FieldMismatch", "alpha entry from a different field");
            if (a.sign_at(0) <= 0)
                fail("SignatureViolation", "alpha_" + std::to_string(i + 1) +
                                               " must be positive at the identity embedding");
            for (int p = 1; p < static_cast<int>(F_.places()); ++p)
                if (a.sign_at(p) >= 0)
                    fail("SignatureViolation",
                         "alpha_" + std::to_string(i + 1) +
                             " must be negative at every non-identity embedding");
        }
    }

    long n() const { return static_cast<long>(alphas_.size()); }
    const NumberField& field() const { return F_; }
    const std::vector<AlgebraicNumber>& alphas() const { return alphas_; }

    // diag(alpha_1, ..., alpha_n, -1) over F
    BaseMatrix matrix_F() const {
        long m = n() + 1;
        BaseMatrix j(m, m, F_.zero());
        for (long i = 0; i < n(); ++i) j.at(i, i) = alphas_[i];
        j.at(m - 1, m - 1) = F_.from_rational(Rational(-1));
        return j;
    }

    FieldMatrix matrix_L(const QuadExtension& E) const {
        if (!E.base().same(F_)) fail("FieldMismatch", "extension built over a different base field");
        return matrix_F().map([&](const AlgebraicNumber& a) { return E.from_base(a); });
    }

  private:
    NumberField F_;
    std::vector<AlgebraicNumber> alphas_;
};

inline FieldMatrix lift_to_ext(const QuadExtension& E, const BaseMatrix& a) {
    return a.map([&](const AlgebraicNumber& x) { return E.from_base(x); });
}

inline FieldMatrix conj_transpose(const FieldMatrix& a) {
    return a.transpose().map([](const ExtElement& x) { return x.tau(); });
}

// ---------------------------------------------------------------------------
// Membership predicates (exact)
// ---------------------------------------------------------------------------
inline bool so_membership(const BaseMatrix& a, const Form& j) {
    if (!a.is_square() || a.rows() != j.n() + 1)
        fail("SizeMismatch", "matrix size must be n+1 for the given form");
    if (!a.sample().field().same(j.field()))
        fail("FieldMismatch", "matrix entries and form live in different fields");
    BaseMatrix jm = j.matrix_F();
    if (a.transpose() * jm * a != jm) return false;
    return a.det() == j.field().one();
}

inline bool so_membership(const FieldMatrix& a, const Form& j) {
    for (long i = 0; i < a.rows(); ++i)
        for (long c = 0; c < a.cols(); ++c)
            if (!a.at(i, c).in_base())
                fail("EntriesOutsideBaseField",
                     "entry (" + std::to_string(i + 1) + "," + std::to_string(c + 1) +
                         ") has a nonzero s-component");
    return so_membership(a.map([](const ExtElement& x) { return x.a(); }), j);
}

inline bool su_membership(const FieldMatrix& a, const Form& j) {
    if (!a.is_square() || a.rows() != j.n() + 1)
        fail("SizeMismatch", "matrix size must be n+1 for the given form");
    const QuadExtension& E = a.sample().ext();
    FieldMatrix jm = j.matrix_L(E);
    if (conj_transpose(a) * jm * a != jm) return false;
    return a.det() == E.one();
}

// ---------------------------------------------------------------------------
// Bending matrix B_u = diag(u^-n, u, ..., u); u^-n = tau(u)^n for unitary u
// ---------------------------------------------------------------------------
inline FieldMatrix bending_matrix(const ExtElement& u, long n) {
    if (n < 1) fail("SizeMismatch", "dimension parameter n must be at least 1");
    if (!u.is_unitary()) fail("NotUnitary", "bending requires u * tau(u) = 1 exactly");
    const QuadExtension& E = u.ext();
    FieldMatrix b(n + 1, n + 1, E.zero());
    b.at(0, 0) = u.tau().pow(n);
    for (long i = 1; i <= n; ++i) b.at(i, i) = u;
    return b;
}

inline bool centralizes_block(const FieldMatrix& b, const FieldMatrix& a) {
    return b * a == a * b;
}

// ---------------------------------------------------------------------------
// Bounded search for A in SO(J; Z): integer entries in [-bound, bound],
// A^t J A = J, det A = 1. The form must have rational alphas. Columns are
// enumerated against their diagonal norms with pairwise pruning; results
// come back in a fixed deterministic order.
// ---------------------------------------------------------------------------
inline std::vector<Matrix<Rational>> so_integer_search(const Form& j, long bound,
                                                       std::size_t max_results = SIZE_MAX) {
    long m = j.n() + 1;
    std::vector<Rational> diag(m);
    for (long i = 0; i < j.n(); ++i) {
        Rational v;
        if (!j.alphas()[i].is_rational(&v))
            fail("NonRationalForm", "integer point search requires rational form coefficients");
        diag[i] = v;
    }
    diag[m - 1] = Rational(-1);

    auto qform = [&](const std::vector<long>& x, const std::vector<long>& y) {
        Rational s(0);
        for (long i = 0; i < m; ++i) s += diag[i] * Rational(x[i]) * Rational(y[i]);
        return s;
    };

    // all integer vectors v with entries in [-bound, bound] and q(v,v) = target
    auto column_candidates = [&](const Rational& target) {
        std::vector<std::vector<long>> out;
        std::vector<long> v(m, -bound);
        while (true) {
            if (qform(v, v) == target) out.push_back(v);
            long i = 0;
            while (i < m && v[i] == bound) v[i++] = -bound;
            if (i == m) break;
            ++v[i];
        }
        return out;
    };

    std::vector<std::vector<std::vector<long>>> cands(m);
    for (long c = 0; c < m; ++c) cands[c] = column_candidates(diag[c]);

    std::vector<Matrix<Rational>> results;
    std::vector<const std::vector<long>*> chosen(m, nullptr);
    auto emit = [&]() {
        Matrix<Rational> a(m, m, Rational(0));
        for (long c = 0; c < m; ++c)
            for (long r = 0; r < m; ++r) a.at(r, c) = Rational((*chosen[c])[r]);
        if (a.det() == Rational(1)) results.push_back(std::move(a));
    };
    std::function<void(long)> rec = [&](long c) {
        if (results.size() >= max_results) return;
        if (c == m) {
            emit();
            return;
        }
        for (const auto& v : cands[c]) {
            bool ok = true;
            for (long p = 0; p < c && ok; ++p)
                if (qform(*chosen[p], v) != Rational(0)) ok = false;
            if (!ok) continue;
            chosen[c] = &v;
            rec(c + 1);
            if (results.size() >= max_results) return;
        }
    };
    rec(0);
    return results;
}

}  // namespace bendlab
