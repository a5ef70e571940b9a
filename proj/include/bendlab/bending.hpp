#pragma once

// Bending of a base representation along an amalgam or HNN splitting: the
// side-2 generators (amalgam) are conjugated by B_u, the stable letter (HNN)
// is left-multiplied by B_u. Well-definedness is re-verified per unit value:
// B_u must centralize every listed edge-group word, relators must map to the
// identity, and the bent images must land in SU(J, O_L, tau).

#include "bendlab/certificate.hpp"
#include "bendlab/forms.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bendlab {

// ---------------------------------------------------------------------------
// Words over named generators: whitespace-separated tokens "name" or
// "name^k" with nonzero integer k.
// ---------------------------------------------------------------------------
struct Word {
    std::vector<std::pair<std::string, long>> letters;  // (generator, exponent)
    bool empty() const { return letters.empty(); }
};

inline Word parse_word(const std::string& text) {
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::string tok = text.substr(i, j - i);
        i = j;
        std::string name = tok;
        long exp = 1;
        std::size_t caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            std::string e = tok.substr(caret + 1);
            try {
                std::size_t used = 0;
                exp = std::stol(e, &used);
                if (used != e.size()) throw std::invalid_argument(e);
            } catch (const std::exception&) {
                fail("ParseError", "bad exponent in word token '" + tok + "'");
            }
            if (exp == 0) fail("ParseError", "zero exponent in word token '" + tok + "'");
        }
        if (name.empty()) fail("ParseError", "empty generator name in word");
        w.letters.emplace_back(std::move(name), exp);
    }
    return w;
}

inline std::string format_word(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& [name, exp] : w.letters) {
        if (!out.empty()) out += ' ';
        out += name;
        if (exp != 1) out += "^" + std::to_string(exp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Splitting data
// ---------------------------------------------------------------------------
struct Decomposition {
    enum class Kind { amalgam, hnn };
    Kind kind = Kind::amalgam;
    std::vector<std::string> generators;     // every exposed generator, in order
    std::map<std::string, int> side;         // amalgam: generator -> 1 | 2
    std::string stable;                      // hnn: the stable letter (also in generators)
    std::vector<Word> lambda_words;          // edge-group words B_u must centralize
    std::vector<Word> relators;

    void validate() const {
        if (generators.empty()) fail("EmptyGenerators", "decomposition exposes no generators");
        auto known = [&](const std::string& g) {
            for (const auto& name : generators)
                if (name == g) return true;
            return false;
        };
        if (kind == Kind::amalgam) {
            for (const auto& g : generators) {
                auto it = side.find(g);
                if (it == side.end())
                    fail("UnknownGenerator", "generator '" + g + "' has no side assignment");
                if (it->second != 1 && it->second != 2)
                    fail("ParseError", "side of '" + g + "' must be 1 or 2");
            }
        } else {
            if (stable.empty()) fail("UnknownGenerator", "hnn decomposition needs a stable letter");
            if (!known(stable))
                fail("UnknownGenerator", "stable letter '" + stable + "' is not an exposed generator");
        }
        for (const auto& w : lambda_words) {
            if (w.empty()) fail("ParseError", "empty edge-group word");
            for (const auto& [g, e] : w.letters) {
                (void)e;
                if (!known(g)) fail("UnknownGenerator", "edge word uses unknown generator '" + g + "'");
                if (kind == Kind::hnn && g == stable)
                    fail("UnknownGenerator", "edge word may not use the stable letter '" + g + "'");
            }
        }
        for (const auto& w : relators)
            for (const auto& [g, e] : w.letters) {
                (void)e;
                if (!known(g)) fail("UnknownGenerator", "relator uses unknown generator '" + g + "'");
            }
    }
};

// ---------------------------------------------------------------------------
// Word evaluation
// ---------------------------------------------------------------------------
template <typename K>
Matrix<K> evaluate_word(const std::map<std::string, Matrix<K>>& rep, const Word& w) {
    if (rep.empty()) fail("EmptyGenerators", "no generator images supplied");
    Matrix<K> acc = Matrix<K>::identity(rep.begin()->second.rows(), rep.begin()->second.sample());
    for (const auto& [name, exp] : w.letters) {
        auto it = rep.find(name);
        if (it == rep.end()) fail("UnknownGenerator", "no image for generator '" + name + "'");
        acc = acc * it->second.pow(exp);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// A bending instance: validated exact data for one bend
// ---------------------------------------------------------------------------
struct BendingInstance {
    Form form;
    std::map<std::string, BaseMatrix> base_rep;
    Decomposition decomposition;
    ExtElement unit;

    BendingInstance(Form f, std::map<std::string, BaseMatrix> rep, Decomposition dec, ExtElement u)
        : form(std::move(f)),
          base_rep(std::move(rep)),
          decomposition(std::move(dec)),
          unit(std::move(u)) {
        decomposition.validate();
        if (!unit.ext().base().same(form.field()))
            fail("FieldMismatch", "unit lives over a different base field than the form");
        for (const auto& name : decomposition.generators)
            if (base_rep.find(name) == base_rep.end())
                fail("UnknownGenerator", "no base image for generator '" + name + "'");
        for (const auto& [name, m] : base_rep) {
            bool listed = false;
            for (const auto& g : decomposition.generators)
                if (g == name) listed = true;
            if (!listed)
                fail("UnknownGenerator", "base image '" + name + "' is not an exposed generator");
            if (m.rows() != form.n() + 1 || m.cols() != form.n() + 1)
                fail("SizeMismatch", "image of '" + name + "' is not (n+1)x(n+1)");
            for (long i = 0; i < m.rows(); ++i)
                for (long j = 0; j < m.cols(); ++j)
                    if (!m.at(i, j).is_integral())
                        fail("InvalidBaseRep", "image of '" + name + "' has a non-integral entry at (" +
                                                   std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            if (!so_membership(m, form))
                fail("InvalidBaseRep",
                     "image of '" + name + "' is not in SO(J, O_F): A^t J A = J and det 1 required");
        }
        if (!unit.is_unitary()) fail("NotUnitary", "bending unit must satisfy u * tau(u) = 1");
        if (!unit.a().is_integral() || !unit.b().is_integral())
            fail("NotIntegral", "bending unit must have integral coordinates");
        // centrality of B_u on every edge-group word image
        FieldMatrix b = bending_matrix(unit, form.n());
        for (const auto& w : decomposition.lambda_words) {
            FieldMatrix img = evaluate_word(lifted_rep(), w);
            if (!centralizes_block(b, img))
                fail("CentralizerViolation", "B_u does not commute with the edge word '" +
                                                 format_word(w) + "': bending is ill-defined");
        }
    }

    std::map<std::string, FieldMatrix> lifted_rep() const {
        std::map<std::string, FieldMatrix> out;
        for (const auto& [name, m] : base_rep) out.emplace(name, lift_to_ext(unit.ext(), m));
        return out;
    }
};

// ---------------------------------------------------------------------------
// The bend itself
// ---------------------------------------------------------------------------
inline std::map<std::string, FieldMatrix> bend(const BendingInstance& inst) {
    FieldMatrix b = bending_matrix(inst.unit, inst.form.n());
    FieldMatrix binv = b.inverse();
    std::map<std::string, FieldMatrix> out = inst.lifted_rep();
    if (inst.decomposition.kind == Decomposition::Kind::amalgam) {
        for (auto& [name, m] : out)
            if (inst.decomposition.side.at(name) == 2) m = b * m * binv;
    } else {
        auto it = out.find(inst.decomposition.stable);
        it->second = b * it->second;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification certificates
// ---------------------------------------------------------------------------
inline Certificate verify_relators(const std::map<std::string, FieldMatrix>& rep,
                                   const std::vector<Word>& relators) {
    Certificate cert;
    cert.check = "relators";
    cert.verdict = "pass";
    cert.detail = relators.empty() ? "no relators: passes vacuously"
                                   : "all relators map to the identity";
    long idx = 0;
    for (const auto& w : relators) {
        FieldMatrix img = evaluate_word(rep, w);
        FieldMatrix id = FieldMatrix::identity(img.rows(), img.sample());
        ++idx;
        if (img == id) {
            cert.evidence.emplace_back("relator_" + std::to_string(idx), format_word(w) + " -> identity");
        } else {
            cert.verdict = "fail";
            cert.detail = "relator '" + format_word(w) + "' does not map to the identity";
            std::string entries;
            for (long i = 0; i < img.rows(); ++i)
                for (long j = 0; j < img.cols(); ++j)
                    entries += (entries.empty() ? "" : ", ") + to_string(img.at(i, j));
            cert.evidence.emplace_back("relator_" + std::to_string(idx) + "_image", entries);
        }
    }
    return cert;
}

inline Certificate verify_su_containment(const std::map<std::string, FieldMatrix>& rep,
                                         const Form& j) {
    Certificate cert;
    cert.check = "su_containment";
    cert.verdict = "pass";
    cert.detail = "every generator image lies in SU(J, O_L, tau); the group they generate does too";
    for (const auto& [name, m] : rep) {
        bool ok = su_membership(m, j);
        cert.evidence.emplace_back(name, ok ? "pass" : "fail");
        if (!ok) {
            cert.verdict = "fail";
            cert.detail = "generator '" + name + "' violates A* J A = J or det A = 1";
        }
    }
    return cert;
}

}  // namespace bendlab
