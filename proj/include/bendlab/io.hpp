#pragma once

// File formats and serialization: INI-style structured text for
// configuration (sections of key = value pairs, repeated keys kept in
// order), JSON for matrices and reports, SHA-256 input hashes for report
// provenance, and atomic report writes.

#include "bendlab/bending.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bendlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// plain file helpers
// ---------------------------------------------------------------------------
inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("FileNotFound", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// write via a temporary in the same directory, then rename into place
inline void atomic_write_file(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    if (target.has_parent_path()) {
        std::error_code dir_ec;
        std::filesystem::create_directories(target.parent_path(), dir_ec);
    }
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("WriteError", "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail("WriteError", "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) fail("WriteError", "cannot move report into place at '" + path + "': " + ec.message());
}

// resolve `ref` relative to the directory containing `anchor_file`
inline std::string resolve_relative(const std::string& anchor_file, const std::string& ref) {
    std::filesystem::path r(ref);
    if (r.is_absolute()) return ref;
    return (std::filesystem::path(anchor_file).parent_path() / r).string();
}

// ---------------------------------------------------------------------------
// SHA-256 (for input-hash provenance in reports)
// ---------------------------------------------------------------------------
namespace detail {

struct Sha256 {
    std::array<std::uint32_t, 8> h{0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                                   0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    std::array<std::uint8_t, 64> buf{};
    std::uint64_t total = 0;
    std::size_t fill = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const std::uint8_t* p) {
        static constexpr std::uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                      hh = h[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        total += len;
        while (len > 0) {
            std::size_t take = std::min(len, buf.size() - fill);
            std::copy(p, p + take, buf.begin() + fill);
            fill += take;
            p += take;
            len -= take;
            if (fill == buf.size()) {
                block(buf.data());
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        std::uint64_t bits = total * 8;
        std::uint8_t pad = 0x80;
        update(&pad, 1);
        std::uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        for (int i = 7; i >= 0; --i) {
            std::uint8_t b = static_cast<std::uint8_t>(bits >> (8 * i));
            update(&b, 1);
        }
        static const char* hexd = "0123456789abcdef";
        std::string out;
        for (std::uint32_t v : h)
            for (int i = 7; i >= 0; --i) out += hexd[(v >> (4 * i)) & 0xf];
        return out;
    }
};

}  // namespace detail

inline std::string sha256_hex(const std::string& data) {
    detail::Sha256 s;
    s.update(data.data(), data.size());
    return s.hex_digest();
}

inline std::string file_sha256(const std::string& path) { return sha256_hex(read_text_file(path)); }

// ---------------------------------------------------------------------------
// INI-style structured text: [section] headers, key = value lines, '#' or
// ';' comments. Repeated keys are kept in file order.
// ---------------------------------------------------------------------------
struct IniFile {
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };
    std::vector<Section> sections;
    std::string source;  // path, for error messages

    const Section* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        const Section* s = find(section);
        if (!s) return std::nullopt;
        for (const auto& [k, v] : s->entries)
            if (k == key) return v;
        return std::nullopt;
    }

    std::vector<std::string> get_all(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        if (const Section* s = find(section))
            for (const auto& [k, v] : s->entries)
                if (k == key) out.push_back(v);
        return out;
    }

    std::string require(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v)
            fail("ParseError",
                 source + ": missing required key '" + key + "' in section [" + section + "]");
        return *v;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

inline IniFile parse_ini(const std::string& text, const std::string& source = "<string>") {
    IniFile ini;
    ini.source = source;
    ini.sections.push_back({"", {}});  // anonymous leading section
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail("ParseError",
                     source + ":" + std::to_string(lineno) + ": unterminated section header");
            ini.sections.push_back({detail::trim(t.substr(1, t.size() - 2)), {}});
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail("ParseError",
                 source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            fail("ParseError", source + ":" + std::to_string(lineno) + ": empty key");
        ini.sections.back().entries.emplace_back(key, value);
    }
    return ini;
}

inline IniFile load_ini(const std::string& path) { return parse_ini(read_text_file(path), path); }

// ---------------------------------------------------------------------------
// small parsing helpers
// ---------------------------------------------------------------------------
inline std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

inline std::vector<Rational> parse_rational_vector(const std::string& s) {
    std::vector<Rational> out;
    for (const auto& f : split_fields(s)) out.push_back(parse_rational(f));
    return out;
}

inline long parse_long(const std::string& s) {
    Rational r = parse_rational(s);
    if (den(r) != 1) fail("ParseError", "expected an integer, got '" + s + "'");
    return static_cast<long>(num(r));
}

// ---------------------------------------------------------------------------
// field files: [field] min_poly (ascending rational coefficients),
// optional identity_root and name; [units] fundamental = coord vector,
// repeated once per fundamental unit of O_F.
// ---------------------------------------------------------------------------
struct LoadedField {
    NumberField field;
    std::vector<AlgebraicNumber> fundamental_units;
};

inline LoadedField load_field(const std::string& path) {
    IniFile ini = load_ini(path);
    std::vector<Rational> coeffs = parse_rational_vector(ini.require("field", "min_poly"));
    int identity_root = -1;
    if (auto v = ini.get("field", "identity_root"))
        identity_root = static_cast<int>(parse_long(*v));
    std::string name = ini.get("field", "name").value_or("F");
    NumberField F(QPoly(coeffs), identity_root, name);
    LoadedField out{F, {}};
    for (const auto& uv : ini.get_all("units", "fundamental")) {
        std::vector<Rational> c = parse_rational_vector(uv);
        if (static_cast<long>(c.size()) != F.degree())
            fail("ParseError", path + ": fundamental unit needs " + std::to_string(F.degree()) +
                                   " power-basis coordinates");
        out.fundamental_units.push_back(AlgebraicNumber(F, c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// form files: [form] field = <field file reference>, n, and n repeated
// alpha = coord-vector lines (power-basis coordinates of each alpha_i).
// ---------------------------------------------------------------------------
struct LoadedForm {
    NumberField field;
    std::vector<AlgebraicNumber> fundamental_units;
    Form form;
};

inline LoadedForm load_form(const std::string& path) {
    IniFile ini = load_ini(path);
    std::string field_path = resolve_relative(path, ini.require("form", "field"));
    LoadedField lf = load_field(field_path);
    long n = parse_long(ini.require("form", "n"));
    std::vector<AlgebraicNumber> alphas;
    for (const auto& av : ini.get_all("form", "alpha")) {
        std::vector<Rational> c = parse_rational_vector(av);
        if (static_cast<long>(c.size()) != lf.field.degree())
            fail("ParseError",
                 path + ": alpha needs " + std::to_string(lf.field.degree()) + " coordinates");
        alphas.push_back(AlgebraicNumber(lf.field, c));
    }
    if (static_cast<long>(alphas.size()) != n)
        fail("ParseError", path + ": form declares n = " + std::to_string(n) + " but lists " +
                               std::to_string(alphas.size()) + " alpha entries");
    return LoadedForm{lf.field, lf.fundamental_units, Form(lf.field, alphas)};
}

// ---------------------------------------------------------------------------
// matrix JSON: row-major arrays whose entries are either a rational literal
// "p/q" or an ExtElement coefficient object {"a": [...], "b": [...]} with
// power-basis coordinate arrays.
// ---------------------------------------------------------------------------
inline Json rational_json(const Rational& r) { return Json(format_rational(r)); }

inline Json alg_json(const AlgebraicNumber& x) {
    Json arr = Json::array();
    for (const auto& c : x.coords()) arr.push_back(format_rational(c));
    return arr;
}

inline Json ext_json(const ExtElement& x) {
    Json o = Json::object();
    o["a"] = alg_json(x.a());
    o["b"] = alg_json(x.b());
    return o;
}

inline Json base_matrix_json(const BaseMatrix& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j) {
            const AlgebraicNumber& x = m.at(i, j);
            bool rational = true;
            for (std::size_t k = 1; k < x.coords().size(); ++k)
                if (!(x.coords()[k] == 0)) rational = false;
            if (rational)
                row.push_back(format_rational(x.coords().empty() ? Rational(0) : x.coords()[0]));
            else
                row.push_back(alg_json(x));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json field_matrix_json(const FieldMatrix& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back(ext_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline AlgebraicNumber alg_from_json(const NumberField& F, const Json& j,
                                     const std::string& where) {
    if (j.is_string()) return F.from_rational(parse_rational(j.get<std::string>()));
    if (!j.is_array())
        fail("ParseError", where + ": expected a rational literal or coordinate array");
    std::vector<Rational> c;
    for (const auto& e : j) {
        if (!e.is_string()) fail("ParseError", where + ": coordinates must be \"p/q\" strings");
        c.push_back(parse_rational(e.get<std::string>()));
    }
    if (static_cast<long>(c.size()) != F.degree())
        fail("ParseError", where + ": expected " + std::to_string(F.degree()) + " coordinates");
    return AlgebraicNumber(F, c);
}

inline ExtElement ext_from_json(const QuadExtension& E, const Json& j, const std::string& where) {
    if (j.is_string())
        return E.from_rational(parse_rational(j.get<std::string>()));
    if (j.is_object()) {
        if (!j.contains("a") || !j.contains("b"))
            fail("ParseError", where + ": extension entry needs both \"a\" and \"b\"");
        return ExtElement(E, alg_from_json(E.base(), j["a"], where),
                          alg_from_json(E.base(), j["b"], where));
    }
    // a bare coordinate array denotes an element of the base field
    return ExtElement(E, alg_from_json(E.base(), j, where), E.base().zero());
}

inline BaseMatrix base_matrix_from_json(const NumberField& F, const Json& rows,
                                        const std::string& where) {
    if (!rows.is_array() || rows.empty())
        fail("ParseError", where + ": matrix must be a non-empty array of rows");
    std::vector<std::vector<AlgebraicNumber>> out;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != rows.size())
            fail("ParseError", where + ": matrix rows must all have length " +
                                   std::to_string(rows.size()));
        std::vector<AlgebraicNumber> r;
        for (const auto& e : row) r.push_back(alg_from_json(F, e, where));
        out.push_back(std::move(r));
    }
    return BaseMatrix::from_rows(out);
}

inline FieldMatrix field_matrix_from_json(const QuadExtension& E, const Json& rows,
                                          const std::string& where) {
    if (!rows.is_array() || rows.empty())
        fail("ParseError", where + ": matrix must be a non-empty array of rows");
    std::vector<std::vector<ExtElement>> out;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != rows.size())
            fail("ParseError", where + ": matrix rows must all have length " +
                                   std::to_string(rows.size()));
        std::vector<ExtElement> r;
        for (const auto& e : row) r.push_back(ext_from_json(E, e, where));
        out.push_back(std::move(r));
    }
    return FieldMatrix::from_rows(out);
}

inline Json parse_json(const std::string& text, const std::string& source) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("ParseError", source + ": invalid JSON");
    return j;
}

// ---------------------------------------------------------------------------
// generator files: {"size": m, "generators": {name: [[...]]}} over the base
// field.
// ---------------------------------------------------------------------------
inline std::map<std::string, BaseMatrix> load_generators(const std::string& path,
                                                         const NumberField& F) {
    Json j = parse_json(read_text_file(path), path);
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_object())
        fail("ParseError", path + ": expected {\"size\": m, \"generators\": {...}}");
    std::map<std::string, BaseMatrix> out;
    for (const auto& [name, rows] : j["generators"].items()) {
        BaseMatrix m = base_matrix_from_json(F, rows, path + ": generator '" + name + "'");
        if (j.contains("size") && m.rows() != j["size"].get<long>())
            fail("ParseError", path + ": generator '" + name + "' does not match declared size");
        out.emplace(name, std::move(m));
    }
    if (out.empty()) fail("ParseError", path + ": no generators");
    return out;
}

// ---------------------------------------------------------------------------
// decomposition files: [decomposition] kind = amalgam|hnn, generators list,
// stable letter (hnn), repeated lambda = <word> edge-group lines, repeated
// relator = <word> lines; [sides] name = 1|2 for amalgams.
// ---------------------------------------------------------------------------
inline Decomposition load_decomposition(const std::string& path) {
    IniFile ini = load_ini(path);
    Decomposition d;
    std::string kind = ini.require("decomposition", "kind");
    if (kind == "amalgam")
        d.kind = Decomposition::Kind::amalgam;
    else if (kind == "hnn")
        d.kind = Decomposition::Kind::hnn;
    else
        fail("ParseError", path + ": kind must be 'amalgam' or 'hnn', got '" + kind + "'");
    d.generators = split_fields(ini.require("decomposition", "generators"));
    if (auto v = ini.get("decomposition", "stable")) d.stable = *v;
    for (const auto& w : ini.get_all("decomposition", "lambda")) d.lambda_words.push_back(parse_word(w));
    for (const auto& w : ini.get_all("decomposition", "relator")) d.relators.push_back(parse_word(w));
    if (const IniFile::Section* s = ini.find("sides"))
        for (const auto& [k, v] : s->entries) d.side[k] = static_cast<int>(parse_long(v));
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// instance files: [instance] form / generators / decomposition references,
// trace = power-basis coordinates of the trace u of s, unit_a / unit_b =
// power-basis coordinates of the bending unit a + b s.
// ---------------------------------------------------------------------------
struct LoadedInstance {
    LoadedForm form;
    QuadExtension ext;
    BendingInstance instance;
    std::vector<std::pair<std::string, std::string>> input_hashes;  // (path, sha256)
};

inline LoadedInstance load_instance(const std::string& path) {
    IniFile ini = load_ini(path);
    std::string form_path = resolve_relative(path, ini.require("instance", "form"));
    std::string gens_path = resolve_relative(path, ini.require("instance", "generators"));
    std::string dec_path = resolve_relative(path, ini.require("instance", "decomposition"));
    LoadedForm lform = load_form(form_path);
    const NumberField& F = lform.field;

    auto coords = [&](const std::string& key) {
        std::vector<Rational> c = parse_rational_vector(ini.require("instance", key));
        if (static_cast<long>(c.size()) != F.degree())
            fail("ParseError", path + ": '" + key + "' needs " + std::to_string(F.degree()) +
                                   " power-basis coordinates");
        return AlgebraicNumber(F, c);
    };
    AlgebraicNumber trace = coords("trace");
    QuadExtension E(F, trace);
    AlgebraicNumber ua = coords("unit_a");
    AlgebraicNumber ub = coords("unit_b");
    ExtElement unit(E, ua, ub);

    std::map<std::string, BaseMatrix> gens = load_generators(gens_path, F);
    Decomposition dec = load_decomposition(dec_path);
    BendingInstance inst(lform.form, gens, dec, unit);

    LoadedInstance out{std::move(lform), E, std::move(inst), {}};
    for (const std::string& p : {path, form_path, gens_path, dec_path})
        out.input_hashes.emplace_back(p, file_sha256(p));
    return out;
}

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------
inline Json certificate_json(const Certificate& c) {
    Json o = Json::object();
    o["check"] = c.check;
    o["verdict"] = c.verdict;
    o["detail"] = c.detail;
    Json params = Json::object();
    for (const auto& [k, v] : c.parameters) params[k] = v;
    o["parameters"] = std::move(params);
    Json ev = Json::object();
    for (const auto& [k, v] : c.evidence) ev[k] = v;
    o["evidence"] = std::move(ev);
    return o;
}

inline Json input_hashes_json(const std::vector<std::pair<std::string, std::string>>& hashes) {
    Json o = Json::object();
    for (const auto& [p, h] : hashes) o[std::filesystem::path(p).filename().string()] = h;
    return o;
}

inline void write_report(const std::string& path, const Json& body) {
    atomic_write_file(path, body.dump(2) + "\n");
}

}  // namespace bendlab
