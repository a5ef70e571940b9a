#pragma once

// End-to-end orchestration: unit search (or trace override) -> quadratic
// extension -> bending -> exact SU verification -> certification -> JSON
// report. Configuration errors (bad files, invalid algebraic data) are
// distinct from hard-check failures; the CLI maps the former to exit 2 and
// the latter to exit 1.

#include "bendlab/certify.hpp"
#include "bendlab/io.hpp"
#include "bendlab/units.hpp"

#include <optional>
#include <string>

namespace bendlab {

inline ExtElement parse_unit_token(const QuadExtension& E, std::string tok) {
    bool neg = false;
    if (!tok.empty() && tok[0] == '-') {
        neg = true;
        tok = tok.substr(1);
    }
    ExtElement u = E.one();
    if (tok == "1") {
        // identity: the unbent instance
    } else if (tok == "s") {
        u = E.gen();
    } else if (tok.rfind("s^", 0) == 0) {
        long k = parse_long(tok.substr(2));
        if (k == 0) fail("ParseError", "bending unit exponent must be nonzero");
        ExtElement base = k > 0 ? E.gen() : E.gen().inverse();
        for (long i = 0; i < (k > 0 ? k : -k); ++i) u = u * base;
    } else {
        fail("ParseError", "unknown bending unit '" + tok + "': use 1, s, s^k or a - prefix");
    }
    if (neg) u = E.zero() - u;
    return u;
}

struct Pipeline {
    LoadedForm form;
    std::map<std::string, BaseMatrix> generators;
    Decomposition decomposition;
    QuadExtension ext;
    BendingInstance instance;
    ThinnessOptions certify_options;
    std::string report_path;
    std::optional<SpecialUnit> found_unit;  // set when the search ran
    std::vector<std::pair<std::string, std::string>> input_hashes;
    Json parameters;
};

// Everything that can go wrong here is a configuration error.
inline Pipeline build_pipeline(const std::string& config_path) {
    IniFile cfg = load_ini(config_path);
    std::string form_path = resolve_relative(config_path, cfg.require("pipeline", "form"));
    std::string gens_path = resolve_relative(config_path, cfg.require("pipeline", "generators"));
    std::string dec_path = resolve_relative(config_path, cfg.require("pipeline", "decomposition"));
    std::string report_path = resolve_relative(config_path, cfg.require("pipeline", "report"));

    LoadedForm lform = load_form(form_path);
    const NumberField& F = lform.field;
    std::map<std::string, BaseMatrix> gens = load_generators(gens_path, F);
    Decomposition dec = load_decomposition(dec_path);

    Json params = Json::object();

    // the trace of s: either an override or the certified special unit
    std::optional<SpecialUnit> found;
    AlgebraicNumber trace = F.zero();
    if (auto ov = cfg.get("units", "trace_override")) {
        std::vector<Rational> c = parse_rational_vector(*ov);
        if (static_cast<long>(c.size()) != F.degree())
            fail("ParseError", config_path + ": trace_override needs " +
                                   std::to_string(F.degree()) + " power-basis coordinates");
        trace = AlgebraicNumber(F, c);
        params["trace_source"] = "override";
        if (F.degree() == 1)
            params["note"] =
                "rank-zero base field: the special-unit search needs positive unit rank, "
                "so the trace was supplied directly";
    } else {
        Rational threshold(10);
        if (auto t = cfg.get("units", "threshold")) threshold = parse_rational(*t);
        found = find_special_unit(UnitSearchProblem(F, lform.fundamental_units, threshold));
        trace = found->u;
        params["trace_source"] = "special_unit_search";
        params["threshold"] = format_rational(threshold);
    }
    QuadExtension E = build_extension(F, trace);

    std::string unit_tok = cfg.get("bending", "unit").value_or("s");
    ExtElement unit = parse_unit_token(E, unit_tok);
    params["bending_unit"] = unit_tok;

    ThinnessOptions opts;
    if (auto v = cfg.get("certify", "word_cap")) opts.word_cap = parse_long(*v);
    if (auto v = cfg.get("certify", "proximality_length"))
        opts.proximality_word_length = parse_long(*v);
    if (auto v = cfg.get("certify", "proximality_budget"))
        opts.proximality_budget = parse_long(*v);
    if (auto v = cfg.get("certify", "prime")) opts.prime = parse_long(*v);
    params["word_cap"] = std::to_string(opts.word_cap);
    params["proximality_length"] = std::to_string(opts.proximality_word_length);
    if (opts.prime) params["prime"] = std::to_string(*opts.prime);

    BendingInstance inst(lform.form, gens, dec, unit);

    std::vector<std::pair<std::string, std::string>> hashes;
    std::string field_path =
        resolve_relative(form_path, load_ini(form_path).require("form", "field"));
    for (const std::string& p : {config_path, field_path, form_path, gens_path, dec_path})
        hashes.emplace_back(p, file_sha256(p));

    return Pipeline{std::move(lform), std::move(gens),  std::move(dec),    std::move(E),
                    std::move(inst),  opts,             report_path,       std::move(found),
                    std::move(hashes), std::move(params)};
}

struct PipelineResult {
    int exit_code = 0;
    Json report;
};

// Failures past this point are run results, not configuration errors: the
// report is still written and the exit code says whether the hard checks
// (exact SU containment and relators) passed.
inline PipelineResult run_pipeline(const Pipeline& p, bool write = true) {
    ThinnessReport thin = thinness_report(p.instance, p.certify_options);
    auto cert_of = [&](const std::string& name) -> const Certificate* {
        for (const auto& c : thin.certificates)
            if (c.check == name) return &c;
        return nullptr;
    };
    const Certificate* su = cert_of("su_containment");
    const Certificate* rel = cert_of("relators");

    Json report = Json::object();
    report["tool"] = "bendlab pipeline";
    report["inputs"] = input_hashes_json(p.input_hashes);
    report["parameters"] = p.parameters;
    report["trace"] = alg_json(p.ext.trace());
    report["unit"] = ext_json(p.instance.unit);
    if (p.found_unit) {
        Json sp = Json::object();
        sp["value"] = alg_json(p.found_unit->u);
        Json pw = Json::array();
        for (long e : p.found_unit->power_witness) pw.push_back(e);
        sp["power_witness"] = std::move(pw);
        Json ev = Json::array();
        for (const auto& iv : p.found_unit->embedding_evidence) {
            Json pair = Json::array();
            pair.push_back(format_rational(iv.lo));
            pair.push_back(format_rational(iv.hi));
            ev.push_back(std::move(pair));
        }
        sp["embedding_evidence"] = std::move(ev);
        report["special_unit"] = std::move(sp);
    }
    report["su_containment"] = su ? su->verdict : "missing";
    report["relators"] = rel ? rel->verdict : "missing";
    Json images = Json::object();
    for (const auto& [name, m] : bend(p.instance)) images[name] = field_matrix_json(m);
    report["generators_bent"] = std::move(images);
    Json certs = Json::array();
    for (const auto& c : thin.certificates) certs.push_back(certificate_json(c));
    report["certificates"] = std::move(certs);
    report["summary"] = thin.summary;

    PipelineResult out;
    out.report = std::move(report);
    bool hard_ok = su && su->verdict == "pass" && rel && rel->verdict == "pass";
    out.exit_code = hard_ok ? 0 : 1;
    if (write) write_report(p.report_path, out.report);
    return out;
}

}  // namespace bendlab
