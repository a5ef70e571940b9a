// bendlab: special units, unitary bending, and thinness certificates for
// lattices in SU(J) over totally real fields, plus the convex projective
// geometry toolkit (Hilbert metric, generalized cusps, orbit openness).
//
// Exit codes: 0 success / all hard checks pass; 1 hard-check failure or a
// failure while running a well-formed job; 2 configuration errors (bad
// flags, unreadable or invalid input files). Errors are reported as one
// JSON object on stderr.

#include "bendlab/certify.hpp"
#include "bendlab/io.hpp"
#include "bendlab/pipeline.hpp"
#include "bendlab/projgeom.hpp"
#include "bendlab/selftest.hpp"
#include "bendlab/units.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace bendlab;

void print_error(const Error& e) {
    Json j = Json::object();
    j["error"] = e.code;
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
}

// Loading and validation happen in `setup` (failures exit 2); the returned
// callable is the job itself (failures exit 1).
using Job = std::function<int()>;

Json interval_json(const Interval& iv) {
    Json j = Json::array();
    j.push_back(format_rational(iv.lo));
    j.push_back(format_rational(iv.hi));
    return j;
}

Json hashes_of(const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, std::string>> h;
    for (const std::string& p : paths) h.emplace_back(p, file_sha256(p));
    return input_hashes_json(h);
}

// --- units find -------------------------------------------------------------

Job setup_units_find(const std::string& field_path, const std::string& threshold_text) {
    LoadedField lf = load_field(field_path);
    Rational threshold = parse_rational(threshold_text);
    UnitSearchProblem prob(lf.field, lf.fundamental_units, threshold);
    Json inputs = hashes_of({field_path});
    return [prob = std::move(prob), inputs, threshold]() {
        SpecialUnit su = find_special_unit(prob);
        Json rep = Json::object();
        rep["tool"] = "bendlab units find";
        rep["inputs"] = inputs;
        rep["parameters"] = Json::object({{"threshold", format_rational(threshold)}});
        rep["special_unit"] = alg_json(su.u);
        Json pw = Json::array();
        for (long e : su.power_witness) pw.push_back(e);
        rep["power_witness"] = std::move(pw);
        Json ev = Json::array();
        for (const Interval& iv : su.embedding_evidence) ev.push_back(interval_json(iv));
        rep["embedding_evidence"] = std::move(ev);
        std::cout << rep.dump(2) << "\n";
        return 0;
    };
}

// --- forms check ------------------------------------------------------------

Job setup_forms_check(const std::string& form_path, const std::string& matrix_path,
                      const std::string& mode) {
    if (mode != "so" && mode != "su")
        fail("ParseError", "--mode must be 'so' or 'su', got '" + mode + "'");
    LoadedForm lf = load_form(form_path);
    Json mj = parse_json(read_text_file(matrix_path), matrix_path);
    const Json& entries = mj.is_object() ? mj.at("entries") : mj;

    bool member = false;
    if (mode == "so") {
        BaseMatrix m = base_matrix_from_json(lf.field, entries, matrix_path);
        member = so_membership(m, lf.form);
    } else {
        if (!mj.is_object() || !mj.contains("trace"))
            fail("ParseError", matrix_path +
                                   ": su mode needs an object with 'trace' (coordinates of the "
                                   "extension's trace) and 'entries'");
        AlgebraicNumber trace = alg_from_json(lf.field, mj.at("trace"), matrix_path + ": trace");
        QuadExtension ext(lf.field, trace);
        FieldMatrix m = field_matrix_from_json(ext, entries, matrix_path);
        member = su_membership(m, lf.form);
    }
    Json inputs = hashes_of({form_path, matrix_path});
    return [inputs, mode, member]() {
        Json rep = Json::object();
        rep["tool"] = "bendlab forms check";
        rep["inputs"] = inputs;
        rep["parameters"] = Json::object({{"mode", mode}});
        rep["membership"] = member ? "pass" : "fail";
        std::cout << rep.dump(2) << "\n";
        return member ? 0 : 1;
    };
}

// --- bend run / bend verify ---------------------------------------------------

Job setup_bend_run(const std::string& instance_path, const std::string& out_path) {
    LoadedInstance li = load_instance(instance_path);
    return [li = std::move(li), out_path]() {
        auto rep = bend(li.instance);
        Certificate su = verify_su_containment(rep, li.instance.form);
        Certificate rel = verify_relators(rep, li.instance.decomposition.relators);
        Json out = Json::object();
        out["tool"] = "bendlab bend run";
        out["inputs"] = input_hashes_json(li.input_hashes);
        out["trace"] = alg_json(li.ext.trace());
        out["unit"] = ext_json(li.instance.unit);
        out["su_containment"] = su.verdict;
        out["relators"] = rel.verdict;
        Json images = Json::object();
        for (const auto& [name, m] : rep) images[name] = field_matrix_json(m);
        out["images"] = std::move(images);
        write_report(out_path, out);
        bool ok = su.passed() && rel.passed();
        std::cout << "bent representation written to " << out_path << " (su_containment="
                  << su.verdict << ", relators=" << rel.verdict << ")\n";
        return ok ? 0 : 1;
    };
}

Job setup_bend_verify(const std::string& rep_path, const std::string& form_path,
                      const std::string& relators_path) {
    Json rj = parse_json(read_text_file(rep_path), rep_path);
    LoadedForm lf = load_form(form_path);
    if (!rj.is_object() || !rj.contains("trace") || !rj.contains("images"))
        fail("ParseError", rep_path + ": expected an object with 'trace' and 'images'");
    AlgebraicNumber trace = alg_from_json(lf.field, rj.at("trace"), rep_path + ": trace");
    QuadExtension ext(lf.field, trace);
    std::map<std::string, FieldMatrix> rep;
    for (const auto& [name, rows] : rj.at("images").items())
        rep.emplace(name, field_matrix_from_json(ext, rows, rep_path + ": image '" + name + "'"));

    std::vector<Word> relators;
    std::istringstream in(read_text_file(relators_path));
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        Word w = parse_word(line);  // tokens are whitespace-separated; blank lines drop out
        if (!w.empty()) relators.push_back(std::move(w));
    }

    Json inputs = hashes_of({rep_path, form_path, relators_path});
    return [rep = std::move(rep), form = lf.form, relators = std::move(relators), inputs]() {
        Certificate su = verify_su_containment(rep, form);
        Certificate rel = verify_relators(rep, relators);
        Json out = Json::object();
        out["tool"] = "bendlab bend verify";
        out["inputs"] = inputs;
        out["su_containment"] = certificate_json(su);
        out["relators"] = certificate_json(rel);
        std::cout << out.dump(2) << "\n";
        return su.passed() && rel.passed() ? 0 : 1;
    };
}

// --- projgeom ----------------------------------------------------------------

std::vector<std::vector<Rational>> load_points(const std::string& path) {
    std::vector<std::vector<Rational>> pts;
    std::istringstream in(read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::vector<std::string> fields = split_fields(line);
        if (fields.empty()) continue;
        std::vector<Rational> coords;
        for (const std::string& f : fields) coords.push_back(parse_rational(f));
        pts.push_back(std::move(coords));
    }
    if (pts.size() < 2 || pts.size() % 2 != 0)
        fail("ParseError", path + ": expected an even number of points (consecutive pairs)");
    return pts;
}

Job setup_projgeom_dist(const std::string& domain, const std::string& points_path, long precision,
                        const std::string& svg_path) {
    if (precision < 1) fail("InvalidThreshold", "--precision must be >= 1");
    std::vector<std::vector<Rational>> pts = load_points(points_path);
    std::size_t dim = pts.front().size();
    for (const auto& p : pts)
        if (p.size() != dim) fail("SizeMismatch", points_path + ": points of mixed dimension");

    using Coords = std::vector<Rational>;
    std::function<Interval(const Coords&, const Coords&)> dist;
    long n = static_cast<long>(dim) - 1;
    if (domain == "segment") {
        if (dim != 1 && dim != 2)
            fail("SizeMismatch", "segment points have one coordinate (or [x, w] projectively)");
        dist = [precision](const Coords& a, const Coords& b) {
            auto value = [](const Coords& p) {
                if (p.size() == 1) return p[0];
                if (p[1] == Rational(0))
                    fail("PointOutside", "point at infinity is not inside the segment");
                return p[0] / p[1];
            };
            return hilbert_distance_segment(value(a), value(b), precision);
        };
    } else if (domain == "klein") {
        NumberField F(QPoly({Rational(0), Rational(1)}), -1, "Q");
        std::vector<AlgebraicNumber> alphas(static_cast<std::size_t>(n), F.one());
        Form j(F, alphas);
        dist = [j, precision](const Coords& a, const Coords& b) {
            return hilbert_distance_klein(j, ProjPoint(a), ProjPoint(b), precision);
        };
    } else if (domain == "omega0") {
        dist = [n, precision](const Coords& a, const Coords& b) {
            return hilbert_distance_omega0(n, ProjPoint(a), ProjPoint(b), precision);
        };
    } else if (domain == "omega1") {
        dist = [n, precision](const Coords& a, const Coords& b) {
            return hilbert_distance_omega1(n, ProjPoint(a), ProjPoint(b), precision);
        };
    } else {
        fail("ParseError", "--domain must be one of klein|omega0|omega1|segment");
    }

    if (!svg_path.empty() && domain != "omega0" && domain != "omega1")
        fail("ParseError", "--emit-svg renders cusp sections and needs domain omega0 or omega1");

    Json inputs = hashes_of({points_path});
    return [pts = std::move(pts), dist = std::move(dist), domain, precision, inputs, svg_path,
            n]() {
        Json rep = Json::object();
        rep["tool"] = "bendlab projgeom dist";
        rep["inputs"] = inputs;
        rep["parameters"] =
            Json::object({{"domain", domain}, {"precision", std::to_string(precision)}});
        Json ds = Json::array();
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
            ds.push_back(interval_json(dist(pts[i], pts[i + 1])));
        rep["distances"] = std::move(ds);
        if (!svg_path.empty()) {
            CuspModel m(domain == "omega0" ? 0 : 1, n);
            std::string svg =
                render_cusp_svg(m, {Rational(1), Rational(2), Rational(3)});
            atomic_write_file(svg_path, svg);
            rep["svg"] = svg_path;
        }
        std::cout << rep.dump(2) << "\n";
        return 0;
    };
}

Job setup_projgeom_orbit(long n, const std::string& point_text) {
    std::string spaced = point_text;
    for (char& ch : spaced)
        if (ch == ',') ch = ' ';
    std::vector<Rational> coords = parse_rational_vector(spaced);
    ProjPoint p(coords);
    OrbitReport r = orbit_openness(p, n);
    return [r, n, coords]() {
        Json rep = Json::object();
        rep["tool"] = "bendlab projgeom orbit";
        Json pt = Json::array();
        for (const Rational& c : coords) pt.push_back(format_rational(c));
        rep["point"] = std::move(pt);
        rep["n"] = std::to_string(n);
        rep["rank"] = std::to_string(r.rank);
        rep["open"] = r.open;
        std::cout << rep.dump(2) << "\n";
        return 0;
    };
}

// --- certify run ---------------------------------------------------------------

Job setup_certify_run(const std::string& instance_path, std::optional<long> prime, long word_cap,
                      const std::string& report_path) {
    LoadedInstance li = load_instance(instance_path);
    ThinnessOptions opt;
    opt.word_cap = word_cap;
    if (word_cap < 1) fail("InvalidThreshold", "--word-cap must be >= 1");
    opt.prime = prime;
    return [li = std::move(li), opt, report_path]() {
        ThinnessReport thin = thinness_report(li.instance, opt);
        std::string su = "missing", rel = "missing";
        Json certs = Json::array();
        for (const Certificate& c : thin.certificates) {
            if (c.check == "su_containment") su = c.verdict;
            if (c.check == "relators") rel = c.verdict;
            certs.push_back(certificate_json(c));
        }
        Json rep = Json::object();
        rep["tool"] = "bendlab certify run";
        rep["inputs"] = input_hashes_json(li.input_hashes);
        Json params = Json::object();
        params["word_cap"] = std::to_string(opt.word_cap);
        params["proximality_length"] = std::to_string(opt.proximality_word_length);
        if (opt.prime) params["prime"] = std::to_string(*opt.prime);
        rep["parameters"] = std::move(params);
        rep["su_containment"] = su;
        rep["relators"] = rel;
        rep["certificates"] = std::move(certs);
        rep["summary"] = thin.summary;
        write_report(report_path, rep);
        std::cout << "certification report written to " << report_path
                  << " (su_containment=" << su << ", relators=" << rel << ")\n";
        return su == "pass" && rel == "pass" ? 0 : 1;
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact special units, unitary bending and thinness certificates, with a convex "
        "projective geometry toolkit"};
    app.require_subcommand(1);

    Job job;  // set by the chosen subcommand's setup phase
    std::function<void()> setup;

    // units find
    auto* units = app.add_subcommand("units", "special-unit search in totally real fields");
    units->require_subcommand(1);
    auto* ufind = units->add_subcommand("find", "search for a unit large at the identity place");
    std::string u_field, u_threshold = "10";
    ufind->add_option("--field", u_field, "field description file")->required();
    ufind->add_option("--threshold", u_threshold, "identity-place lower bound N (rational)");
    ufind->callback([&] { setup = [&] { job = setup_units_find(u_field, u_threshold); }; });

    // forms check
    auto* forms = app.add_subcommand("forms", "diagonal forms and SO/SU membership");
    forms->require_subcommand(1);
    auto* fcheck = forms->add_subcommand("check", "check a matrix against SO(J) or SU(J)");
    std::string f_form, f_matrix, f_mode;
    fcheck->add_option("--form", f_form, "form description file")->required();
    fcheck->add_option("--matrix", f_matrix, "matrix JSON file")->required();
    fcheck->add_option("--mode", f_mode, "so | su")->required();
    fcheck->callback([&] { setup = [&] { job = setup_forms_check(f_form, f_matrix, f_mode); }; });

    // bend run / verify
    auto* bend_cmd = app.add_subcommand("bend", "bend a decomposed representation by a unit");
    bend_cmd->require_subcommand(1);
    auto* brun = bend_cmd->add_subcommand("run", "bend the instance and write the representation");
    std::string b_instance, b_out;
    brun->add_option("--instance", b_instance, "instance description file")->required();
    brun->add_option("--out", b_out, "output representation JSON")->required();
    brun->callback([&] { setup = [&] { job = setup_bend_run(b_instance, b_out); }; });
    auto* bverify = bend_cmd->add_subcommand("verify", "re-verify a written representation");
    std::string v_rep, v_form, v_relators;
    bverify->add_option("--rep", v_rep, "representation JSON from 'bend run'")->required();
    bverify->add_option("--form", v_form, "form description file")->required();
    bverify->add_option("--relators", v_relators, "relator words, one per line")->required();
    bverify->callback(
        [&] { setup = [&] { job = setup_bend_verify(v_rep, v_form, v_relators); }; });

    // projgeom dist / orbit
    auto* pg = app.add_subcommand("projgeom", "Hilbert metric, cusps and orbit openness");
    pg->require_subcommand(1);
    auto* pdist = pg->add_subcommand("dist", "certified Hilbert distances for point pairs");
    std::string p_domain, p_points, p_svg;
    long p_precision = 30;
    pdist->add_option("--domain", p_domain, "klein | omega0 | omega1 | segment")->required();
    pdist->add_option("--points", p_points, "points file, one per line, consecutive pairs")
        ->required();
    pdist->add_option("--precision", p_precision, "result width <= 2^-precision");
    pdist->add_option("--emit-svg", p_svg, "write a 2-D cusp section SVG (omega0/omega1)");
    pdist->callback(
        [&] { setup = [&] { job = setup_projgeom_dist(p_domain, p_points, p_precision, p_svg); }; });
    auto* porbit = pg->add_subcommand("orbit", "orbit-openness rank at a rational point");
    std::string o_point;
    long o_n = 0;
    porbit->add_option("--n", o_n, "dimension n of the model")->required();
    porbit->add_option("--point", o_point, "n+1 homogeneous rational coordinates")->required();
    porbit->callback([&] { setup = [&] { job = setup_projgeom_orbit(o_n, o_point); }; });

    // certify run
    auto* cert = app.add_subcommand("certify", "thinness certification suite");
    cert->require_subcommand(1);
    auto* crun = cert->add_subcommand("run", "run every certificate on an instance");
    std::string c_instance, c_report;
    long c_word_cap = 6;
    std::optional<long> c_prime;
    crun->add_option("--instance", c_instance, "instance description file")->required();
    crun->add_option("--prime", c_prime, "reduction prime (default: small-prime schedule)");
    crun->add_option("--word-cap", c_word_cap, "irreducibility word-length cap");
    crun->add_option("--report", c_report, "output report JSON")->required();
    crun->callback(
        [&] { setup = [&] { job = setup_certify_run(c_instance, c_prime, c_word_cap, c_report); }; });

    // pipeline run
    auto* pipe = app.add_subcommand("pipeline", "full run: units -> bend -> verify -> certify");
    pipe->require_subcommand(1);
    auto* prun = pipe->add_subcommand("run", "execute a pipeline configuration");
    std::string pl_config;
    prun->add_option("--config", pl_config, "pipeline configuration file")->required();
    prun->callback([&] {
        setup = [&] {
            auto built = std::make_shared<Pipeline>(build_pipeline(pl_config));
            job = [built]() {
                PipelineResult r = run_pipeline(*built);
                std::cout << "report written to " << built->report_path << "\n"
                          << r.report["summary"].get<std::string>() << "\n";
                return r.exit_code;
            };
        };
    });

    // selftest
    auto* st = app.add_subcommand("selftest", "run the acceptance suite");
    std::string st_filter, st_data = "data";
    st->add_option("--filter", st_filter, "run only tests whose name contains this substring");
    st->add_option("--data", st_data, "bundled data directory");
    st->callback([&] { setup = [&] { job = [&] { return run_self_tests(st_data, st_filter, std::cout); }; }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        Json j = Json::object();
        j["error"] = "ParseError";
        j["message"] = std::string(e.what());
        std::cerr << j.dump() << "\n";
        return 2;
    }

    try {
        setup();
    } catch (const Error& e) {
        print_error(e);
        return 2;
    }
    try {
        return job();
    } catch (const Error& e) {
        print_error(e);
        return 1;
    }
}
