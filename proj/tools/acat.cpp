// Command-line front end: relation checking, Hochschild ranks, cup tables,
// Maurer-Cartan solving, sign ledgers, domain combinatorics, and the identity
// templates, all on a single JSON input document.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acat/domains.hpp"
#include "acat/verify.hpp"

using namespace acat;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string doc_path;
    long long trunc = -1;
    long long length = -1;
    std::string format = "text";
};

Document load(const CommonOpts& opts) {
    if (opts.trunc <= 0 && opts.length <= 0) return load_document(opts.doc_path);
    // truncation orders are baked into every coefficient, so overrides are
    // applied to the document before it is interpreted
    std::ifstream in(opts.doc_path);
    if (!in) throw MathError("cannot open document: " + opts.doc_path);
    json j = json::parse(in);
    if (opts.trunc > 0) j["trunc"] = opts.trunc;
    if (opts.length > 0) j["length"] = opts.length;
    return parse_document(j.dump());
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("doc", opts.doc_path, "input document")->required();
    cmd->add_option("--trunc", opts.trunc, "filtration truncation override");
    cmd->add_option("--length", opts.length, "length truncation override");
    cmd->add_option("--format", opts.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
}

int run_check_ainfty(const CommonOpts& opts) {
    Document doc = load(opts);
    AinfReport rep = check_ainfty(doc.category);
    if (opts.format == "json") {
        json out;
        out["pass"] = rep.pass;
        out["failures"] = json::array();
        for (const auto& f : rep.failures) {
            json jf;
            jf["length"] = f.ins.size();
            std::vector<std::string> objs;
            for (int o : f.objs) objs.push_back(doc.category.objects[o]);
            jf["objects"] = objs;
            jf["residual"] = f.residual.str();
            out["failures"].push_back(jf);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << rep.summary() << "\n";
        for (const auto& f : rep.failures)
            std::cout << "  residual at length " << f.ins.size() << ": " << f.residual.str()
                      << "\n";
    }
    return rep.pass ? 0 : 1;
}

int run_hh(const CommonOpts& opts, bool cohomology, const std::string& degrees,
           const std::string& field) {
    Document doc = load(opts);
    long long lo = 0, hi = 2;
    if (!degrees.empty()) {
        size_t dots = degrees.find("..");
        if (dots == std::string::npos) {
            lo = hi = std::stoll(degrees);
        } else {
            lo = std::stoll(degrees.substr(0, dots));
            hi = std::stoll(degrees.substr(dots + 2));
        }
    }
    CoeffField f = field == "z" ? CoeffField::Integers : CoeffField::Rationals;
    HHReport rep = cohomology ? hh_cohomology(doc.category, f, lo, hi)
                              : hh_homology(doc.category, f, lo, hi);
    if (opts.format == "json") {
        json out;
        out["kind"] = cohomology ? "cohomology" : "homology";
        out["length_trunc"] = rep.length_trunc;
        out["window_note"] = rep.window_note;
        out["groups"] = json::array();
        for (const auto& g : rep.groups) {
            json jg;
            jg["degree"] = g.degree;
            jg["rank"] = g.rank;
            jg["torsion"] = g.torsion;
            jg["valid"] = g.valid;
            out["groups"].push_back(jg);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (cohomology ? "HH^*" : "HH_*") << " with length truncation "
                  << rep.length_trunc << "\n";
        for (const auto& g : rep.groups) {
            std::cout << "  degree " << g.degree << ": rank " << g.rank;
            for (long long t : g.torsion) std::cout << " Z/" << t;
            std::cout << (g.valid ? "" : "  [outside the validity window]") << "\n";
        }
        if (!rep.window_note.empty()) std::cout << "note: " << rep.window_note << "\n";
    }
    return 0;
}

int run_cup_table(const CommonOpts& opts) {
    Document doc = load(opts);
    CohomologyTable table = cohomology_category(doc.category);
    if (opts.format == "json") {
        json out;
        out["classes"] = json::array();
        for (const auto& [key, classes] : table.classes)
            for (size_t i = 0; i < classes.size(); ++i) {
                json jc;
                jc["from"] = doc.category.objects[key.first];
                jc["to"] = doc.category.objects[key.second];
                jc["index"] = i;
                jc["degree"] = classes[i].deg.str();
                out["classes"].push_back(jc);
            }
        out["products"] = json::array();
        for (const auto& [key, expansion] : table.table) {
            json jp;
            auto [a, b, c2, i, jdx] = key;
            jp["triple"] = {doc.category.objects[a], doc.category.objects[b],
                            doc.category.objects[c2]};
            jp["left"] = i;
            jp["right"] = jdx;
            jp["value"] = json::array();
            for (const auto& [k, coeff] : expansion)
                jp["value"].push_back({{"class", k}, {"coeff", coeff.str()}});
            out["products"].push_back(jp);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& [key, classes] : table.classes) {
            std::cout << "classes " << doc.category.objects[key.first] << " -> "
                      << doc.category.objects[key.second] << ":";
            for (size_t i = 0; i < classes.size(); ++i)
                std::cout << " h" << i << "(deg " << classes[i].deg.str() << ")";
            std::cout << "\n";
        }
        for (const auto& [key, expansion] : table.table) {
            auto [a, b, c2, i, jdx] = key;
            std::cout << "h" << i << " * h" << jdx << " =";
            if (expansion.empty()) std::cout << " 0";
            for (const auto& [k, coeff] : expansion)
                std::cout << " + (" << coeff.str() << ") h" << k;
            std::cout << "\n";
        }
    }
    return 0;
}

int run_bc_solve(const CommonOpts& opts, const std::string& object) {
    Document doc = load(opts);
    int obj = object.empty() ? 0 : doc.object_id(object);
    McSolution sol = solve_mc(doc.category, obj);
    if (opts.format == "json") {
        json out;
        out["solved"] = sol.solved;
        out["integral"] = sol.integral;
        if (sol.solved) {
            json terms = json::array();
            for (const auto& [i, r] : sol.cochain.b.c)
                terms.push_back({{"basis", i}, {"coeff", r.str()}});
            out["solution"] = terms;
            out["family_dimension"] = sol.family_basis.size();
        } else {
            out["obstruction_order"] = sol.obstruction_order;
            json terms = json::array();
            for (const auto& [i, r] : sol.obstruction.c)
                terms.push_back({{"basis", i}, {"coeff", r.str()}});
            out["obstruction"] = terms;
        }
        std::cout << out.dump(2) << "\n";
    } else if (sol.solved) {
        std::cout << "bounding cochain found";
        for (const auto& [i, r] : sol.cochain.b.c)
            std::cout << "  (" << r.str() << ")*#" << i;
        if (sol.cochain.b.is_zero()) std::cout << "  b = 0";
        std::cout << "\n";
        if (!sol.family_basis.empty())
            std::cout << "affine solution family of dimension " << sol.family_basis.size()
                      << "\n";
    } else {
        std::cout << "obstructed at order " << sol.obstruction_order << ":";
        for (const auto& [i, r] : sol.obstruction.c)
            std::cout << "  (" << r.str() << ")*#" << i;
        if (!sol.integral) std::cout << "  (solvable over Q but not over Z)";
        std::cout << "\n";
    }
    return sol.solved ? 0 : 1;
}

int run_signs_ledger(const std::string& path, long long n, const std::string& format) {
    LedgerScript script = load_ledger_script(path);
    ScriptOutcome out = run_ledger_script(script, n);
    if (format == "json") {
        json j;
        j["sign"] = out.result.sign;
        j["word"] = out.result.word.str();
        j["checked"] = out.checked;
        j["pass"] = out.sign_ok && out.word_ok;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "sign " << (out.result.sign > 0 ? "+1" : "-1") << ", word "
                  << out.result.word.str() << "\n";
        if (out.checked)
            std::cout << (out.sign_ok && out.word_ok ? "expectations met"
                                                     : "EXPECTATIONS FAILED")
                      << "\n";
    }
    return (!out.checked || (out.sign_ok && out.word_ok)) ? 0 : 1;
}

int run_domains_boundary(const std::string& family, long long s, long long bulk,
                         long long stab, const std::string& format) {
    FamilyParams p;
    p.kind = family;
    p.s = s;
    p.bulk = bulk;
    p.stab = stab;
    FamilyDescriptor f = build_family(p);
    auto facets = boundary_strata(f);
    if (format == "json") {
        json out;
        out["family"] = family;
        out["dimension"] = f.dim;
        out["s_degree"] = f.s_degree.str();
        out["facets"] = json::array();
        for (const auto& fc : facets)
            out["facets"].push_back({{"description", fc.description},
                                     {"sign", fc.boundary_sign}});
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "family " << family << ", dimension " << f.dim << ", S(F) degree "
                  << f.s_degree.str() << "\n"
                  << facets.size() << " facet(s):\n";
        for (const auto& fc : facets)
            std::cout << "  " << fc.description << "\n";
    }
    return 0;
}

int run_verify(const CommonOpts& opts, const std::string& tmpl, long long n_override) {
    Document doc = load(opts);
    if (n_override >= 0 && doc.bundle) doc.bundle->n = n_override;
    VerifyReport rep;
    if (tmpl == "leibniz")
        rep = verify_leibniz_star(doc);
    else if (tmpl == "co")
        rep = verify_co_algebra(doc);
    else if (tmpl == "oc")
        rep = verify_oc_module(doc);
    else if (tmpl == "cardy")
        rep = verify_cardy(doc);
    else
        throw CLI::ValidationError("verify", "unknown template '" + tmpl + "'");
    if (opts.format == "json") {
        json out;
        out["template"] = rep.name;
        out["pass"] = rep.pass;
        out["failures"] = rep.failures;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << rep.text() << "\n";
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic checks for filtered curved A-infinity data"};
    app.require_subcommand(1);

    CommonOpts check_opts, hh_opts, cup_opts, bc_opts, verify_opts;
    std::string hh_degrees = "0..2", hh_field = "q";
    std::string bc_object;
    std::string ledger_path, domains_family = "mu";
    long long ledger_n = 0, verify_n = -1;
    long long dom_s = 3, dom_bulk = 0, dom_stab = 0;
    std::string ledger_format = "text", domains_format = "text";
    std::string verify_template;

    auto* check = app.add_subcommand("check", "relation checks");
    auto* check_ainf = check->add_subcommand("ainfty", "verify the structure relations");
    add_common(check_ainf, check_opts);

    auto* hh = app.add_subcommand("hh", "Hochschild invariants");
    auto* hh_co = hh->add_subcommand("cohomology", "HH^* ranks");
    auto* hh_ho = hh->add_subcommand("homology", "HH_* ranks");
    for (auto* cmd : {hh_co, hh_ho}) {
        add_common(cmd, hh_opts);
        cmd->add_option("--degrees", hh_degrees, "degree window a..b");
        cmd->add_option("--field", hh_field, "q|z")->check(CLI::IsMember({"q", "z"}));
    }

    auto* cup = app.add_subcommand("cup-table", "cohomology category tables");
    add_common(cup, cup_opts);

    auto* bc = app.add_subcommand("bc", "bounding cochains");
    auto* bc_solve = bc->add_subcommand("solve", "order-by-order Maurer-Cartan solver");
    add_common(bc_solve, bc_opts);
    bc_solve->add_option("--object", bc_object, "object to solve at");

    auto* signs = app.add_subcommand("signs", "torsor sign ledgers");
    auto* ledger = signs->add_subcommand("ledger", "replay a ledger script");
    ledger->add_option("script", ledger_path, "ledger script file")->required();
    ledger->add_option("--n", ledger_n, "value of the dimension symbol n");
    ledger->add_option("--format", ledger_format, "text|json");

    auto* domains = app.add_subcommand("domains", "domain combinatorics");
    auto* boundary = domains->add_subcommand("boundary", "codimension-one strata");
    boundary->add_option("--family", domains_family, "family kind")->required();
    boundary->add_option("--s", dom_s, "boundary inputs");
    boundary->add_option("--bulk", dom_bulk, "bulk marked points");
    boundary->add_option("--stab", dom_stab, "stabilizing marked points");
    boundary->add_option("--format", domains_format, "text|json");

    auto* verify = app.add_subcommand("verify", "identity templates");
    verify->add_option("template", verify_template, "leibniz|co|oc|cardy")->required();
    add_common(verify, verify_opts);
    verify->add_option("--n", verify_n, "dimension parameter override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }

    try {
        if (check_ainf->parsed()) return run_check_ainfty(check_opts);
        if (hh_co->parsed()) return run_hh(hh_opts, true, hh_degrees, hh_field);
        if (hh_ho->parsed()) return run_hh(hh_opts, false, hh_degrees, hh_field);
        if (cup->parsed()) return run_cup_table(cup_opts);
        if (bc_solve->parsed()) return run_bc_solve(bc_opts, bc_object);
        if (ledger->parsed()) return run_signs_ledger(ledger_path, ledger_n, ledger_format);
        if (boundary->parsed())
            return run_domains_boundary(domains_family, dom_s, dom_bulk, dom_stab,
                                        domains_format);
        if (verify->parsed()) return run_verify(verify_opts, verify_template, verify_n);
    } catch (const MathError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand executed\n";
    return 2;
}
