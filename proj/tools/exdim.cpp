// exdim: homological dimension toolkit for finite conflation-table models.
//
// Commands:
//   dims <file.cat>        projectives, per-indec pd with certificates, gl
//   extdim <file.cat>      generator levels, extension dimension, lemma suites
//   audit <file.rec>       structural recollement audit
//   bounds <file.rec>      global/extension dimension bound verifiers
//   build <file.tri>       build the glued recollement (optionally restricted)
//                          and write .cat/.fun/.rec files
//   paper-suite            run every shipped example against expected.json
//
// Exit codes: 0 all verdicts pass, 1 verdict failure, 2 input error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "etx/extdim.hpp"
#include "etx/functors.hpp"
#include "etx/homdim.hpp"
#include "etx/model.hpp"
#include "etx/quiver.hpp"
#include "etx/report.hpp"
#include "etx/textio.hpp"
#include "json.hpp"

using namespace etx;

namespace {

struct Options {
    std::string format = "text";
    std::string out;
    int bound = 32;
    int cap = 0;  // 0 = keep the file's cap
};

int emit(const ReportNode& root, const Options& opt, bool ok) {
    std::ostringstream buf;
    if (opt.format == "json")
        write_json(root, buf);
    else
        write_text(root, buf);
    if (opt.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(opt.out);
        if (!f) {
            std::cerr << "cannot write '" << opt.out << "'\n";
            return 2;
        }
        f << buf.str();
    }
    return ok ? 0 : 1;
}

CategoryModel load_cat(const std::string& path, const Options& opt) {
    auto cat = load_category(path);
    if (opt.cap > 0 && opt.cap != cat.table.cap) {
        cat.table.cap = opt.cap;
        close_table(cat.table, static_cast<int>(cat.indecs.size()));
    }
    return cat;
}

void add_verdicts(ReportNode& sec, const std::vector<BoundCheck>& checks, bool& ok) {
    for (auto& bc : checks) {
        std::string v = verdict_name(bc.verdict);
        if (!bc.detail.empty()) v += " (" + bc.detail + ")";
        sec.entry(bc.name, v);
        if (bc.verdict == Verdict::Fail) ok = false;
    }
}

int cmd_dims(const std::string& path, const Options& opt) {
    auto cat = load_cat(path, opt);
    HomDim hd(cat, opt.bound);
    ReportNode root{"dims", "", {}};
    root.entry("category", cat.name);
    {
        std::string ps;
        for (int i : hd.projs()) ps += (ps.empty() ? "" : ", ") + cat.indecs[i];
        root.entry("projectives", ps.empty() ? "(none)" : ps);
    }
    auto& sec = root.section("pd");
    for (int i = 0; i < static_cast<int>(cat.indecs.size()); ++i) {
        auto r = hd.pd(Obj::single(i));
        auto& e = sec.section("pd " + cat.indecs[i] + " = " + r.value.to_string());
        if (r.cert) {
            int step = 1;
            for (auto& c : r.cert->steps)
                e.entry("step " + std::to_string(step++), cat.show(c));
        }
        if (r.value.kind == DimValue::Infinite) {
            std::string cyc;
            for (int j : r.value.cycle) cyc += (cyc.empty() ? "" : ", ") + cat.indecs[j];
            e.entry("cycle", "{" + cyc + "}");
        }
    }
    root.entry("gl", hd.gl().to_string());
    return emit(root, opt, true);
}

int cmd_extdim(const std::string& path, const Options& opt, int max_support) {
    auto cat = load_cat(path, opt);
    ReportNode root{"extdim", "", {}};
    root.entry("category", cat.name);
    bool ok = true;

    auto show_sub = [&](const Subcat& s) {
        std::string t;
        for (int i : s) t += (t.empty() ? "" : "+") + cat.indecs[i];
        return t.empty() ? std::string("0") : t;
    };

    auto r = ext_dim(cat, max_support);
    root.entry("extdim", r.value.to_string() + " witness " + show_sub(r.witness));
    auto lv = level(cat, r.witness);
    auto& tower = root.section("level " + show_sub(r.witness) + " = " +
                               (lv.level ? std::to_string(*lv.level) : std::string("inf")));
    for (size_t k = 0; k < lv.tower.size(); ++k)
        tower.entry("step " + std::to_string(k), "{" + show_sub(lv.tower[k]) + "}");

    int n = static_cast<int>(cat.indecs.size());
    auto& oplus = root.section("sum-generator inclusions (all single-indec pairs, m,n <= 2)");
    std::vector<BoundCheck> fails;
    int total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 1; m <= 2; ++m)
                for (int k = 1; k <= 2; ++k) {
                    auto bc = check_oplus_lemma(cat, {i}, {j}, m, k);
                    ++total;
                    if (bc.verdict != Verdict::Pass) fails.push_back(bc);
                }
    oplus.entry("checked", std::to_string(total));
    oplus.entry("violations", std::to_string(fails.size()));
    add_verdicts(oplus, fails, ok);
    if (!fails.empty()) ok = false;

    auto& assoc = root.section("diamond associativity (single-indec triples)");
    int bad = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (diamond(cat, diamond(cat, {i}, {j}), {k}) !=
                    diamond(cat, {i}, diamond(cat, {j}, {k})))
                    ++bad;
    assoc.entry("checked", std::to_string(n * n * n));
    assoc.entry("violations", std::to_string(bad));
    if (bad) ok = false;

    return emit(root, opt, ok);
}

int cmd_audit(const std::string& path, const Options& opt) {
    auto rec = load_recollement(path);
    auto rep = audit_recollement(rec);
    ReportNode root{"audit", "", {}};
    root.entry("recollement", rec.name);
    bool ok = true;
    auto& sec = root.section("checks");
    add_verdicts(sec, rep.checks, ok);
    root.entry("result", ok ? "pass" : "fail");
    return emit(root, opt, ok);
}

int cmd_bounds(const std::string& path, const Options& opt) {
    auto rec = load_recollement(path);
    ReportNode root{"bounds", "", {}};
    root.entry("recollement", rec.name);
    bool ok = true;
    auto& gl = root.section("global dimension bounds");
    add_verdicts(gl, verify_gl_bounds(rec, opt.bound).checks, ok);
    auto& ed = root.section("extension dimension bounds");
    if (rec.i_shriek_exact || rec.i_star_exact)
        add_verdicts(ed, verify_extdim_bounds(rec).checks, ok);
    else
        ed.entry("skipped", "no exactness flag set");
    root.entry("result", ok ? "pass" : "fail");
    return emit(root, opt, ok);
}

int cmd_build(const std::string& path, const Options& opt, const std::string& out_dir,
              const std::string& restrict_labels, const std::string& name) {
    auto data = load_triangular(path);
    auto rec = build_triangular_recollement(*data);
    std::filesystem::create_directories(out_dir);
    ReportNode root{"build", "", {}};
    if (restrict_labels.empty()) {
        write_recollement(rec, out_dir, rec.name);
        root.entry("wrote", out_dir + "/" + rec.name + ".rec");
    } else {
        Subcat s;
        std::string buf;
        std::istringstream in(restrict_labels);
        while (std::getline(in, buf, ','))
            s.insert(rec.c->id(trim(buf)));
        auto sub = restrict_recollement(rec, s, name.empty() ? "restricted" : name);
        write_recollement(sub, out_dir, sub.name);
        root.entry("wrote", out_dir + "/" + sub.name + ".rec");
    }
    return emit(root, opt, true);
}

int cmd_paper_suite(const std::string& data_dir, const Options& opt) {
    std::ifstream ein(data_dir + "/expected.json");
    if (!ein) {
        std::cerr << "cannot open '" << data_dir << "/expected.json'\n";
        return 2;
    }
    nlohmann::json expected = nlohmann::json::parse(ein);
    ReportNode root{"paper-suite", "", {}};
    bool ok = true;

    auto& hand = root.section("hand tables");
    for (auto& row : expected["hand_tables"]) {
        std::string file = row["file"];
        auto cat = load_category(data_dir + "/" + file);
        HomDim hd(cat, opt.bound);
        std::string got = hd.gl().to_string();
        std::string want = row["gl"];
        bool match = got == want;
        if (match && hd.gl().kind == DimValue::Infinite && hd.gl().cycle.empty()) match = false;
        hand.entry(cat.name + " gl", got + (match ? " (expected " : " (EXPECTED ") + want +
                                         ", " + std::string(row["source"]) + ")");
        if (!match) ok = false;
    }

    auto& tri = root.section("triangular recollement");
    auto data = load_triangular(data_dir + "/" + std::string(expected["triangular"]["file"]));
    auto rec = build_triangular_recollement(*data);
    HomDim hda(*rec.a, opt.bound), hdb(*rec.b, opt.bound), hdc(*rec.c, opt.bound);

    auto check_gl = [&](ReportNode& sec, const std::string& key, const DimValue& got,
                        const nlohmann::json& want_node) {
        std::string want = want_node;
        bool match = got.to_string() == want;
        sec.entry(key, got.to_string() + (match ? " (expected " : " (EXPECTED ") + want + ")");
        if (!match) ok = false;
    };
    check_gl(tri, "gl A", hda.gl(), expected["triangular"]["gl_a"]["value"]);
    check_gl(tri, "gl C", hdc.gl(), expected["triangular"]["gl_c"]["value"]);

    // The middle category's literature value is disputed; report the
    // computed number, flag any mismatch, and only fail when the computed
    // value escapes the proved bound.
    {
        auto& claim = expected["triangular"]["gl_b"];
        DimValue got = hdb.gl();
        std::string want = claim["value"];
        int max_allowed = claim["max_allowed"];
        bool within = got.is_finite() && got.n <= max_allowed;
        std::string note = got.to_string() == want
                               ? "matches the literature value"
                               : "DIFFERS from the literature value " + want +
                                     " (reading disputed); within proved bound <= " +
                                     std::to_string(max_allowed) + ": " + (within ? "yes" : "NO");
        tri.entry("gl B (flagged)", got.to_string() + " — " + note);
        if (!within) ok = false;
    }

    auto& bounds = root.section("bounds on the full recollement");
    add_verdicts(bounds, verify_gl_bounds(rec, opt.bound).checks, ok);
    add_verdicts(bounds, verify_extdim_bounds(rec).checks, ok);

    std::vector<std::string> tight;
    for (auto& t : expected["triangular"]["tight_2a"]) tight.push_back(t);
    for (auto& row : expected["triangular"]["restrictions"]) {
        std::string rname = row["name"];
        Subcat s;
        for (auto& lab : row["c_gens"]) s.insert(rec.c->id(lab));
        auto sub = restrict_recollement(rec, s, rname);
        auto& sec = root.section("restriction " + rname);
        HomDim shc(*sub.c, opt.bound), shb(*sub.b, opt.bound);
        check_gl(sec, "gl C-side", shc.gl(), row["gl_c"]);
        check_gl(sec, "gl B-side", shb.gl(), row["gl_b"]);
        add_verdicts(sec, verify_gl_bounds(sub, opt.bound).checks, ok);
        if (std::find(tight.begin(), tight.end(), rname) != tight.end()) {
            HomDim sha(*sub.a, opt.bound);
            bool eq = shb.gl().is_finite() && sha.gl().is_finite() && shc.gl().is_finite() &&
                      shb.gl().n == sha.gl().n + shc.gl().n + 1;
            sec.entry("tight upper bound gl B = gl A + gl C + 1", eq ? "yes" : "NO");
            if (!eq) ok = false;
        }
    }

    root.entry("result", ok ? "pass" : "fail");
    return emit(root, opt, ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homological dimension toolkit for finite conflation-table models"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", opt.out, "write the report to a file");
    app.add_option("--bound", opt.bound, "pd search bound")->check(CLI::PositiveNumber);
    app.add_option("--cap", opt.cap, "override the conflation-table cap")
        ->check(CLI::PositiveNumber);

    std::string path, out_dir = ".", restrict_labels, name, data_dir = "data";
    int max_support = -1;
    bool no_audit = false;

    auto* dims = app.add_subcommand("dims", "projectives, pd, gl of a category file");
    dims->add_option("file", path, "category file (.cat)")->required();

    auto* ext = app.add_subcommand("extdim", "extension dimension and lemma suites");
    ext->add_option("file", path, "category file (.cat)")->required();
    ext->add_option("--max-support", max_support, "restrict generator support (diagnostic)");

    auto* audit = app.add_subcommand("audit", "structural recollement audit");
    audit->add_option("file", path, "recollement file (.rec)")->required();

    auto* bounds = app.add_subcommand("bounds", "dimension bound verifiers on a recollement");
    bounds->add_option("file", path, "recollement file (.rec)")->required();

    auto* build = app.add_subcommand("build", "build the glued recollement from a .tri file");
    build->add_option("file", path, "triangular glue file (.tri)")->required();
    build->add_option("--out-dir", out_dir, "directory for the generated files");
    build->add_option("--restrict", restrict_labels,
                      "comma-separated far-side indec labels to restrict to");
    build->add_option("--name", name, "name for the restricted recollement");
    build->add_flag("--no-audit", no_audit, "accepted for symmetry; builds always audit");

    auto* suite = app.add_subcommand("paper-suite", "run all shipped examples vs expected.json");
    suite->add_option("--data", data_dir, "data directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dims) return cmd_dims(path, opt);
        if (*ext) return cmd_extdim(path, opt, max_support);
        if (*audit) return cmd_audit(path, opt);
        if (*bounds) return cmd_bounds(path, opt);
        if (*build) return cmd_build(path, opt, out_dir, restrict_labels, name);
        if (*suite) return cmd_paper_suite(data_dir, opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
