#include "etx/functors.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "etx/textio.hpp"

namespace etx {

Obj AddFunctor::apply_indec(int i) const {
    auto it = images.find(i);
    if (it == images.end())
        fail(ErrKind::Inconsistent, name + ": no image for indec " + source->indecs.at(i));
    return it->second;
}

Obj AddFunctor::apply(const Obj& x) const {
    Obj out;
    for (auto& [i, k] : x.mult) {
        Obj im = apply_indec(i);
        for (int t = 0; t < k; ++t) out = obj_sum(out, im);
    }
    return out;
}

ExactnessVerdict classify_exactness(const AddFunctor& f) {
    ExactnessVerdict v;
    for (auto& b : f.source->table.basics) {
        Conflation img{f.apply(b.left), f.apply(b.middle), f.apply(b.right)};
        int cap = f.target->table.cap;
        if (img.left.total() > cap || img.middle.total() > cap || img.right.total() > cap)
            fail(ErrKind::CapacityOverflow, f.name + ": image conflation exceeds target cap");
        if (!f.target->table.contains(img)) {
            v.object_exact = false;
            v.witness = b;
            v.detail = f.source->show(b) + " maps to " + f.target->show(img) +
                       ", not in the target table";
            return v;
        }
    }
    return v;
}

std::vector<const AddFunctor*> RecollementModel::functors() const {
    return {&i_ustar, &i_star, &i_shriek, &j_shriek, &j_ustar, &j_star};
}

bool AuditReport::all_pass() const {
    for (auto& c : checks)
        if (c.verdict == Verdict::Fail || c.verdict == Verdict::Inconclusive) return false;
    return true;
}

static Subcat all_of(const CategoryModel& cat) {
    Subcat s;
    for (int i = 0; i < static_cast<int>(cat.indecs.size()); ++i) s.insert(i);
    return s;
}

static void add_check(AuditReport& rep, const std::string& name, bool ok,
                      const std::string& detail = "") {
    rep.checks.push_back({name, ok ? Verdict::Pass : Verdict::Fail, detail});
}

AuditReport audit_recollement(const RecollementModel& r) {
    AuditReport rep;

    // Wiring: each functor between the right categories, total on indecs.
    auto wired = [&](const AddFunctor& f, const CategoryModel* s, const CategoryModel* t) {
        if (f.source.get() != s || f.target.get() != t) return false;
        for (int i = 0; i < static_cast<int>(s->indecs.size()); ++i)
            if (!f.images.count(i)) return false;
        return true;
    };
    bool w = wired(r.i_ustar, r.b.get(), r.a.get()) && wired(r.i_star, r.a.get(), r.b.get()) &&
             wired(r.i_shriek, r.b.get(), r.a.get()) && wired(r.j_shriek, r.c.get(), r.b.get()) &&
             wired(r.j_ustar, r.b.get(), r.c.get()) && wired(r.j_star, r.c.get(), r.b.get());
    add_check(rep, "functor wiring", w);
    if (!w) return rep;  // everything else would throw

    // Object-exactness of the two always-exact functors and flag consistency.
    auto ex_check = [&](const AddFunctor& f, const std::string& label) {
        auto v = classify_exactness(f);
        add_check(rep, label + " object-exact", v.object_exact, v.detail);
        return v.object_exact;
    };
    ex_check(r.i_star, "i_*");
    ex_check(r.j_ustar, "j^*");
    if (r.i_shriek_exact) {
        auto v = classify_exactness(r.i_shriek);
        add_check(rep, "flag i_shriek_exact consistent", v.object_exact, v.detail);
    }
    if (r.i_star_exact) {
        auto v = classify_exactness(r.i_ustar);
        add_check(rep, "flag i_star_exact consistent", v.object_exact, v.detail);
    }

    // Unit/counit isomorphisms on indecs.
    bool ok = true;
    std::string det;
    for (int a = 0; ok && a < static_cast<int>(r.a->indecs.size()); ++a) {
        Obj ia = r.i_star.apply_indec(a);
        if (r.i_ustar.apply(ia) != Obj::single(a) || r.i_shriek.apply(ia) != Obj::single(a)) {
            ok = false;
            det = "at A-indec " + r.a->indecs[a];
        }
    }
    add_check(rep, "i^* i_* = Id and i^! i_* = Id on objects", ok, det);
    ok = true;
    det.clear();
    for (int c = 0; ok && c < static_cast<int>(r.c->indecs.size()); ++c) {
        if (r.j_ustar.apply(r.j_shriek.apply_indec(c)) != Obj::single(c) ||
            r.j_ustar.apply(r.j_star.apply_indec(c)) != Obj::single(c)) {
            ok = false;
            det = "at C-indec " + r.c->indecs[c];
        }
    }
    add_check(rep, "j^* j_! = Id and j^* j_* = Id on objects", ok, det);

    // Vanishing composites.
    ok = true;
    det.clear();
    for (int c = 0; ok && c < static_cast<int>(r.c->indecs.size()); ++c) {
        if (!r.i_ustar.apply(r.j_shriek.apply_indec(c)).is_zero() ||
            !r.i_shriek.apply(r.j_star.apply_indec(c)).is_zero()) {
            ok = false;
            det = "at C-indec " + r.c->indecs[c];
        }
    }
    add_check(rep, "i^* j_! = 0 and i^! j_* = 0", ok, det);

    // (R2): kernel support of j^* equals the support of the i_* images.
    Subcat i_img;
    for (int a = 0; a < static_cast<int>(r.a->indecs.size()); ++a)
        for (auto& [j, k] : r.i_star.apply_indec(a).mult) i_img.insert(j);
    Subcat ker;
    for (int b = 0; b < static_cast<int>(r.b->indecs.size()); ++b)
        if (r.j_ustar.apply_indec(b).is_zero()) ker.insert(b);
    ok = (i_img == ker);
    det.clear();
    if (!ok)
        for (int b : ker)
            if (!i_img.count(b)) det = "B-indec " + r.b->indecs[b] + " killed but not an image";
    if (!ok && det.empty())
        for (int b : i_img)
            if (!ker.count(b)) det = "image B-indec " + r.b->indecs[b] + " not killed by j^*";
    add_check(rep, "(R2) Im i_* = Ker j^* as supports", ok, det);

    // Projective preservation (object criterion on each side).
    Subcat pa = projectives(*r.a), pb = projectives(*r.b), pc = projectives(*r.c);
    auto preserves = [&](const AddFunctor& f, const Subcat& sp, const Subcat& tp,
                         const std::string& label) {
        bool good = true;
        std::string d;
        for (int i : sp)
            if (!supported_in(f.apply_indec(i), tp)) {
                good = false;
                d = "projective " + f.source->indecs[i] + " maps to " +
                    f.target->show(f.apply_indec(i));
                break;
            }
        add_check(rep, label + " preserves projectives", good, d);
    };
    preserves(r.i_ustar, pb, pa, "i^*");
    preserves(r.j_shriek, pc, pb, "j_!");
    if (r.i_shriek_exact) {
        preserves(r.i_star, pa, pb, "i_* (i^! exact)");
        preserves(r.j_ustar, pb, pc, "j^* (i^! exact)");
    }

    // (R4)/(R5): two-conflation factorizations through each B-indec.
    ok = true;
    det.clear();
    for (int b = 0; ok && b < static_cast<int>(r.b->indecs.size()); ++b) {
        Obj bb = Obj::single(b);
        Obj head = r.i_star.apply(r.i_shriek.apply_indec(b));
        Obj tail = r.j_star.apply(r.j_ustar.apply_indec(b));
        bool found = false;
        for (auto& c1 : query_conflations(*r.b, {head, bb, std::nullopt})) {
            for (auto& c2 : query_conflations(*r.b, {c1.right, tail, std::nullopt}))
                if (supported_in(c2.right, i_img)) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) {
            ok = false;
            det = "no factorization at B-indec " + r.b->indecs[b];
        }
    }
    add_check(rep, "(R4) left exact 4-term pattern", ok, det);

    ok = true;
    det.clear();
    for (int b = 0; ok && b < static_cast<int>(r.b->indecs.size()); ++b) {
        Obj bb = Obj::single(b);
        Obj head = r.j_shriek.apply(r.j_ustar.apply_indec(b));
        Obj tail = r.i_star.apply(r.i_ustar.apply_indec(b));
        bool found = false;
        for (auto& c2 : query_conflations(*r.b, {std::nullopt, bb, tail})) {
            for (auto& c1 : query_conflations(*r.b, {std::nullopt, head, c2.left}))
                if (supported_in(c1.left, i_img)) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) {
            ok = false;
            det = "no factorization at B-indec " + r.b->indecs[b];
        }
    }
    add_check(rep, "(R5) right exact 4-term pattern", ok, det);

    // Canonical conflations through B when a flag grants extra exactness.
    if (r.i_shriek_exact) {
        ok = true;
        det.clear();
        for (int b = 0; ok && b < static_cast<int>(r.b->indecs.size()); ++b) {
            Conflation want{r.i_star.apply(r.i_shriek.apply_indec(b)), Obj::single(b),
                            r.j_star.apply(r.j_ustar.apply_indec(b))};
            if (!r.b->table.contains(want)) {
                ok = false;
                det = "missing " + r.b->show(want);
            }
        }
        add_check(rep, "conflation i_*i^!B -> B -> j_*j^*B (i^! exact)", ok, det);
    }
    if (r.i_star_exact) {
        ok = true;
        det.clear();
        for (int b = 0; ok && b < static_cast<int>(r.b->indecs.size()); ++b) {
            Conflation want{r.j_shriek.apply(r.j_ustar.apply_indec(b)), Obj::single(b),
                            r.i_star.apply(r.i_ustar.apply_indec(b))};
            if (!r.b->table.contains(want)) {
                ok = false;
                det = "missing " + r.b->show(want);
            }
        }
        add_check(rep, "conflation j_!j^*B -> B -> i_*i^*B (i^* exact)", ok, det);
    }

    return rep;
}

DimValue relative_gl(const RecollementModel& r, int bound) {
    HomDim hd(*r.b, bound);
    DimValue v = DimValue::finite(0);
    for (int a = 0; a < static_cast<int>(r.a->indecs.size()); ++a)
        v = dv_max(v, hd.pd(r.i_star.apply_indec(a)).value);
    return v;
}

static DimValue dv_plus(const DimValue& a, const DimValue& b) {
    if (a.kind == DimValue::Infinite) return a;
    if (b.kind == DimValue::Infinite) return b;
    DimValue r;
    r.kind = (a.kind == DimValue::AtLeast || b.kind == DimValue::AtLeast) ? DimValue::AtLeast
                                                                         : DimValue::Finite;
    r.n = a.n + b.n;
    return r;
}

static BoundCheck le_check(const std::string& name, const DimValue& lhs, const DimValue& rhs) {
    BoundCheck bc;
    bc.name = name;
    bc.detail = lhs.to_string() + " <= " + rhs.to_string();
    auto le = dv_le(lhs, rhs);
    bc.verdict = !le ? Verdict::Inconclusive : (*le ? Verdict::Pass : Verdict::Fail);
    if (bc.verdict == Verdict::Pass && lhs.kind == DimValue::Finite &&
        rhs.kind == DimValue::Finite && lhs.n == rhs.n)
        bc.detail += " (equality)";
    return bc;
}

AuditReport verify_gl_bounds(const RecollementModel& r, int bound) {
    AuditReport rep;
    HomDim ha(*r.a, bound), hb(*r.b, bound), hc(*r.c, bound);
    DimValue gla = ha.gl(), glb = hb.gl(), glc = hc.gl();
    DimValue glab = relative_gl(r, bound);

    DimValue sup_i = DimValue::finite(0);  // sup pd_B i_*(P), P projective in A
    for (int p : ha.projs()) sup_i = dv_max(sup_i, hb.pd(r.i_star.apply_indec(p)).value);
    DimValue sup_j = DimValue::finite(0);  // sup pd_C j^*(P), P projective in B
    for (int p : hb.projs()) sup_j = dv_max(sup_j, hc.pd(r.j_ustar.apply_indec(p)).value);

    rep.checks.push_back({"gl A = " + gla.to_string() + ", gl B = " + glb.to_string() +
                              ", gl C = " + glc.to_string() + ", gl_A B = " + glab.to_string(),
                          Verdict::Pass, ""});
    rep.checks.push_back(le_check("(1)(a) gl B <= gl_A B + gl C + 1", glb,
                                  dv_plus(dv_plus(glab, glc), DimValue::finite(1))));
    rep.checks.push_back(le_check("(1)(b) gl_A B <= gl A + sup pd_B i_*(P)", glab,
                                  dv_plus(gla, sup_i)));
    rep.checks.push_back(le_check("(1)(c) gl B <= gl A + sup pd_B i_*(P) + gl C + 1", glb,
                                  dv_plus(dv_plus(dv_plus(gla, sup_i), glc), DimValue::finite(1))));
    rep.checks.push_back(le_check("(1)(d) gl C <= gl B + sup pd_C j^*(P)", glc,
                                  dv_plus(glb, sup_j)));
    if (r.i_shriek_exact) {
        rep.checks.push_back(le_check("(2)(a) gl B <= gl A + gl C + 1 (i^! exact)", glb,
                                      dv_plus(dv_plus(gla, glc), DimValue::finite(1))));
        rep.checks.push_back(le_check("(2)(b) gl C <= gl B (i^! exact)", glc, glb));
    } else {
        rep.checks.push_back({"(2) skipped: i^! not flagged exact", Verdict::NotApplicable, ""});
    }

    // pd_B j_!(C) <= pd_C C + gl_A B + 1, per C-indec.
    for (int c = 0; c < static_cast<int>(r.c->indecs.size()); ++c) {
        DimValue lhs = hb.pd(r.j_shriek.apply_indec(c)).value;
        DimValue rhs = dv_plus(dv_plus(hc.pd(Obj::single(c)).value, glab), DimValue::finite(1));
        rep.checks.push_back(
            le_check("pd_B j_!(" + r.c->indecs[c] + ") <= pd_C + gl_A B + 1", lhs, rhs));
    }

    // Finiteness transfer statements.
    auto fin = [](const DimValue& d) -> std::optional<bool> {
        if (d.kind == DimValue::AtLeast) return std::nullopt;
        return d.kind == DimValue::Finite;
    };
    auto iff_check = [&](const std::string& name, std::optional<bool> hyp, std::optional<bool> l,
                         std::optional<bool> rgt) {
        BoundCheck bc;
        bc.name = name;
        if (!hyp || !l || !rgt)
            bc.verdict = Verdict::Inconclusive;
        else if (!*hyp)
            bc.verdict = Verdict::NotApplicable;
        else
            bc.verdict = (*l == *rgt) ? Verdict::Pass : Verdict::Fail;
        rep.checks.push_back(bc);
    };
    iff_check("gl C finite => (gl_A B finite iff gl B finite)", fin(glc), fin(glab), fin(glb));
    iff_check("gl A finite => (gl_A B finite iff sup pd_B i_*(P) finite)", fin(gla), fin(glab),
              fin(sup_i));
    iff_check("gl B finite => (gl C finite iff sup pd_C j^*(P) finite)", fin(glb), fin(glc),
              fin(sup_j));
    return rep;
}

AuditReport verify_extdim_bounds(const RecollementModel& r) {
    AuditReport rep;
    if (!r.i_shriek_exact && !r.i_star_exact) {
        rep.checks.push_back(
            {"skipped: needs i^! or i^* flagged exact", Verdict::NotApplicable, ""});
        return rep;
    }
    auto ea = ext_dim(*r.a), eb = ext_dim(*r.b), ec = ext_dim(*r.c);
    rep.checks.push_back({"ext.dim A = " + ea.value.to_string() + " (generator " +
                              r.a->show([&] {
                                  Obj o;
                                  for (int i : ea.witness) o.add(i);
                                  return o;
                              }()) +
                              "), ext.dim B = " + eb.value.to_string() +
                              ", ext.dim C = " + ec.value.to_string(),
                          Verdict::Pass, ""});
    rep.checks.push_back(
        le_check("max(ext.dim A, ext.dim C) <= ext.dim B", dv_max(ea.value, ec.value), eb.value));
    rep.checks.push_back(le_check("ext.dim B <= ext.dim A + ext.dim C + 1", eb.value,
                                  dv_plus(dv_plus(ea.value, ec.value), DimValue::finite(1))));
    return rep;
}

AddFunctor parse_functor(std::istream& in, const std::string& src_name,
                         std::shared_ptr<const CategoryModel> source,
                         std::shared_ptr<const CategoryModel> target) {
    AddFunctor f;
    f.source = std::move(source);
    f.target = std::move(target);
    std::string declared_src, declared_tgt;
    for (auto& ln : read_lines(in, src_name)) {
        if (ln.keyword == "functor") {
            f.name = ln.rest;
        } else if (ln.keyword == "source") {
            declared_src = ln.rest;
        } else if (ln.keyword == "target") {
            declared_tgt = ln.rest;
        } else if (ln.keyword == "map") {
            auto parts = split_on(ln.rest, "->");
            if (parts.size() != 2) parse_fail(src_name, ln.no, "map needs '<label> -> <obj|0>'");
            int i = -1;
            try {
                i = f.source->id(parts[0]);
            } catch (const Error& e) {
                parse_fail(src_name, ln.no, e.what());
            }
            if (f.images.count(i)) parse_fail(src_name, ln.no, "duplicate map for " + parts[0]);
            try {
                f.images[i] = f.target->parse_obj(parts[1]);
            } catch (const Error& e) {
                parse_fail(src_name, ln.no, e.what());
            }
        } else {
            parse_fail(src_name, ln.no, "unknown keyword '" + ln.keyword + "'");
        }
    }
    if (f.name.empty()) fail(ErrKind::Parse, src_name + ": missing 'functor' line");
    if (!declared_src.empty() && declared_src != f.source->name)
        fail(ErrKind::Parse, src_name + ": source mismatch (" + declared_src + " vs " +
                                 f.source->name + ")");
    if (!declared_tgt.empty() && declared_tgt != f.target->name)
        fail(ErrKind::Parse, src_name + ": target mismatch (" + declared_tgt + " vs " +
                                 f.target->name + ")");
    for (int i = 0; i < static_cast<int>(f.source->indecs.size()); ++i)
        if (!f.images.count(i))
            fail(ErrKind::Parse, src_name + ": no map line for indec " + f.source->indecs[i]);
    return f;
}

void write_functor(const AddFunctor& f, std::ostream& out) {
    out << "functor " << f.name << "\n";
    out << "source " << f.source->name << "\n";
    out << "target " << f.target->name << "\n";
    for (int i = 0; i < static_cast<int>(f.source->indecs.size()); ++i)
        out << "map " << f.source->indecs[i] << " -> " << f.target->show(f.images.at(i)) << "\n";
}

RecollementModel load_recollement(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream in(path);
    if (!in) fail(ErrKind::Parse, "cannot open '" + path + "'");
    fs::path dir = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path q(p);
        return (q.is_absolute() ? q : dir / q).string();
    };

    RecollementModel r;
    std::map<std::string, std::string> functor_paths;
    for (auto& ln : read_lines(in, path)) {
        if (ln.keyword == "recollement") {
            r.name = ln.rest;
        } else if (ln.keyword == "cats") {
            auto parts = split_ws(ln.rest);
            if (parts.size() != 3) parse_fail(path, ln.no, "cats needs three paths (A B C)");
            r.a = std::make_shared<CategoryModel>(load_category(resolve(parts[0])));
            r.b = std::make_shared<CategoryModel>(load_category(resolve(parts[1])));
            r.c = std::make_shared<CategoryModel>(load_category(resolve(parts[2])));
        } else if (ln.keyword == "functor") {
            auto parts = split_on(ln.rest, "=");
            if (parts.size() != 2) parse_fail(path, ln.no, "functor needs '<slot> = <path>'");
            functor_paths[parts[0]] = parts[1];
        } else if (ln.keyword == "flag") {
            auto parts = split_on(ln.rest, "=");
            if (parts.size() != 2 || (parts[1] != "true" && parts[1] != "false"))
                parse_fail(path, ln.no, "flag needs '<name> = true|false'");
            bool val = parts[1] == "true";
            if (parts[0] == "i_shriek_exact")
                r.i_shriek_exact = val;
            else if (parts[0] == "i_star_exact")
                r.i_star_exact = val;
            else
                parse_fail(path, ln.no, "unknown flag '" + parts[0] + "'");
        } else {
            parse_fail(path, ln.no, "unknown keyword '" + ln.keyword + "'");
        }
    }
    if (r.name.empty()) fail(ErrKind::Parse, path + ": missing 'recollement' line");
    if (!r.a) fail(ErrKind::Parse, path + ": missing 'cats' line");

    auto load_fun = [&](const std::string& slot, std::shared_ptr<const CategoryModel> s,
                        std::shared_ptr<const CategoryModel> t) {
        auto it = functor_paths.find(slot);
        if (it == functor_paths.end())
            fail(ErrKind::Parse, path + ": missing functor slot '" + slot + "'");
        std::ifstream fin(resolve(it->second));
        if (!fin) fail(ErrKind::Parse, "cannot open '" + resolve(it->second) + "'");
        return parse_functor(fin, resolve(it->second), std::move(s), std::move(t));
    };
    r.i_ustar = load_fun("i_ustar", r.b, r.a);
    r.i_star = load_fun("i_star", r.a, r.b);
    r.i_shriek = load_fun("i_shriek", r.b, r.a);
    r.j_shriek = load_fun("j_shriek", r.c, r.b);
    r.j_ustar = load_fun("j_ustar", r.b, r.c);
    r.j_star = load_fun("j_star", r.c, r.b);
    return r;
}

void write_recollement(const RecollementModel& r, const std::string& dir,
                       const std::string& stem) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto emit = [&](const std::string& fname, auto&& writer) {
        std::ofstream out(fs::path(dir) / fname);
        if (!out) fail(ErrKind::Parse, "cannot write '" + fname + "' in " + dir);
        writer(out);
    };
    emit(stem + "_a.cat", [&](std::ostream& o) { write_category(*r.a, o); });
    emit(stem + "_b.cat", [&](std::ostream& o) { write_category(*r.b, o); });
    emit(stem + "_c.cat", [&](std::ostream& o) { write_category(*r.c, o); });
    const char* slots[6] = {"i_ustar", "i_star", "i_shriek", "j_shriek", "j_ustar", "j_star"};
    const AddFunctor* funs[6] = {&r.i_ustar, &r.i_star, &r.i_shriek,
                                 &r.j_shriek, &r.j_ustar, &r.j_star};
    for (int k = 0; k < 6; ++k)
        emit(stem + "_" + slots[k] + ".fun",
             [&](std::ostream& o) { write_functor(*funs[k], o); });
    emit(stem + ".rec", [&](std::ostream& o) {
        o << "recollement " << r.name << "\n";
        o << "cats " << stem << "_a.cat " << stem << "_b.cat " << stem << "_c.cat\n";
        for (int k = 0; k < 6; ++k)
            o << "functor " << slots[k] << " = " << stem << "_" << slots[k] << ".fun\n";
        o << "flag i_shriek_exact = " << (r.i_shriek_exact ? "true" : "false") << "\n";
        o << "flag i_star_exact = " << (r.i_star_exact ? "true" : "false") << "\n";
    });
}

}  // namespace etx
