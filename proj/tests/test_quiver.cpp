#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <sstream>

#include "etx/homdim.hpp"
#include "etx/quiver.hpp"
#include "oracles.hpp"

using namespace etx;

static QuiverSpec quiver_from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_quiver(in, "inline");
}

static const Representation& by_label(const std::vector<Representation>& reps,
                                      const std::string& lab) {
    for (auto& r : reps)
        if (r.label == lab) return r;
    REQUIRE(false);
    return reps.front();
}

TEST_CASE("path algebra of the two-vertex quiver") {
    auto q = load_quiver(oracle::data_path("quivers/a2.quiver"));
    auto alg = build_algebra(q);
    // paths: e1, e2, a — counted by hand
    CHECK(alg.paths.size() == 3);
    CHECK(alg.dim == 3);
    auto p1 = projective_rep(alg, q.vid("1"));
    CHECK(p1.dims == std::vector<int>{1, 1});
    auto p2 = projective_rep(alg, q.vid("2"));
    CHECK(p2.dims == std::vector<int>{0, 1});
}

TEST_CASE("path algebra with a nilpotency relation") {
    auto q = load_quiver(oracle::data_path("quivers/a3nil.quiver"));
    auto alg = build_algebra(q);
    // paths: e3, e4, e5, alpha, beta, beta.alpha; the relation kills one
    CHECK(alg.paths.size() == 6);
    CHECK(alg.dim == 5);
    auto p3 = projective_rep(alg, q.vid("3"));
    CHECK(p3.dims == std::vector<int>{1, 1, 0});  // beta.alpha = 0 truncates
    auto p4 = projective_rep(alg, q.vid("4"));
    CHECK(p4.dims == std::vector<int>{0, 1, 1});
}

TEST_CASE("quiver parser rejects bad input") {
    CHECK_THROWS_AS(quiver_from_text("quiver q\nvertex 1\narrow a: 1 -> 2\n"), Error);
    CHECK_THROWS_AS(quiver_from_text("quiver q\nfield 4\nvertex 1\n"), Error);  // not prime
    // cycle
    auto cyc = quiver_from_text(
        "quiver q\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n");
    CHECK_THROWS_AS(build_algebra(cyc), Error);
    // inadmissible relation (length-1 term)
    auto bad = quiver_from_text(
        "quiver q\nvertex 1\nvertex 2\narrow a: 1 -> 2\nrelation 1*a = 0\n");
    CHECK_THROWS_AS(build_algebra(bad), Error);
    // non-parallel terms in one relation
    auto skew = quiver_from_text(
        "quiver q\nvertex 1\nvertex 2\nvertex 3\nvertex 4\narrow a: 1 -> 2\n"
        "arrow b: 2 -> 3\narrow c: 2 -> 4\nrelation 1*b.a + 1*c.a = 0\n");
    CHECK_THROWS_AS(build_algebra(skew), Error);
}

TEST_CASE("representation validation") {
    auto q = load_quiver(oracle::data_path("quivers/a3nil.quiver"));
    auto reps = load_reps(oracle::data_path("reps/a3nil_indecs.rep"), q);
    CHECK(reps.size() == 5);
    for (auto& r : reps) validate_rep(r);
    // a rep violating beta.alpha = 0
    Representation bad;
    bad.label = "bad";
    bad.q = &q;
    bad.dims = {1, 1, 1};
    Mat one(1, 1, 2);
    one.at(0, 0) = 1;
    bad.mats = {one, one};
    CHECK_THROWS_AS(validate_rep(bad), Error);
}

TEST_CASE("hom spaces of the two-vertex quiver") {
    auto q = load_quiver(oracle::data_path("quivers/a2.quiver"));
    auto reps = load_reps(oracle::data_path("reps/a2_indecs.rep"), q);
    auto& s1 = by_label(reps, "S1");
    auto& s2 = by_label(reps, "S2");
    auto& p1 = by_label(reps, "P1");
    CHECK(hom_space(p1, p1).size() == 1);
    CHECK(hom_space(p1, s1).size() == 1);
    CHECK(hom_space(s1, p1).size() == 0);
    CHECK(hom_space(s2, p1).size() == 1);
    CHECK(hom_space(s1, s2).size() == 0);
    CHECK(hom_space(rep_sum(s1, s1), s1).size() == 2);
}

TEST_CASE("extension middle terms recover the nonsplit extension") {
    auto q = load_quiver(oracle::data_path("quivers/a2.quiver"));
    auto alg = build_algebra(q);
    auto reps = load_reps(oracle::data_path("reps/a2_indecs.rep"), q);
    auto mids = ext_middle_terms(alg, by_label(reps, "S1"), by_label(reps, "S2"));
    REQUIRE(mids.size() == 1);
    CHECK(decompose(mids[0], reps) == Obj::single(2));  // P1 is reps[2]
    // no extension the other way round
    CHECK(ext_middle_terms(alg, by_label(reps, "S2"), by_label(reps, "S1")).empty());
    CHECK(ext_middle_terms(alg, by_label(reps, "P1"), by_label(reps, "S2")).empty());
}

TEST_CASE("extension class spaces that are too big are refused") {
    auto q = quiver_from_text(
        "quiver wide\nvertex 1\nvertex 2\n"
        "arrow a: 1 -> 2\narrow b: 1 -> 2\narrow c: 1 -> 2\narrow d: 1 -> 2\n");
    auto alg = build_algebra(q);
    Representation s1{"S1", &q, {1, 0}, {Mat(0, 1, 2), Mat(0, 1, 2), Mat(0, 1, 2), Mat(0, 1, 2)}};
    Representation s2{"S2", &q, {0, 1}, {Mat(1, 0, 2), Mat(1, 0, 2), Mat(1, 0, 2), Mat(1, 0, 2)}};
    CHECK_THROWS_AS(ext_middle_terms(alg, s1, s2), Error);
}

TEST_CASE("decompose splits sums into the indec list") {
    auto q = load_quiver(oracle::data_path("quivers/a3nil.quiver"));
    auto reps = load_reps(oracle::data_path("reps/a3nil_indecs.rep"), q);
    auto& s3 = by_label(reps, "S3");
    auto& p3 = by_label(reps, "P3");
    auto& p4 = by_label(reps, "P4");
    auto sum = rep_sum(rep_sum(p3, s3), rep_sum(p4, s3));
    Obj want;
    for (size_t i = 0; i < reps.size(); ++i) {
        if (reps[i].label == "S3") want.add(static_cast<int>(i), 2);
        if (reps[i].label == "P3" || reps[i].label == "P4") want.add(static_cast<int>(i), 1);
    }
    CHECK(decompose(sum, reps) == want);
    CHECK(decompose(Representation{"z", &q, {0, 0, 0}, {Mat(0, 0, 2), Mat(0, 0, 2)}}, reps) ==
          Obj::zero());
    // withholding P3 from the list leaves an unmatched piece
    std::vector<Representation> partial;
    for (auto& r : reps)
        if (r.label != "P3") partial.push_back(r);
    try {
        decompose(sum, partial);
        FAIL("expected IncompleteIndecs");
    } catch (const Error& e) {
        CHECK(e.kind == ErrKind::IncompleteIndecs);
    }
}

TEST_CASE("module category built from the two-vertex quiver") {
    auto q = load_quiver(oracle::data_path("quivers/a2.quiver"));
    auto alg = build_algebra(q);
    auto reps = load_reps(oracle::data_path("reps/a2_indecs.rep"), q);
    auto cat = build_modcat(alg, reps, 6, "mod_a2_built");
    CHECK(cat.indecs.size() == 3);
    // exactly one non-split generator: S2 -> P1 -> S1
    REQUIRE(cat.table.basics.size() == 1);
    CHECK(cat.show(cat.table.basics[0]) == "S2 -> P1 -> S1");
    CHECK(projectives(cat) == Subcat{cat.id("S2"), cat.id("P1")});
    HomDim hd(cat);
    CHECK(dv_eq_finite(hd.gl(), 1));
    // dimension vectors attached and additive on conflations
    for (auto& c : cat.table.basics) {
        std::vector<int> dl(2, 0), dm(2, 0), dr(2, 0);
        auto acc = [&](const Obj& x, std::vector<int>& d) {
            for (auto& [i, k] : x.mult)
                for (int v = 0; v < 2; ++v) d[v] += k * cat.dimvec.at(i)[v];
        };
        acc(c.left, dl);
        acc(c.middle, dm);
        acc(c.right, dr);
        for (int v = 0; v < 2; ++v) CHECK(dm[v] == dl[v] + dr[v]);
    }
}

TEST_CASE("module category of the nilpotent three-vertex quiver") {
    auto q = load_quiver(oracle::data_path("quivers/a3nil.quiver"));
    auto alg = build_algebra(q);
    auto reps = load_reps(oracle::data_path("reps/a3nil_indecs.rep"), q);
    auto cat = build_modcat(alg, reps, 6, "mod_a3nil_built");
    CHECK(cat.indecs.size() == 5);
    std::set<std::string> basics;
    for (auto& b : cat.table.basics) basics.insert(cat.show(b));
    CHECK(basics == std::set<std::string>{"P5 -> P4 -> S4", "S4 -> P3 -> S3"});
    CHECK(projectives(cat) == Subcat{cat.id("P5"), cat.id("P3"), cat.id("P4")});
    HomDim hd(cat);
    CHECK(dv_eq_finite(hd.gl(), 2));
    CHECK(dv_eq_finite(hd.pd(Obj::single(cat.id("S3"))).value, 2));
}

TEST_CASE("restriction to an extension-closed support") {
    auto q = load_quiver(oracle::data_path("quivers/a3nil.quiver"));
    auto alg = build_algebra(q);
    auto reps = load_reps(oracle::data_path("reps/a3nil_indecs.rep"), q);
    auto cat = build_modcat(alg, reps, 6, "mod_a3nil_built");
    Subcat good{cat.id("P5"), cat.id("P4"), cat.id("S4")};
    auto sub = restrict_extension_closed(cat, good, "x2_tilde");
    CHECK(sub.indecs.size() == 3);
    HomDim hd(sub);
    CHECK(dv_eq_finite(hd.gl(), 1));
    try {
        restrict_extension_closed(cat, {cat.id("P5"), cat.id("S4")}, "bad");
        FAIL("expected NotExtensionClosed");
    } catch (const Error& e) {
        CHECK(e.kind == ErrKind::NotExtensionClosed);
    }
}

TEST_CASE("gluing the two quivers along the triangular data") {
    auto data = load_triangular(oracle::data_path("tri.tri"));
    auto& g = data->glued;
    CHECK(g.vertices.size() == 5);
    CHECK(g.arrows.size() == 5);  // a, alpha, beta, eps, gam
    CHECK(g.relations.size() == 2);
    auto balg = data->alg_b;
    // hand count: 5 lazy paths + 5 arrows + the one surviving length-2
    // class (gam.alpha = a.eps); beta.alpha and beta-made composites die
    CHECK(balg.dim == 11);
    CHECK(data->indecs_b.size() == 15);
    for (auto& r : data->indecs_b) validate_rep(r);
    // the glued projectives decompose as single indecs of the list
    for (auto& v : g.vertices) {
        auto p = projective_rep(balg, g.vid(v));
        Obj d = decompose(p, data->indecs_b);
        CHECK(d.total() == 1);
    }
}

TEST_CASE("representation file parser errors") {
    auto q = load_quiver(oracle::data_path("quivers/a2.quiver"));
    auto bad = [&](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_reps(in, "bad", q), Error);
    };
    bad("rep r\ndim 9 = 1\n");                      // unknown vertex
    bad("rep r\ndim 1 = 1\nmat z = [[1]]\n");       // unknown arrow
    bad("dim 1 = 1\n");                             // dim before any rep
    bad("rep r\ndim 1 = 1\ndim 2 = 1\nmat a = [[1],[1]]\n");  // wrong shape
}
