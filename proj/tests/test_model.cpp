#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "etx/model.hpp"
#include "oracles.hpp"

using namespace etx;

static CategoryModel tiny3(std::vector<Conflation> basics, int cap) {
    CategoryModel cat;
    cat.name = "tiny3";
    cat.indecs = {"S2", "P1", "S1"};
    for (int i = 0; i < 3; ++i) cat.index_of[cat.indecs[i]] = i;
    cat.table.cap = cap;
    cat.table.basics = std::move(basics);
    close_table(cat.table, 3);
    return cat;
}

static const Conflation kBasic{Obj::single(0), Obj::single(1), Obj::single(2)};  // S2->P1->S1

TEST_CASE("obj algebra") {
    Obj a = Obj::single(0), b = Obj::single(2);
    CHECK(obj_sum(a, b).total() == 2);
    CHECK(obj_sum(a, Obj::zero()) == a);
    CHECK(obj_sum(a, a).count(0) == 2);
    CHECK(is_summand(a, obj_sum(a, b)));
    CHECK(!is_summand(obj_sum(a, a), a));
    CHECK(is_summand(Obj::zero(), a));
    CHECK(obj_diff(obj_sum(a, b), b) == a);
    CHECK_THROWS_AS(obj_diff(a, b), Error);
    // partial order
    Obj c = obj_sum(a, b);
    CHECK((is_summand(a, a)));
    CHECK(!(is_summand(a, c) && is_summand(c, a)));
    CHECK((is_summand(a, c) && is_summand(c, obj_sum(c, a)) && is_summand(a, obj_sum(c, a))));
}

TEST_CASE("add_closure and support") {
    CHECK(add_closure({obj_sum(Obj::single(0), Obj::single(2)), Obj::single(1)}) ==
          Subcat{0, 1, 2});
    CHECK(add_closure({}) == Subcat{});
    CHECK(add_closure({obj_sum(Obj::single(1), Obj::single(1))}) == Subcat{1});
    CHECK(supported_in(Obj::single(1), Subcat{1, 2}));
    CHECK(!supported_in(Obj::single(0), Subcat{1, 2}));
    CHECK(supported_in(Obj::zero(), Subcat{}));
}

TEST_CASE("close_table matches brute-force oracle") {
    for (int cap : {1, 2, 3}) {
        auto cat = tiny3({kBasic}, cap);
        auto expect = oracle::closure({kBasic}, 3, cap);
        std::set<Conflation> got(cat.table.closure.begin(), cat.table.closure.end());
        CHECK(got == expect);
        CHECK(got.size() == cat.table.closure.size());  // no duplicates
    }
}

TEST_CASE("close_table cap-2 contains the doubled generator") {
    auto cat = tiny3({kBasic}, 2);
    Conflation doubled{obj_sum(kBasic.left, kBasic.left), obj_sum(kBasic.middle, kBasic.middle),
                       obj_sum(kBasic.right, kBasic.right)};
    CHECK(cat.table.contains(kBasic));
    CHECK(cat.table.contains(doubled));
}

TEST_CASE("close_table cap-1 is splits plus the generator") {
    auto cat = tiny3({kBasic}, 1);
    std::set<Conflation> got(cat.table.closure.begin(), cat.table.closure.end());
    std::set<Conflation> expect{{Obj::zero(), Obj::zero(), Obj::zero()}, kBasic};
    for (int i = 0; i < 3; ++i) {
        Obj x = Obj::single(i);
        expect.insert({x, x, Obj::zero()});
        expect.insert({Obj::zero(), x, x});
    }
    CHECK(got == expect);
}

TEST_CASE("close_table with no basics is splits only") {
    auto cat = tiny3({}, 1);
    CHECK(cat.table.closure.size() == 7);  // 6 splits + trivial
    for (auto& c : cat.table.closure) CHECK(c.middle == obj_sum(c.left, c.right));
}

TEST_CASE("closure properties: splits, sum-closure, idempotence") {
    auto cat = tiny3({kBasic}, 3);
    auto& t = cat.table;
    // split presence for all pairs within cap
    for (auto& a : oracle::all_objects(3, t.cap))
        for (auto& c : oracle::all_objects(3, t.cap)) {
            if (obj_sum(a, c).total() > t.cap) continue;
            CHECK(t.contains({a, obj_sum(a, c), c}));
        }
    // sum-closure
    for (size_t i = 0; i < t.closure.size(); ++i)
        for (size_t j = i; j < t.closure.size(); ++j) {
            Conflation s{obj_sum(t.closure[i].left, t.closure[j].left),
                         obj_sum(t.closure[i].middle, t.closure[j].middle),
                         obj_sum(t.closure[i].right, t.closure[j].right)};
            if (s.left.total() > t.cap || s.middle.total() > t.cap || s.right.total() > t.cap)
                continue;
            CHECK(t.contains(s));
        }
    // idempotence: re-closing the closure as basics adds nothing
    ConflationTable again;
    again.cap = t.cap;
    again.basics = t.closure;
    close_table(again, 3);
    CHECK(again.closure == t.closure);
}

TEST_CASE("close_table rejects an oversized basic") {
    Conflation big{Obj::zero(), Obj{{{0, 9}}}, Obj{{{0, 9}}}};
    CHECK_THROWS_AS(tiny3({big}, 2), Error);
}

TEST_CASE("query_conflations on the shipped three-object table") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    int s2 = cat.id("S2"), p1 = cat.id("P1"), s1 = cat.id("S1");
    Obj oS1 = Obj::single(s1), oS2 = Obj::single(s2), oP1 = Obj::single(p1);

    auto ending_at_s1 = query_conflations(cat, {std::nullopt, std::nullopt, oS1});
    CHECK(std::count(ending_at_s1.begin(), ending_at_s1.end(), Conflation{oS2, oP1, oS1}) == 1);
    CHECK(std::count(ending_at_s1.begin(), ending_at_s1.end(),
                     Conflation{Obj::zero(), oS1, oS1}) == 1);
    for (auto& c : ending_at_s1) {
        // every match is a padded split or a padded copy of the generator
        bool split = c.middle == obj_sum(c.left, c.right);
        bool padded = is_summand(oS2, c.left) && is_summand(oP1, c.middle) &&
                      obj_diff(c.left, oS2) == obj_diff(c.middle, oP1);
        CHECK((split || padded));
    }

    auto right_zero = query_conflations(cat, {std::nullopt, std::nullopt, Obj::zero()});
    for (auto& c : right_zero) {
        CHECK(c.right.is_zero());
        CHECK(c.left == c.middle);
    }

    for (auto& x : oracle::all_objects(3, cat.table.cap)) {
        auto left_zero = query_conflations(cat, {Obj::zero(), std::nullopt, x});
        REQUIRE(left_zero.size() == 1);
        CHECK(left_zero[0] == Conflation{Obj::zero(), x, x});
    }

    // deterministic order
    auto once = query_conflations(cat, {std::nullopt, std::nullopt, oS1});
    CHECK(once == ending_at_s1);
    CHECK(std::is_sorted(once.begin(), once.end()));

    // oversized pattern errors
    Obj big;
    big.add(s1, cat.table.cap + 1);
    CHECK_THROWS_AS(query_conflations(cat, {std::nullopt, std::nullopt, big}), Error);
}

TEST_CASE("category text format round-trips") {
    auto cat = load_category(oracle::data_path("cats/orbit_small.cat"));
    std::ostringstream out;
    write_category(cat, out);
    std::istringstream in(out.str());
    auto back = parse_category(in, "roundtrip");
    CHECK(back.indecs == cat.indecs);
    CHECK(back.table.cap == cat.table.cap);
    CHECK(back.table.basics == cat.table.basics);
    CHECK(back.table.closure == cat.table.closure);
    CHECK(back.declared_projectives == cat.declared_projectives);
}

TEST_CASE("parser rejects malformed input") {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_category(in, "bad"), Error);
    };
    bad("cap 4\nindec a\n");                                     // missing name
    bad("category c\nindec a\nindec a\n");                       // duplicate label
    bad("category c\nindec 0\n");                                // reserved label
    bad("category c\nindec a\nconflation a -> a\n");             // two terms
    bad("category c\nindec a\nconflation a -> b -> 0\n");        // unknown indec
    bad("category c\nindec a\nprojective b\n");                  // unknown projective
    bad("category c\ncap 0\nindec a\n");                         // bad cap
    bad("category c\nindec a\nwhatever x\n");                    // unknown keyword
}

TEST_CASE("declared projectives are cross-checked at load") {
    // 'a' is declared projective but a -> 0 -> a[1]-style data contradicts it
    std::istringstream in(
        "category c\nindec a\nindec b\nprojective a\nprojective b\n"
        "conflation b -> 0 -> a\n");
    try {
        parse_category(in, "bad");
        FAIL("expected mismatch error");
    } catch (const Error& e) {
        CHECK(e.kind == ErrKind::Inconsistent);
        CHECK(std::string(e.what()).find("does not split") != std::string::npos);
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
    // underdeclared set also errors
    std::istringstream in2("category c\nindec a\nprojective a\nindec b\n");
    try {
        parse_category(in2, "bad2");
        FAIL("expected mismatch error");
    } catch (const Error& e) {
        CHECK(e.kind == ErrKind::Inconsistent);
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
}

TEST_CASE("show and parse_obj agree") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    CHECK(cat.show(Obj::zero()) == "0");
    for (auto& x : oracle::all_objects(3, 4)) CHECK(cat.parse_obj(cat.show(x)) == x);
    CHECK_THROWS_AS(cat.parse_obj("nope"), Error);
}
