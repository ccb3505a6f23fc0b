#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "etx/extdim.hpp"
#include "etx/functors.hpp"
#include "etx/model.hpp"
#include "oracles.hpp"

using namespace etx;

static std::shared_ptr<CategoryModel> load_shared(const std::string& rel) {
    return std::make_shared<CategoryModel>(load_category(oracle::data_path(rel)));
}

static std::vector<Subcat> all_subcats(int n) {
    std::vector<Subcat> out;
    for (int m = 0; m < (1 << n); ++m) {
        Subcat s;
        for (int i = 0; i < n; ++i)
            if (m & (1 << i)) s.insert(i);
        out.push_back(s);
    }
    return out;
}

TEST_CASE("diamond on the three-object table") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    int s2 = cat.id("S2"), p1 = cat.id("P1"), s1 = cat.id("S1");
    CHECK(diamond(cat, {s2}, {s1}) == Subcat{s2, p1, s1});
    CHECK(diamond(cat, {s2}, {p1}) == Subcat{s2, p1});
    CHECK(diamond(cat, {s1}, {s2}) == Subcat{s1, s2});  // no conflation that way round
    for (auto& u : all_subcats(3)) {
        CHECK(diamond(cat, u, {}) == u);
        CHECK(diamond(cat, {}, u) == u);
    }
}

TEST_CASE("diamond is monotone and associative on small tables") {
    for (const char* f : {"cats/mod_a2.cat", "cats/orbit_small.cat"}) {
        CAPTURE(f);
        auto cat = load_category(oracle::data_path(f));
        auto subs = all_subcats(static_cast<int>(cat.indecs.size()));
        for (auto& a : subs)
            for (auto& b : subs) {
                auto d = diamond(cat, a, b);
                for (auto& a2 : subs) {
                    if (!std::includes(a2.begin(), a2.end(), a.begin(), a.end())) continue;
                    auto d2 = diamond(cat, a2, b);
                    CHECK(std::includes(d2.begin(), d2.end(), d.begin(), d.end()));
                }
                for (auto& c : subs)
                    CHECK(diamond(cat, d, c) == diamond(cat, a, diamond(cat, b, c)));
            }
    }
}

TEST_CASE("bracket towers") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    int s2 = cat.id("S2"), p1 = cat.id("P1"), s1 = cat.id("S1");
    CHECK(bracket_n(cat, {s2, s1}, 0) == Subcat{});
    CHECK(bracket_n(cat, {s2, s1}, 1) == Subcat{s2, s1});
    CHECK(bracket_n(cat, {s2, s1}, 2) == Subcat{s2, p1, s1});
    for (int k = 1; k <= 4; ++k) CHECK(bracket_n(cat, {s2, p1}, k) == Subcat{s2, p1});
    // monotone in n
    auto subs = all_subcats(3);
    for (auto& t : subs)
        for (int k = 0; k < 4; ++k) {
            auto a = bracket_n(cat, t, k), b = bracket_n(cat, t, k + 1);
            CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        }
}

TEST_CASE("level") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    int s2 = cat.id("S2"), p1 = cat.id("P1"), s1 = cat.id("S1");
    auto two = level(cat, {s2, s1});
    CHECK(two.level == 2);
    REQUIRE(two.tower.size() >= 3);
    CHECK(two.tower[0] == Subcat{});
    CHECK(two.tower[1] == Subcat{s2, s1});
    CHECK(two.tower[2] == Subcat{s2, p1, s1});
    CHECK(level(cat, {s2, p1, s1}).level == 1);
    auto stuck = level(cat, {s2, p1});
    CHECK(!stuck.level.has_value());
    CHECK(stuck.tower.back() == Subcat{s2, p1});
}

TEST_CASE("ext_dim is zero on every shipped finite table") {
    for (const char* f : {"cats/mod_a2.cat", "cats/orbit_small.cat", "cats/orbit_rigid.cat",
                          "cats/twoterm_sub.cat", "cats/twoterm_full.cat"}) {
        CAPTURE(f);
        auto cat = load_category(oracle::data_path(f));
        auto r = ext_dim(cat);
        CHECK(dv_eq_finite(r.value, 0));
        CHECK(level(cat, r.witness).level == 1);
    }
}

TEST_CASE("ext_dim diagnostic mode with restricted generator support") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    auto r = ext_dim(cat, 2);
    CHECK(dv_eq_finite(r.value, 1));
    CHECK(r.witness == Subcat{cat.id("S2"), cat.id("S1")});
}

TEST_CASE("sum-of-generators lemma, explicit and exhaustive") {
    auto cat = load_category(oracle::data_path("cats/mod_a2.cat"));
    int s2 = cat.id("S2"), s1 = cat.id("S1");
    auto bc = check_oplus_lemma(cat, {s2}, {s1}, 1, 1);
    CHECK(bc.verdict == Verdict::Pass);
    for (const char* f : {"cats/mod_a2.cat", "cats/twoterm_sub.cat"}) {
        CAPTURE(f);
        auto c = load_category(oracle::data_path(f));
        int n = static_cast<int>(c.indecs.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 1; m <= 2; ++m)
                    for (int k = 1; k <= 2; ++k)
                        CHECK(check_oplus_lemma(c, {i}, {j}, m, k).verdict == Verdict::Pass);
    }
}

static AddFunctor identity_functor(std::shared_ptr<CategoryModel> cat) {
    AddFunctor f;
    f.name = "id";
    f.source = f.target = cat;
    for (int i = 0; i < static_cast<int>(cat->indecs.size()); ++i) f.images[i] = Obj::single(i);
    return f;
}

TEST_CASE("functor bracket and density on hand-built functors") {
    auto cat = load_shared("cats/mod_a2.cat");
    auto id = identity_functor(cat);
    CHECK(classify_exactness(id).object_exact);
    CHECK(is_quasi_dense(id));
    for (auto& t : all_subcats(3))
        for (int n = 1; n <= 3; ++n)
            CHECK(check_functor_bracket(id, t, n).verdict == Verdict::Pass);
    auto dense = check_dense_lemma(id);
    CHECK(dense.verdict == Verdict::Pass);

    // collapse-everything functor is not quasi-dense
    AddFunctor zero;
    zero.name = "zero";
    zero.source = zero.target = cat;
    for (int i = 0; i < 3; ++i) zero.images[i] = Obj::zero();
    CHECK(classify_exactness(zero).object_exact);  // all images of conflations are 0->0->0
    CHECK(!is_quasi_dense(zero));

    // swapping S2 and S1 breaks object-exactness; lemma checkers refuse it
    AddFunctor swap;
    swap.name = "swap";
    swap.source = swap.target = cat;
    swap.images[cat->id("S2")] = Obj::single(cat->id("S1"));
    swap.images[cat->id("S1")] = Obj::single(cat->id("S2"));
    swap.images[cat->id("P1")] = Obj::single(cat->id("P1"));
    CHECK(!classify_exactness(swap).object_exact);
    CHECK_THROWS_AS(check_functor_bracket(swap, {cat->id("S2")}, 2), Error);
    CHECK_THROWS_AS(check_dense_lemma(swap), Error);
}
