#include "etx/extdim.hpp"

#include <algorithm>
#include <functional>

#include "etx/functors.hpp"

namespace etx {

static Subcat all_indecs(const CategoryModel& cat) {
    Subcat s;
    for (int i = 0; i < static_cast<int>(cat.indecs.size()); ++i) s.insert(i);
    return s;
}

Subcat diamond(const CategoryModel& cat, const Subcat& u1, const Subcat& u2) {
    Subcat out = u1;
    out.insert(u2.begin(), u2.end());
    // Sums of generators qualify exactly when each generator does, so the
    // declared conflations (plus the splits, which only reproduce u1/u2)
    // decide membership.
    for (auto& b : cat.table.basics) {
        if (!supported_in(b.left, u1) || !supported_in(b.right, u2)) continue;
        for (auto& [i, k] : b.middle.mult) out.insert(i);
    }
    return out;
}

Subcat bracket_n(const CategoryModel& cat, const Subcat& t, int n) {
    if (n <= 0) return {};
    Subcat cur = t;  // <t>_1 = add t
    for (int s = 1; s < n; ++s) cur = diamond(cat, cur, t);
    return cur;
}

LevelResult level(const CategoryModel& cat, const Subcat& t) {
    LevelResult lr;
    Subcat all = all_indecs(cat);
    Subcat cur;  // <t>_0
    lr.tower.push_back(cur);
    if (cur == all) {
        lr.level = 0;
        return lr;
    }
    int n = 0;
    while (true) {
        Subcat next = n == 0 ? t : diamond(cat, cur, t);
        ++n;
        lr.tower.push_back(next);
        if (next == all) {
            lr.level = n;
            return lr;
        }
        if (next == cur) return lr;  // stabilized short of everything
        cur = next;
    }
}

ExtDimResult ext_dim(const CategoryModel& cat, int max_support) {
    Subcat all = all_indecs(cat);
    int n = static_cast<int>(cat.indecs.size());
    if (n == 0) return {DimValue::finite(0), {}};
    if (max_support < 0 || max_support >= n) {
        // The whole indec list generates in one step: ext.dim = 0.
        return {DimValue::finite(0), all};
    }
    // Diagnostic mode: best level over generators with small support.
    std::optional<int> best;
    Subcat best_t;
    std::vector<int> idx(all.begin(), all.end());
    std::vector<int> pick;
    auto consider = [&](const Subcat& t) {
        auto lv = level(cat, t);
        if (lv.level && (!best || *lv.level < *best)) {
            best = *lv.level;
            best_t = t;
        }
    };
    // All subsets of size 1..max_support.
    std::vector<int> stack;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (!stack.empty()) consider(Subcat(stack.begin(), stack.end()));
        if (static_cast<int>(stack.size()) == max_support) return;
        for (size_t i = start; i < idx.size(); ++i) {
            stack.push_back(idx[i]);
            rec(i + 1);
            stack.pop_back();
        }
    };
    rec(0);
    if (!best) return {DimValue::infinite(), {}};
    return {DimValue::finite(std::max(0, *best - 1)), best_t};
}

BoundCheck check_oplus_lemma(const CategoryModel& cat, const Subcat& t1, const Subcat& t2, int m,
                             int n) {
    Subcat lhs = diamond(cat, bracket_n(cat, t1, m), bracket_n(cat, t2, n));
    Subcat rhs = bracket_n(cat, [&] {
        Subcat u = t1;
        u.insert(t2.begin(), t2.end());
        return u;
    }(), m + n);
    BoundCheck bc;
    bc.name = "<t1>_" + std::to_string(m) + " <> <t2>_" + std::to_string(n) +
              " inside <t1+t2>_" + std::to_string(m + n);
    bc.verdict = std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()) ? Verdict::Pass
                                                                               : Verdict::Fail;
    if (bc.verdict == Verdict::Fail)
        for (int i : lhs)
            if (!rhs.count(i)) {
                bc.detail = "extra indec " + cat.indecs[i];
                break;
            }
    return bc;
}

static Subcat image_support(const AddFunctor& f, const Subcat& s) {
    Subcat out;
    for (int i : s)
        for (auto& [j, k] : f.apply_indec(i).mult) out.insert(j);
    return out;
}

BoundCheck check_functor_bracket(const AddFunctor& f, const Subcat& t, int n) {
    auto ex = classify_exactness(f);
    if (!ex.object_exact)
        fail(ErrKind::HypothesisNotMet, f.name + ": functor is not object-exact");
    Subcat lhs = image_support(f, bracket_n(*f.source, t, n));
    Subcat rhs = bracket_n(*f.target, image_support(f, t), n);
    BoundCheck bc;
    bc.name = f.name + "(<t>_" + std::to_string(n) + ") inside <" + f.name + " t>_" +
              std::to_string(n);
    bc.verdict = std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()) ? Verdict::Pass
                                                                               : Verdict::Fail;
    if (bc.verdict == Verdict::Fail)
        for (int i : lhs)
            if (!rhs.count(i)) {
                bc.detail = "extra indec " + f.target->indecs[i];
                break;
            }
    return bc;
}

bool is_quasi_dense(const AddFunctor& f) {
    Subcat img;
    for (int i = 0; i < static_cast<int>(f.source->indecs.size()); ++i)
        for (auto& [j, k] : f.apply_indec(i).mult) img.insert(j);
    return img == [&] {
        Subcat all;
        for (int i = 0; i < static_cast<int>(f.target->indecs.size()); ++i) all.insert(i);
        return all;
    }();
}

BoundCheck check_dense_lemma(const AddFunctor& f) {
    auto ex = classify_exactness(f);
    if (!ex.object_exact)
        fail(ErrKind::HypothesisNotMet, f.name + ": functor is not object-exact");
    if (!is_quasi_dense(f)) fail(ErrKind::HypothesisNotMet, f.name + ": functor is not quasi-dense");
    DimValue src = ext_dim(*f.source).value, tgt = ext_dim(*f.target).value;
    BoundCheck bc;
    bc.name = "ext.dim target <= ext.dim source via " + f.name;
    bc.detail = tgt.to_string() + " <= " + src.to_string();
    auto le = dv_le(tgt, src);
    bc.verdict = !le ? Verdict::Inconclusive : (*le ? Verdict::Pass : Verdict::Fail);
    return bc;
}

}  // namespace etx
