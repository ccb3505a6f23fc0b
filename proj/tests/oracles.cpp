#include "oracles.hpp"

#include <algorithm>
#include <functional>

using namespace etx;

namespace oracle {

std::string data_path(const std::string& rel) { return std::string(ETX_DATA_DIR) + "/" + rel; }

std::vector<Obj> all_objects(int n, int cap) {
    std::vector<Obj> out;
    Obj cur;
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            if (k > 0) cur.add(i, 1);
            rec(i + 1, left - k);
        }
        if (cur.count(i)) cur.mult.erase(i);
    };
    rec(0, cap);
    return out;
}

std::set<Conflation> closure(const std::vector<Conflation>& basics, int n_indecs, int cap) {
    // generators: per-indec splits (X,X,0), (0,X,X) plus the basics
    std::vector<Conflation> gens;
    for (int i = 0; i < n_indecs; ++i) {
        Obj x = Obj::single(i);
        gens.push_back({x, x, Obj::zero()});
        gens.push_back({Obj::zero(), x, x});
    }
    for (auto& b : basics) gens.push_back(b);

    std::set<Conflation> out;
    Conflation acc{Obj::zero(), Obj::zero(), Obj::zero()};
    auto fits = [&](const Conflation& c) {
        return c.left.total() <= cap && c.middle.total() <= cap && c.right.total() <= cap;
    };
    std::function<void(size_t)> rec = [&](size_t g) {
        if (g == gens.size()) {
            out.insert(acc);
            return;
        }
        Conflation saved = acc;
        for (int k = 0;; ++k) {
            if (!fits(acc)) break;
            rec(g + 1);
            acc.left = obj_sum(acc.left, gens[g].left);
            acc.middle = obj_sum(acc.middle, gens[g].middle);
            acc.right = obj_sum(acc.right, gens[g].right);
            (void)k;
        }
        acc = saved;
    };
    rec(0);
    return out;
}

// Indecs that sit at the right end of some non-split closure conflation.
// The minimal witness for a non-projective indec is a generator, and
// generators always fit the table, so this classification does not suffer
// from cap truncation the way whole-object right-term scans do.
static std::set<int> nonproj_indecs(const CategoryModel& cat) {
    std::set<int> out;
    for (auto& c : cat.table.closure)
        if (c.middle != obj_sum(c.left, c.right) && c.right.total() == 1)
            out.insert(c.right.mult.begin()->first);
    return out;
}

bool is_projective_obj(const CategoryModel& cat, const Obj& x) {
    auto np = nonproj_indecs(cat);
    for (auto& [i, k] : x.mult)
        if (np.count(i)) return false;
    return true;
}

std::map<Obj, int> pd_all_objects(const CategoryModel& cat, int sweeps) {
    int n = static_cast<int>(cat.indecs.size());
    std::set<int> np = nonproj_indecs(cat);
    auto proj_obj = [&](const Obj& x) {
        for (auto& [i, k] : x.mult)
            if (np.count(i)) return false;
        return true;
    };
    std::map<Obj, int> val;
    std::vector<Obj> objs = all_objects(n, cat.table.cap);
    for (auto& x : objs)
        if (proj_obj(x)) val[x] = 0;
    // candidate steps per object: closure conflations (K, P, X) with P a
    // projective object
    std::map<Obj, std::vector<const Conflation*>> cands;
    for (auto& c : cat.table.closure)
        if (proj_obj(c.middle)) cands[c.right].push_back(&c);
    for (int s = 0; s < sweeps; ++s) {
        bool changed = false;
        for (auto& x : objs) {
            if (val.count(x) && val[x] == 0) continue;
            int best = -1;
            for (auto* c : cands[x]) {
                auto it = val.find(c->left);
                if (it == val.end()) continue;
                int v = it->second + 1;
                if (best < 0 || v < best) best = v;
            }
            if (best >= 0 && (!val.count(x) || val[x] > best)) {
                val[x] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::map<Obj, int> out;
    for (auto& x : objs) out[x] = val.count(x) ? val[x] : -1;
    return out;
}

int gl_brute(const CategoryModel& cat, int sweeps) {
    auto all = pd_all_objects(cat, sweeps);
    int sup = 0;
    for (auto& [x, v] : all) {
        // near the cap resolutions can overflow the table and leave finite
        // values unresolved, so take the sup over the padded-safe domain
        // (pd is a sup of summand values, so it is attained on singles,
        // which always lie in this domain)
        if (2 * x.total() > cat.table.cap) continue;
        if (v < 0) return -1;
        sup = std::max(sup, v);
    }
    return sup;
}

}  // namespace oracle
