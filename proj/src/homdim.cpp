#include "etx/homdim.hpp"

#include <algorithm>

namespace etx {

std::string DimValue::to_string() const {
    switch (kind) {
        case Finite: return std::to_string(n);
        case Infinite: return "inf";
        default: return ">=" + std::to_string(n);
    }
}

DimValue dv_add(const DimValue& a, int k) {
    if (a.kind == DimValue::Infinite) return a;
    DimValue r = a;
    r.n = std::max(0, a.n + k);
    return r;
}

DimValue dv_max(const DimValue& a, const DimValue& b) {
    if (a.kind == DimValue::Infinite) return a;
    if (b.kind == DimValue::Infinite) return b;
    if (a.kind == DimValue::AtLeast || b.kind == DimValue::AtLeast) {
        // max of a lower bound and anything finite stays a lower bound
        DimValue r = DimValue::at_least(std::max(a.n, b.n));
        if (a.kind == DimValue::Finite && b.kind == DimValue::AtLeast && a.n <= b.n) return b;
        if (b.kind == DimValue::Finite && a.kind == DimValue::AtLeast && b.n <= a.n) return a;
        return r;
    }
    return a.n >= b.n ? a : b;
}

std::optional<bool> dv_le(const DimValue& a, const DimValue& b) {
    if (b.kind == DimValue::Infinite) return true;
    if (a.kind == DimValue::Infinite) return false;  // b finite or AtLeast
    if (a.kind == DimValue::Finite && b.kind == DimValue::Finite) return a.n <= b.n;
    if (a.kind == DimValue::Finite && b.kind == DimValue::AtLeast)
        return a.n <= b.n ? std::optional<bool>(true) : std::nullopt;
    if (a.kind == DimValue::AtLeast && b.kind == DimValue::Finite)
        return a.n > b.n ? std::optional<bool>(false) : std::nullopt;
    return std::nullopt;
}

bool dv_eq_finite(const DimValue& a, int v) { return a.kind == DimValue::Finite && a.n == v; }

Subcat projectives(const CategoryModel& cat) {
    Subcat out;
    for (int i = 0; i < static_cast<int>(cat.indecs.size()); ++i) {
        Obj x = Obj::single(i);
        bool proj = true;
        auto it = cat.table.by_right.find(x);
        if (it != cat.table.by_right.end())
            for (size_t idx : it->second) {
                const Conflation& c = cat.table.closure[idx];
                if (c.middle != obj_sum(c.left, c.right)) {
                    proj = false;
                    break;
                }
            }
        if (proj) out.insert(i);
    }
    return out;
}

void check_declared_projectives(const CategoryModel& cat) {
    if (!cat.declared_projectives) return;
    Subcat derived = projectives(cat);
    for (int i : *cat.declared_projectives)
        if (!derived.count(i)) {
            // find the non-split conflation ending at the bad declaration
            auto it = cat.table.by_right.find(Obj::single(i));
            for (size_t idx : it->second) {
                const Conflation& c = cat.table.closure[idx];
                if (c.middle != obj_sum(c.left, c.right))
                    fail(ErrKind::Inconsistent, cat.name + ": '" + cat.indecs[i] +
                                                    "' declared projective but " + cat.show(c) +
                                                    " does not split");
            }
        }
    for (int i : derived)
        if (!cat.declared_projectives->count(i))
            fail(ErrKind::Inconsistent, cat.name + ": derived projective '" + cat.indecs[i] +
                                            "' is not declared");
}

EnoughProjReport has_enough_projectives(const CategoryModel& cat) {
    Subcat projs = projectives(cat);
    EnoughProjReport rep;
    for (int i = 0; i < static_cast<int>(cat.indecs.size()); ++i) {
        Obj x = Obj::single(i);
        bool found = false;
        auto it = cat.table.by_right.find(x);
        if (it != cat.table.by_right.end())
            for (size_t idx : it->second) {
                const Conflation& c = cat.table.closure[idx];
                if (supported_in(c.middle, projs)) {
                    rep.witness[i] = c;
                    found = true;
                    break;
                }
            }
        if (!found) {
            rep.ok = false;
            rep.failing = i;
            return rep;
        }
    }
    return rep;
}

HomDim::HomDim(const CategoryModel& cat, int bound) : cat_(&cat), bound_(bound) {
    projs_ = projectives(cat);
    auto enough = has_enough_projectives(cat);
    if (!enough.ok)
        fail(ErrKind::HypothesisNotMet,
             cat.name + ": not enough projectives, no deflation from a projective ends at '" +
                 cat.indecs[enough.failing] + "'");
    int n = static_cast<int>(cat.indecs.size());
    pd_.assign(n, DimValue::at_least(0));  // "unresolved" during iteration
    step_.assign(n, std::nullopt);
    std::vector<bool> resolved(n, false);
    std::vector<bool> bound_limited(n, false);
    for (int i : projs_) {
        pd_[i] = DimValue::finite(0);
        resolved[i] = true;
    }

    // Bellman-style fixpoint: pd C = 1 + min over conflations (K, P, C)
    // with P projective of max(pd of K's summands).  Values grow by at
    // most one per sweep, so the fixpoint closes within n+1 sweeps unless
    // the bound cuts it short.
    int sweeps = std::min(bound_, n + 1);
    for (int sweep = 0; sweep <= sweeps; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            if (resolved[i]) continue;
            Obj x = Obj::single(i);
            auto it = cat.table.by_right.find(x);
            if (it == cat.table.by_right.end()) continue;
            std::optional<int> best;
            std::optional<Conflation> best_c;
            for (size_t idx : it->second) {
                const Conflation& c = cat.table.closure[idx];
                if (!supported_in(c.middle, projs_)) continue;
                int worst = 0;
                bool all_resolved = true;
                for (auto& [j, k] : c.left.mult) {
                    if (!resolved[j]) {
                        all_resolved = false;
                        break;
                    }
                    worst = std::max(worst, pd_[j].n);
                }
                if (!all_resolved) continue;
                if (!best || worst < *best) {
                    best = worst;
                    best_c = c;
                }
            }
            if (best) {
                if (*best + 1 > bound_) {
                    bound_limited[i] = true;
                    continue;
                }
                pd_[i] = DimValue::finite(*best + 1);
                step_[i] = best_c;
                resolved[i] = true;
                changed = true;
            }
        }
        if (!changed) {
            // Stable.  Unresolved indecs the bound never touched (directly
            // or through a candidate kernel) can provably never reach a
            // projective-resolving chain of finite length; the rest only
            // exhausted the bound.
            for (int pass = 0; pass < n; ++pass) {
                bool grew = false;
                for (int i = 0; i < n; ++i) {
                    if (resolved[i] || bound_limited[i]) continue;
                    auto it = cat.table.by_right.find(Obj::single(i));
                    if (it == cat.table.by_right.end()) continue;
                    for (size_t idx : it->second) {
                        const Conflation& c = cat.table.closure[idx];
                        if (!supported_in(c.middle, projs_)) continue;
                        bool viable = true;
                        for (auto& [j, k] : c.left.mult)
                            if (!resolved[j] && !bound_limited[j]) viable = false;
                        if (viable) {
                            bound_limited[i] = true;
                            grew = true;
                            break;
                        }
                    }
                }
                if (!grew) break;
            }
            for (int i = 0; i < n; ++i)
                if (!resolved[i])
                    pd_[i] = bound_limited[i] ? DimValue::at_least(bound_) : DimValue::infinite();
            // Certificate: the unresolved indecs reachable from each one
            // through projective-middle conflations.
            Subcat unresolved;
            for (int i = 0; i < n; ++i)
                if (pd_[i].kind == DimValue::Infinite) unresolved.insert(i);
            for (int i : unresolved) {
                Subcat seen{i};
                std::vector<int> todo{i};
                while (!todo.empty()) {
                    int cur = todo.back();
                    todo.pop_back();
                    auto it2 = cat.table.by_right.find(Obj::single(cur));
                    if (it2 == cat.table.by_right.end()) continue;
                    for (size_t idx : it2->second) {
                        const Conflation& c = cat.table.closure[idx];
                        if (!supported_in(c.middle, projs_)) continue;
                        for (auto& [j, k] : c.left.mult)
                            if (unresolved.count(j) && seen.insert(j).second) todo.push_back(j);
                    }
                }
                pd_[i].cycle = seen;
            }
            return;
        }
    }
    // Bound exhausted before stabilization.
    for (int i = 0; i < n; ++i)
        if (!resolved[i]) pd_[i] = DimValue::at_least(bound_);
}

std::optional<PdCertificate> HomDim::build_cert(const Obj& x, int length) const {
    PdCertificate cert;
    Obj cur = x;
    for (int s = 0; s < length; ++s) {
        // Resolve every non-projective summand with its best conflation and
        // pad the projective summands with identity deflations; the direct
        // sum is again in the closure if it stays within cap.
        Conflation comp{Obj::zero(), Obj::zero(), cur};
        for (auto& [i, k] : cur.mult) {
            if (projs_.count(i)) {
                comp.middle.add(i, k);  // (0, P, P) pieces
                continue;
            }
            if (!step_[i]) return std::nullopt;
            const Conflation& st = *step_[i];
            for (int t = 0; t < k; ++t) {
                comp.left = obj_sum(comp.left, st.left);
                comp.middle = obj_sum(comp.middle, st.middle);
            }
        }
        if (comp.left.total() > cat_->table.cap || comp.middle.total() > cat_->table.cap)
            return std::nullopt;  // certificate does not fit in the cap
        if (!cat_->table.contains(comp)) return std::nullopt;
        cert.steps.push_back(comp);
        cur = comp.left;
    }
    if (!supported_in(cur, projs_)) return std::nullopt;
    return cert;
}

PdResult HomDim::pd(const Obj& x) const {
    if (x.total() > cat_->table.cap)
        fail(ErrKind::CapacityOverflow, cat_->name + ": pd query object exceeds cap");
    DimValue v = DimValue::finite(0);
    for (auto& [i, k] : x.mult) v = dv_max(v, pd_[i]);
    PdResult r{v, std::nullopt};
    if (v.kind == DimValue::Finite && v.n > 0) r.cert = build_cert(x, v.n);
    return r;
}

DimValue HomDim::gl() const {
    DimValue v = DimValue::finite(0);
    for (auto& d : pd_) v = dv_max(v, d);
    return v;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
        default: return "n/a";
    }
}

static BoundCheck compare(const std::string& name, const DimValue& lhs, const DimValue& rhs) {
    BoundCheck bc;
    bc.name = name;
    bc.detail = lhs.to_string() + " <= " + rhs.to_string();
    auto le = dv_le(lhs, rhs);
    bc.verdict = !le ? Verdict::Inconclusive : (*le ? Verdict::Pass : Verdict::Fail);
    return bc;
}

std::vector<BoundCheck> check_triangle_pd_bounds(const HomDim& hd, const Conflation& c) {
    DimValue a1 = hd.pd(c.left).value, a2 = hd.pd(c.middle).value, a3 = hd.pd(c.right).value;
    std::vector<BoundCheck> out;
    out.push_back(compare("pd middle <= max(pd left, pd right)", a2, dv_max(a1, a3)));
    out.push_back(compare("pd right <= max(pd left + 1, pd middle)", a3, dv_max(dv_add(a1, 1), a2)));
    out.push_back(compare("pd left <= max(pd middle, pd right - 1)", a1, dv_max(a2, dv_add(a3, -1))));
    return out;
}

}  // namespace etx
