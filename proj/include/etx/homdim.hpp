#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etx/model.hpp"

namespace etx {

// Extended-natural dimension values.  AtLeast(n) is only produced when a
// search bound runs out before the fixpoint closes; Infinite carries the
// set of indecs whose resolutions feed into each other forever.
struct DimValue {
    enum Kind { Finite, Infinite, AtLeast } kind = Finite;
    int n = 0;             // Finite value or AtLeast bound
    Subcat cycle;          // Infinite certificate

    static DimValue finite(int v) { return {Finite, v, {}}; }
    static DimValue infinite(Subcat c = {}) { return {Infinite, 0, std::move(c)}; }
    static DimValue at_least(int v) { return {AtLeast, v, {}}; }

    bool is_finite() const { return kind == Finite; }
    std::string to_string() const;  // "3", "inf", ">=32"
};

DimValue dv_add(const DimValue& a, int k);           // value + k (inf absorbs)
DimValue dv_max(const DimValue& a, const DimValue& b);
// a <= b in the extended order; nullopt when AtLeast makes it undecidable.
std::optional<bool> dv_le(const DimValue& a, const DimValue& b);
bool dv_eq_finite(const DimValue& a, int v);

// One resolution step: a conflation (kernel, projective middle, resolved).
struct PdCertificate {
    std::vector<Conflation> steps;  // steps[i] resolves the previous kernel
};

// Indecs P such that every table conflation ending at exactly P splits.
Subcat projectives(const CategoryModel& cat);

struct EnoughProjReport {
    bool ok = true;
    std::map<int, Conflation> witness;  // indec -> deflation from a projective
    int failing = -1;
};
EnoughProjReport has_enough_projectives(const CategoryModel& cat);

// Errors (Inconsistent) when declared projectives disagree with the
// derived set, naming a witness conflation resp. the missing label.
void check_declared_projectives(const CategoryModel& cat);

struct PdResult {
    DimValue value;
    // Present for finite values when a within-cap resolution chain exists.
    std::optional<PdCertificate> cert;
};

// Per-category projective-dimension engine (memoizes the indec fixpoint).
class HomDim {
public:
    explicit HomDim(const CategoryModel& cat, int bound = 32);

    const CategoryModel& cat() const { return *cat_; }
    const Subcat& projs() const { return projs_; }
    const DimValue& pd_indec(int i) const { return pd_[i]; }

    PdResult pd(const Obj& x) const;
    DimValue gl() const;

private:
    const CategoryModel* cat_;
    int bound_;
    Subcat projs_;
    std::vector<DimValue> pd_;
    // Best resolving conflation per indec (finite, non-projective case).
    std::vector<std::optional<Conflation>> step_;

    std::optional<PdCertificate> build_cert(const Obj& x, int length) const;
};

enum class Verdict { Pass, Fail, Inconclusive, NotApplicable };
std::string verdict_name(Verdict v);

struct BoundCheck {
    std::string name;
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

// The three projective-dimension comparisons along a conflation
// A1 >--> A2 -->> A3:
//   pd A2 <= max(pd A1, pd A3)
//   pd A3 <= max(pd A1 + 1, pd A2)
//   pd A1 <= max(pd A2, pd A3 - 1)
std::vector<BoundCheck> check_triangle_pd_bounds(const HomDim& hd, const Conflation& c);

}  // namespace etx
