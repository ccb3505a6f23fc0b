#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etx/extdim.hpp"
#include "etx/homdim.hpp"
#include "etx/model.hpp"

namespace etx {

// An additive functor recorded by its action on indecs; extended to
// objects additively.
struct AddFunctor {
    std::string name;
    std::shared_ptr<const CategoryModel> source, target;
    std::map<int, Obj> images;  // source indec -> target object

    Obj apply(const Obj& x) const;
    Obj apply_indec(int i) const;
};

struct ExactnessVerdict {
    bool object_exact = true;
    std::optional<Conflation> witness;  // source conflation whose image fails
    std::string detail;
};

// Object-level exactness: the term-wise image of every declared source
// conflation (hence of every closure conflation) is in the target closure.
// Necessary for exactness, not sufficient; used as a model-level audit.
ExactnessVerdict classify_exactness(const AddFunctor& f);

// The six-functor datum of a recollement (A, B, C).
struct RecollementModel {
    std::string name;
    std::shared_ptr<const CategoryModel> a, b, c;
    AddFunctor i_ustar;   // i^*: B -> A
    AddFunctor i_star;    // i_*: A -> B
    AddFunctor i_shriek;  // i^!: B -> A
    AddFunctor j_shriek;  // j_!: C -> B
    AddFunctor j_ustar;   // j^*: B -> C
    AddFunctor j_star;    // j_*: C -> B
    bool i_shriek_exact = false;  // declared extra exactness of i^!
    bool i_star_exact = false;    // declared extra exactness of i^*

    std::vector<const AddFunctor*> functors() const;
};

struct AuditReport {
    std::vector<BoundCheck> checks;
    bool all_pass() const;
};

// Structural audit: functor source/target wiring, object-exactness of the
// always-exact functors, flag consistency, unit/counit isos on indecs,
// j^* i_* = 0 = i^* j_! and i^! j_* = 0, the image characterization of
// the A-part, projective preservation, and the two canonical conflations
// through each B-indec.
AuditReport audit_recollement(const RecollementModel& r);

// sup over A-indecs of pd_B(i_*(-)).
DimValue relative_gl(const RecollementModel& r, int bound = 32);

// Global-dimension comparisons across the recollement, including the
// j_!-projective-dimension bound and the finiteness transfer statements.
AuditReport verify_gl_bounds(const RecollementModel& r, int bound = 32);

// Extension-dimension comparisons; requires one of the exactness flags.
AuditReport verify_extdim_bounds(const RecollementModel& r);

AddFunctor parse_functor(std::istream& in, const std::string& src_name,
                         std::shared_ptr<const CategoryModel> source,
                         std::shared_ptr<const CategoryModel> target);
void write_functor(const AddFunctor& f, std::ostream& out);

// .rec file: category paths, functor paths, flags; relative paths are
// resolved against the .rec file's directory.
RecollementModel load_recollement(const std::string& path);
void write_recollement(const RecollementModel& r, const std::string& dir,
                       const std::string& stem);

}  // namespace etx
