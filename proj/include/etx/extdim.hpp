#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etx/homdim.hpp"
#include "etx/model.hpp"

namespace etx {

struct AddFunctor;  // functors.hpp

// u1 <> u2: indecs appearing in u1, u2, or as a middle-term summand of a
// declared conflation whose end terms are supported in u1 resp. u2.
// Working at generator level makes this independent of the cap.
Subcat diamond(const CategoryModel& cat, const Subcat& u1, const Subcat& u2);

// <t>_n tower: <t>_0 = {}, <t>_1 = add t, <t>_{n+1} = <t>_n <> <t>_1.
Subcat bracket_n(const CategoryModel& cat, const Subcat& t, int n);

struct LevelResult {
    // Smallest n with <t>_n = all indecs; nullopt if the tower stabilizes
    // strictly below everything (t does not generate).
    std::optional<int> level;
    std::vector<Subcat> tower;  // <t>_0 .. <t>_stable
};
LevelResult level(const CategoryModel& cat, const Subcat& t);

struct ExtDimResult {
    DimValue value;
    Subcat witness;  // generator t with level(t) <= value + 1
};
// inf over generators t of (level(t) - 1).  max_support < 0 means no
// restriction; otherwise only generators with |support| <= max_support
// are searched (diagnostic mode).
ExtDimResult ext_dim(const CategoryModel& cat, int max_support = -1);

// level(t1 "join along extensions" t2) interplay:
//   <t1>_m <> <t2>_n  subset of  <t1 + t2>_{m+n}
BoundCheck check_oplus_lemma(const CategoryModel& cat, const Subcat& t1, const Subcat& t2, int m,
                             int n);

// For an object-exact functor f: F(<t>_n) subset of <F t>_n on the target.
BoundCheck check_functor_bracket(const AddFunctor& f, const Subcat& t, int n);

// Every target indec is a summand of some image f(x).
bool is_quasi_dense(const AddFunctor& f);

// For object-exact quasi-dense f: ext.dim target <= ext.dim source.
BoundCheck check_dense_lemma(const AddFunctor& f);

}  // namespace etx
