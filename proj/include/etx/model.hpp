#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "etx/errors.hpp"

namespace etx {

// Objects of a Krull-Schmidt category: finite multisets of indecomposables.
// Indecomposables are indexed per model; labels live on CategoryModel.
struct Obj {
    std::map<int, int> mult;  // indec index -> multiplicity > 0

    static Obj zero() { return {}; }
    static Obj single(int i) { return Obj{{{i, 1}}}; }

    bool is_zero() const { return mult.empty(); }
    int total() const;
    int count(int i) const;
    void add(int i, int k = 1);

    auto operator<=>(const Obj&) const = default;
};

Obj obj_sum(const Obj& a, const Obj& b);
// b is a direct summand of a (multiset inclusion).
bool is_summand(const Obj& b, const Obj& a);
// a - b when is_summand(b, a); errors otherwise.
Obj obj_diff(const Obj& a, const Obj& b);

// Full subcategory closed under sums/summands: a support set of indecs.
using Subcat = std::set<int>;

bool supported_in(const Obj& x, const Subcat& s);
Subcat add_closure(const std::vector<Obj>& gens);
Subcat support(const Obj& x);

// A conflation A >--> B -->> C recorded term-wise.
struct Conflation {
    Obj left, middle, right;
    auto operator<=>(const Conflation&) const = default;
};

// All conflations with every term of size <= cap, generated from the
// declared non-split table plus the split axioms, closed under direct sum.
struct ConflationTable {
    int cap = 6;
    std::vector<Conflation> basics;   // declared generators (non-split reps)
    std::vector<Conflation> closure;  // materialized, sorted
    std::map<Obj, std::vector<size_t>> by_right;
    std::map<Obj, std::vector<size_t>> by_middle;

    bool contains(const Conflation& c) const;
};

struct CategoryModel {
    std::string name;
    std::vector<std::string> notes;
    std::vector<std::string> indecs;  // labels; index is the indec id
    std::map<std::string, int> index_of;
    ConflationTable table;
    std::optional<Subcat> declared_projectives;
    // Optional dimension vectors (attached by the representation builder).
    std::map<int, std::vector<int>> dimvec;

    int id(const std::string& label) const;
    std::string show(const Obj& x) const;  // "0" or "lab+lab+..."
    std::string show(const Conflation& c) const;
    Obj parse_obj(const std::string& term) const;
};

// Materialize table.closure from table.basics + split generators for
// n_indecs indecs, then build the query indexes.  Errors if a basic
// exceeds the cap.
void close_table(ConflationTable& table, int n_indecs);

struct ConflationQuery {
    std::optional<Obj> left, middle, right;
};

// Matching closure entries in deterministic (sorted) order.  Errors with
// CapacityOverflow if a fixed pattern term exceeds the cap.
std::vector<Conflation> query_conflations(const CategoryModel& cat, const ConflationQuery& q);

// Structural validation: indices in range, terms within cap, declared
// projectives consistent with the table (checked by the caller via homdim).
void validate_model(const CategoryModel& cat);

CategoryModel parse_category(std::istream& in, const std::string& src_name);
CategoryModel load_category(const std::string& path);
void write_category(const CategoryModel& cat, std::ostream& out);

}  // namespace etx
