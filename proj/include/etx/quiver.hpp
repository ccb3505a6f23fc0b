#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etx/field.hpp"
#include "etx/functors.hpp"
#include "etx/model.hpp"

namespace etx {

// A finite acyclic quiver over F_p with admissible relations.  Relations
// are linear combinations of parallel paths; paths are arrow sequences
// composed right-to-left ("b.a" means first a, then b).
struct QuiverSpec {
    struct Arrow {
        std::string label;
        int src, tgt;  // vertex indices
    };
    struct Relation {
        // coefficient * path (arrow indices, rightmost applied first)
        std::vector<std::pair<int, std::vector<int>>> terms;
        int min_len = 0;  // shortest path length among the terms
    };

    std::string name;
    int p = 2;
    std::vector<std::string> vertices;
    std::map<std::string, int> vertex_of;
    std::vector<Arrow> arrows;
    std::map<std::string, int> arrow_of;
    std::vector<Relation> relations;

    int vid(const std::string& v) const;
    int aid(const std::string& a) const;
};

// A path p: start vertex + arrow sequence (empty = lazy path e_v).
struct Path {
    int start = 0, end = 0;
    std::vector<int> arrows;  // applied left to right along the walk
};

// Path algebra modulo the relation ideal: a basis of path classes and the
// projective representation at each vertex.
struct PathAlgebra {
    const QuiverSpec* q = nullptr;
    std::vector<Path> paths;  // all paths of the acyclic quiver
    int dim = 0;              // dim over F_p of the quotient algebra
    // Basis of the ideal inside the path span (column per generator).
    Mat ideal;
};

// Checks acyclicity and admissibility (every relation term has length >= 2).
PathAlgebra build_algebra(const QuiverSpec& q);

struct Representation {
    std::string label;
    const QuiverSpec* q = nullptr;
    std::vector<int> dims;                 // per vertex
    std::vector<Mat> mats;                 // per arrow: dims[src] -> dims[tgt]
    int total_dim() const;
    bool is_zero() const;
};

// Direct sum, with the obvious block matrices.
Representation rep_sum(const Representation& a, const Representation& b);
// Validates shapes and that every relation acts as zero.
void validate_rep(const Representation& r);

// The indecomposable projective at vertex v (basis: path classes from v).
Representation projective_rep(const PathAlgebra& alg, int v);

// A homomorphism between representations: one matrix per vertex.
struct RepMap {
    std::vector<Mat> maps;  // maps[v]: a.dims[v] -> b.dims[v]
};
// Basis of the intertwiner space Hom(a, b).
std::vector<RepMap> hom_space(const Representation& a, const Representation& b);

// Middle terms of the non-zero classes in Ext^1(c, a), one representative
// per class, deduplicated up to the isomorphism test used by decompose.
// Errors (CapacityOverflow) if dim Ext^1 > max_ext_dim: the class
// enumeration p^d would explode.
std::vector<Representation> ext_middle_terms(const PathAlgebra& alg, const Representation& c,
                                             const Representation& a, int max_ext_dim = 3);

// Multiset decomposition of r over the named indec list; errors with
// IncompleteIndecs if a non-zero piece matches nothing.
Obj decompose(const Representation& r, const std::vector<Representation>& indecs);

// Full module category model: indecs as given, conflations from every
// Ext^1 middle term, dimension vectors attached.
CategoryModel build_modcat(const PathAlgebra& alg, const std::vector<Representation>& indecs,
                           int cap, const std::string& name);

// Restriction to an extension-closed support set (indecs keep their
// labels, table re-closed).  Errors NotExtensionClosed with a witness.
CategoryModel restrict_extension_closed(const CategoryModel& cat, const Subcat& s,
                                        const std::string& name);

// Triangular-matrix glue: the B-quiver is the disjoint union of the two
// quivers plus one connecting arrow per C-vertex with a non-zero vertex
// image, with commutation/vanishing relations induced by the arrow map.
struct TriangularSpec {
    std::string name;
    QuiverSpec l1, l2;                    // corner algebras (A-side, C-side)
    std::map<int, int> vmap;              // l2 vertex -> l1 vertex, -1 = killed
    std::map<int, int> amap;              // l2 arrow -> l1 arrow, -1 = killed
    std::map<int, std::string> connector; // l2 vertex -> connecting arrow label
    int cap = 6;
};

QuiverSpec glue_quiver(const TriangularSpec& tri);

struct TriangularData {
    TriangularSpec tri;
    QuiverSpec glued;
    PathAlgebra alg_a, alg_c, alg_b;
    std::vector<Representation> indecs_a, indecs_c, indecs_b;
};

// Builds the three module categories and the six functors:
//   i_*, j_* zero-extension; i^!, j^* restriction; i^* cokernel of the
//   connecting maps; j_! the standard-projective extension.
RecollementModel build_triangular_recollement(const TriangularData& data);

// Restrict the C-side to s_tilde and the B-side to the preimage under j^*.
RecollementModel restrict_recollement(const RecollementModel& r, const Subcat& s_tilde,
                                      const std::string& name);

QuiverSpec parse_quiver(std::istream& in, const std::string& src_name);
QuiverSpec load_quiver(const std::string& path);
std::vector<Representation> parse_reps(std::istream& in, const std::string& src_name,
                                       const QuiverSpec& q);
std::vector<Representation> load_reps(const std::string& path, const QuiverSpec& q);

// .tri file: quiver/rep paths plus the vertex/arrow maps.  Returned by
// pointer so the representations' quiver back-references stay stable.
std::shared_ptr<TriangularData> load_triangular(const std::string& path);

}  // namespace etx
