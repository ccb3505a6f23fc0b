#include "etx/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <ostream>

#include "etx/homdim.hpp"
#include "etx/textio.hpp"

namespace etx {

int Obj::total() const {
    int t = 0;
    for (auto& [i, k] : mult) t += k;
    return t;
}

int Obj::count(int i) const {
    auto it = mult.find(i);
    return it == mult.end() ? 0 : it->second;
}

void Obj::add(int i, int k) {
    if (k == 0) return;
    int v = mult[i] += k;
    if (v < 0) fail(ErrKind::Inconsistent, "Obj: negative multiplicity");
    if (v == 0) mult.erase(i);
}

Obj obj_sum(const Obj& a, const Obj& b) {
    Obj r = a;
    for (auto& [i, k] : b.mult) r.add(i, k);
    return r;
}

bool is_summand(const Obj& b, const Obj& a) {
    for (auto& [i, k] : b.mult)
        if (a.count(i) < k) return false;
    return true;
}

Obj obj_diff(const Obj& a, const Obj& b) {
    if (!is_summand(b, a)) fail(ErrKind::Inconsistent, "obj_diff: not a summand");
    Obj r = a;
    for (auto& [i, k] : b.mult) r.add(i, -k);
    return r;
}

bool supported_in(const Obj& x, const Subcat& s) {
    for (auto& [i, k] : x.mult)
        if (!s.count(i)) return false;
    return true;
}

Subcat add_closure(const std::vector<Obj>& gens) {
    Subcat s;
    for (auto& g : gens)
        for (auto& [i, k] : g.mult) s.insert(i);
    return s;
}

Subcat support(const Obj& x) {
    Subcat s;
    for (auto& [i, k] : x.mult) s.insert(i);
    return s;
}

bool ConflationTable::contains(const Conflation& c) const {
    return std::binary_search(closure.begin(), closure.end(), c);
}

int CategoryModel::id(const std::string& label) const {
    auto it = index_of.find(label);
    if (it == index_of.end()) fail(ErrKind::BadQuery, name + ": unknown indec '" + label + "'");
    return it->second;
}

std::string CategoryModel::show(const Obj& x) const {
    if (x.is_zero()) return "0";
    std::string s;
    for (auto& [i, k] : x.mult)
        for (int t = 0; t < k; ++t) {
            if (!s.empty()) s += "+";
            s += indecs.at(i);
        }
    return s;
}

std::string CategoryModel::show(const Conflation& c) const {
    return show(c.left) + " -> " + show(c.middle) + " -> " + show(c.right);
}

Obj CategoryModel::parse_obj(const std::string& term) const {
    std::string t = trim(term);
    if (t == "0") return Obj::zero();
    Obj x;
    for (auto& piece : split_on(t, "+")) {
        if (piece.empty()) fail(ErrKind::Parse, name + ": empty summand in term '" + term + "'");
        x.add(id(piece));
    }
    return x;
}

static bool within_cap(const Conflation& c, int cap) {
    return c.left.total() <= cap && c.middle.total() <= cap && c.right.total() <= cap;
}

void close_table(ConflationTable& table, int n_indecs) {
    std::vector<Conflation> gens;
    for (auto& b : table.basics) {
        if (!within_cap(b, table.cap))
            fail(ErrKind::CapacityOverflow, "close_table: declared conflation exceeds cap");
        gens.push_back(b);
    }
    for (int i = 0; i < n_indecs; ++i) {
        Obj x = Obj::single(i);
        gens.push_back({x, x, Obj::zero()});
        gens.push_back({Obj::zero(), x, x});
    }

    std::set<Conflation> seen;
    std::deque<Conflation> todo;
    Conflation zero{};
    seen.insert(zero);
    todo.push_back(zero);
    while (!todo.empty()) {
        Conflation cur = todo.front();
        todo.pop_front();
        for (auto& g : gens) {
            Conflation nxt{obj_sum(cur.left, g.left), obj_sum(cur.middle, g.middle),
                           obj_sum(cur.right, g.right)};
            if (!within_cap(nxt, table.cap)) continue;
            if (seen.insert(nxt).second) todo.push_back(nxt);
        }
    }

    table.closure.assign(seen.begin(), seen.end());
    table.by_right.clear();
    table.by_middle.clear();
    for (size_t idx = 0; idx < table.closure.size(); ++idx) {
        table.by_right[table.closure[idx].right].push_back(idx);
        table.by_middle[table.closure[idx].middle].push_back(idx);
    }
}

std::vector<Conflation> query_conflations(const CategoryModel& cat, const ConflationQuery& q) {
    const auto& t = cat.table;
    auto check_cap = [&](const std::optional<Obj>& o) {
        if (o && o->total() > t.cap)
            fail(ErrKind::CapacityOverflow,
                 cat.name + ": query term " + cat.show(*o) + " exceeds cap " +
                     std::to_string(t.cap));
    };
    check_cap(q.left);
    check_cap(q.middle);
    check_cap(q.right);

    std::vector<Conflation> out;
    auto matches = [&](const Conflation& c) {
        return (!q.left || c.left == *q.left) && (!q.middle || c.middle == *q.middle) &&
               (!q.right || c.right == *q.right);
    };
    // Use an index when one is available; both give sorted output.
    if (q.right) {
        auto it = t.by_right.find(*q.right);
        if (it != t.by_right.end())
            for (size_t idx : it->second)
                if (matches(t.closure[idx])) out.push_back(t.closure[idx]);
    } else if (q.middle) {
        auto it = t.by_middle.find(*q.middle);
        if (it != t.by_middle.end())
            for (size_t idx : it->second)
                if (matches(t.closure[idx])) out.push_back(t.closure[idx]);
    } else {
        for (auto& c : t.closure)
            if (matches(c)) out.push_back(c);
    }
    return out;
}

void validate_model(const CategoryModel& cat) {
    int n = static_cast<int>(cat.indecs.size());
    auto check_obj = [&](const Obj& x) {
        for (auto& [i, k] : x.mult) {
            if (i < 0 || i >= n) fail(ErrKind::Inconsistent, cat.name + ": indec index out of range");
            if (k <= 0) fail(ErrKind::Inconsistent, cat.name + ": non-positive multiplicity");
        }
    };
    for (auto& b : cat.table.basics) {
        check_obj(b.left);
        check_obj(b.middle);
        check_obj(b.right);
        if (!within_cap(b, cat.table.cap))
            fail(ErrKind::CapacityOverflow, cat.name + ": declared conflation exceeds cap");
    }
    if (cat.table.cap < 1) fail(ErrKind::Inconsistent, cat.name + ": cap must be >= 1");
    if (cat.declared_projectives)
        for (int i : *cat.declared_projectives)
            if (i < 0 || i >= n) fail(ErrKind::Inconsistent, cat.name + ": bad projective index");
    for (auto& [i, dv] : cat.dimvec) {
        if (i < 0 || i >= n) fail(ErrKind::Inconsistent, cat.name + ": bad dimvec index");
        (void)dv;
    }
}

CategoryModel parse_category(std::istream& in, const std::string& src_name) {
    CategoryModel cat;
    cat.table.cap = 6;
    bool saw_name = false;
    std::vector<std::pair<int, std::string>> conf_lines;
    std::vector<std::pair<int, std::string>> proj_lines;
    for (auto& ln : read_lines(in, src_name)) {
        if (ln.keyword == "category") {
            if (ln.rest.empty()) parse_fail(src_name, ln.no, "category needs a name");
            cat.name = ln.rest;
            saw_name = true;
        } else if (ln.keyword == "cap") {
            cat.table.cap = parse_int(ln.rest, src_name, ln.no);
            if (cat.table.cap < 1) parse_fail(src_name, ln.no, "cap must be >= 1");
        } else if (ln.keyword == "note") {
            cat.notes.push_back(ln.rest);
        } else if (ln.keyword == "indec") {
            std::string lab = ln.rest;
            if (lab.empty() || lab == "0" || lab.find('+') != std::string::npos ||
                lab.find_first_of(" \t") != std::string::npos)
                parse_fail(src_name, ln.no, "bad indec label '" + lab + "'");
            if (cat.index_of.count(lab)) parse_fail(src_name, ln.no, "duplicate indec '" + lab + "'");
            cat.index_of[lab] = static_cast<int>(cat.indecs.size());
            cat.indecs.push_back(lab);
        } else if (ln.keyword == "projective") {
            proj_lines.emplace_back(ln.no, ln.rest);
        } else if (ln.keyword == "conflation") {
            conf_lines.emplace_back(ln.no, ln.rest);
        } else {
            parse_fail(src_name, ln.no, "unknown keyword '" + ln.keyword + "'");
        }
    }
    if (!saw_name) fail(ErrKind::Parse, src_name + ": missing 'category' line");

    for (auto& [no, rest] : proj_lines) {
        if (!cat.index_of.count(rest)) parse_fail(src_name, no, "unknown indec '" + rest + "'");
        if (!cat.declared_projectives) cat.declared_projectives = Subcat{};
        cat.declared_projectives->insert(cat.index_of[rest]);
    }
    for (auto& [no, rest] : conf_lines) {
        auto parts = split_on(rest, "->");
        if (parts.size() != 3) parse_fail(src_name, no, "conflation needs 'L -> M -> R'");
        Conflation c;
        try {
            c.left = cat.parse_obj(parts[0]);
            c.middle = cat.parse_obj(parts[1]);
            c.right = cat.parse_obj(parts[2]);
        } catch (const Error& e) {
            parse_fail(src_name, no, e.what());
        }
        cat.table.basics.push_back(c);
    }
    validate_model(cat);
    close_table(cat.table, static_cast<int>(cat.indecs.size()));
    check_declared_projectives(cat);
    return cat;
}

CategoryModel load_category(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrKind::Parse, "cannot open '" + path + "'");
    return parse_category(in, path);
}

void write_category(const CategoryModel& cat, std::ostream& out) {
    out << "category " << cat.name << "\n";
    out << "cap " << cat.table.cap << "\n";
    for (auto& n : cat.notes) out << "note " << n << "\n";
    for (auto& lab : cat.indecs) out << "indec " << lab << "\n";
    if (cat.declared_projectives)
        for (int i : *cat.declared_projectives) out << "projective " << cat.indecs[i] << "\n";
    for (auto& b : cat.table.basics) out << "conflation " << cat.show(b) << "\n";
}

}  // namespace etx
