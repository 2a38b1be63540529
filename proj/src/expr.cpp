#include "iupc/expr.hpp"

#include <algorithm>
#include <limits>

namespace iupc {

namespace {

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

std::string ref_text(const FieldRef& r) {
    return r.var.empty() ? r.element : r.var + "." + r.element;
}

Tri from_bool(bool b) { return b ? Tri::Yes : Tri::No; }

// Three-valued comparison of two runtime values.
Tri compare_values(const Value& a, CmpOp op, const Value& b) {
    if (a.index() != b.index()) return Tri::Maybe;
    if (std::holds_alternative<std::int64_t>(a)) {
        std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
        switch (op) {
            case CmpOp::Eq: return from_bool(x == y);
            case CmpOp::Ne: return from_bool(x != y);
            case CmpOp::Lt: return from_bool(x < y);
            case CmpOp::Le: return from_bool(x <= y);
            case CmpOp::Gt: return from_bool(x > y);
            case CmpOp::Ge: return from_bool(x >= y);
        }
    }
    // strings and booleans support equality only
    if (op == CmpOp::Eq) return from_bool(a == b);
    if (op == CmpOp::Ne) return from_bool(a != b);
    return Tri::Maybe;
}

IntervalSet interval_from_cmp(CmpOp op, std::int64_t v) {
    constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    switch (op) {
        case CmpOp::Eq: return IntervalSet::single(v);
        case CmpOp::Ne: return IntervalSet::single(v).complement();
        case CmpOp::Lt: return v == kMin ? IntervalSet::none() : IntervalSet::at_most(v - 1);
        case CmpOp::Le: return IntervalSet::at_most(v);
        case CmpOp::Gt: return v == kMax ? IntervalSet::none() : IntervalSet::at_least(v + 1);
        case CmpOp::Ge: return IntervalSet::at_least(v);
    }
    return IntervalSet::none();
}

CmpOp invert(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return CmpOp::Ne;
        case CmpOp::Ne: return CmpOp::Eq;
        case CmpOp::Lt: return CmpOp::Ge;
        case CmpOp::Le: return CmpOp::Gt;
        case CmpOp::Gt: return CmpOp::Le;
        case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

// Flattens a pure conjunction of comparison atoms, pushing negation into the
// operators. Returns nullopt when the shape is anything else.
std::optional<std::vector<DataExpr>> conjunctive_compare_atoms(const DataExpr& e) {
    switch (e.kind) {
        case DataExpr::Kind::Compare:
            return std::vector<DataExpr>{e};
        case DataExpr::Kind::Not: {
            if (e.children.size() != 1 || e.children[0].kind != DataExpr::Kind::Compare)
                return std::nullopt;
            DataExpr flipped = e.children[0];
            flipped.op = invert(flipped.op);
            return std::vector<DataExpr>{flipped};
        }
        case DataExpr::Kind::And: {
            std::vector<DataExpr> atoms;
            for (const DataExpr& child : e.children) {
                auto sub = conjunctive_compare_atoms(child);
                if (!sub) return std::nullopt;
                atoms.insert(atoms.end(), sub->begin(), sub->end());
            }
            return atoms;
        }
        default:
            return std::nullopt;
    }
}

void collect_atoms(const DataExpr& e, std::vector<const DataExpr*>& out) {
    if (e.kind == DataExpr::Kind::Compare || e.kind == DataExpr::Kind::SameValue) {
        out.push_back(&e);
        return;
    }
    for (const DataExpr& child : e.children) collect_atoms(child, out);
}

}  // namespace

std::string value_to_string(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
    return quote(std::get<std::string>(v));
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Maybe;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::Yes || b == Tri::Yes) return Tri::Yes;
    if (a == Tri::No && b == Tri::No) return Tri::No;
    return Tri::Maybe;
}

Tri tri_not(Tri a) {
    if (a == Tri::Yes) return Tri::No;
    if (a == Tri::No) return Tri::Yes;
    return Tri::Maybe;
}

std::string cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "==";
}

DataExpr DataExpr::compare(FieldRef ref, CmpOp op, Value literal) {
    DataExpr e;
    e.kind = Kind::Compare;
    e.lhs = std::move(ref);
    e.op = op;
    e.literal = std::move(literal);
    return e;
}

DataExpr DataExpr::same_value(FieldRef a, FieldRef b) {
    DataExpr e;
    e.kind = Kind::SameValue;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return e;
}

DataExpr DataExpr::conjunction(std::vector<DataExpr> children) {
    if (children.size() == 1) return std::move(children[0]);
    DataExpr e;
    e.kind = Kind::And;
    e.children = std::move(children);
    return e;
}

DataExpr DataExpr::disjunction(std::vector<DataExpr> children) {
    if (children.size() == 1) return std::move(children[0]);
    DataExpr e;
    e.kind = Kind::Or;
    e.children = std::move(children);
    return e;
}

DataExpr DataExpr::negation(DataExpr child) {
    DataExpr e;
    e.kind = Kind::Not;
    e.children.push_back(std::move(child));
    return e;
}

std::string DataExpr::to_string() const {
    auto child_text = [](const DataExpr& c) {
        bool atom = c.kind == Kind::Compare || c.kind == Kind::SameValue || c.kind == Kind::Not;
        return atom ? c.to_string() : "(" + c.to_string() + ")";
    };
    switch (kind) {
        case Kind::Compare:
            return ref_text(lhs) + " " + cmp_op_text(op) + " " + value_to_string(literal);
        case Kind::SameValue:
            return ref_text(lhs) + " == " + ref_text(rhs);
        case Kind::Not:
            return "not " + child_text(children[0]);
        case Kind::And: {
            std::string out;
            for (const DataExpr& c : children) {
                if (!out.empty()) out += " and ";
                out += child_text(c);
            }
            return out;
        }
        case Kind::Or: {
            std::string out;
            for (const DataExpr& c : children) {
                if (!out.empty()) out += " or ";
                out += child_text(c);
            }
            return out;
        }
    }
    return {};
}

std::vector<std::string> DataExpr::referenced_vars() const {
    std::vector<const DataExpr*> atoms;
    collect_atoms(*this, atoms);
    std::vector<std::string> vars;
    for (const DataExpr* a : atoms) {
        if (!a->lhs.var.empty()) vars.push_back(a->lhs.var);
        if (a->kind == Kind::SameValue && !a->rhs.var.empty()) vars.push_back(a->rhs.var);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::vector<std::string> DataExpr::referenced_elements() const {
    std::vector<const DataExpr*> atoms;
    collect_atoms(*this, atoms);
    std::vector<std::string> elems;
    for (const DataExpr* a : atoms) {
        elems.push_back(a->lhs.element);
        if (a->kind == Kind::SameValue) elems.push_back(a->rhs.element);
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return elems;
}

std::string TimeExpr::to_string() const {
    std::string out;
    for (const TimeAtom& a : atoms) {
        if (!out.empty()) out += " and ";
        out += a.kind == TimeAtom::Kind::MinBetween ? "min_time_between(" : "max_time_between(";
        out += a.first + ", " + a.second + ", " + format_duration(a.gap) + ")";
    }
    return out;
}

std::vector<std::string> TimeExpr::referenced_vars() const {
    std::vector<std::string> vars;
    for (const TimeAtom& a : atoms) {
        vars.push_back(a.first);
        vars.push_back(a.second);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::string ResourceExpr::to_string() const {
    std::string out;
    for (const ResourceAtom& a : atoms) {
        if (!out.empty()) out += " and ";
        switch (a.kind) {
            case ResourceAtom::Kind::Role:
                out += "role(" + a.var + ") == " + quote(a.name);
                break;
            case ResourceAtom::Kind::SameActor:
                out += "same-actor(" + a.var + ", " + a.other_var + ")";
                break;
            case ResourceAtom::Kind::DifferentActor:
                out += "different-actor(" + a.var + ", " + a.other_var + ")";
                break;
            case ResourceAtom::Kind::UsesResource:
                out += "uses-resource(" + a.var + ", " + quote(a.name) + ")";
                break;
        }
    }
    return out;
}

std::vector<std::string> ResourceExpr::referenced_vars() const {
    std::vector<std::string> vars;
    for (const ResourceAtom& a : atoms) {
        vars.push_back(a.var);
        if (!a.other_var.empty()) vars.push_back(a.other_var);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

namespace {

const Value* resolve(const FieldRef& ref, const DataEnv& env) {
    const std::map<std::string, Value>* source = nullptr;
    if (ref.var.empty()) {
        source = env.case_data;
    } else if (env.occurrence_data) {
        source = env.occurrence_data(ref.var);
    }
    if (!source) return nullptr;
    auto it = source->find(ref.element);
    return it == source->end() ? nullptr : &it->second;
}

}  // namespace

Tri eval_data_expr(const DataExpr& e, const DataEnv& env) {
    switch (e.kind) {
        case DataExpr::Kind::Compare: {
            const Value* v = resolve(e.lhs, env);
            if (!v) return Tri::Maybe;
            return compare_values(*v, e.op, e.literal);
        }
        case DataExpr::Kind::SameValue: {
            const Value* a = resolve(e.lhs, env);
            const Value* b = resolve(e.rhs, env);
            if (!a || !b) return Tri::Maybe;
            return compare_values(*a, CmpOp::Eq, *b);
        }
        case DataExpr::Kind::Not:
            return tri_not(eval_data_expr(e.children[0], env));
        case DataExpr::Kind::And: {
            Tri r = Tri::Yes;
            for (const DataExpr& c : e.children) r = tri_and(r, eval_data_expr(c, env));
            return r;
        }
        case DataExpr::Kind::Or: {
            Tri r = Tri::No;
            for (const DataExpr& c : e.children) r = tri_or(r, eval_data_expr(c, env));
            return r;
        }
    }
    return Tri::Maybe;
}

void apply_guard_facts(PathFacts& facts, const DataExpr& guard) {
    auto atoms = conjunctive_compare_atoms(guard);
    if (!atoms) return;  // unsupported shape constrains nothing
    for (const DataExpr& atom : *atoms) {
        if (!atom.lhs.var.empty()) continue;  // occurrence data unknown statically
        ElementFacts& f = facts[atom.lhs.element];
        if (std::holds_alternative<std::int64_t>(atom.literal)) {
            f.ints = f.ints.intersect(
                interval_from_cmp(atom.op, std::get<std::int64_t>(atom.literal)));
            if (f.ints.empty()) f.contradictory = true;
        } else if (atom.op == CmpOp::Eq) {
            if (f.equals && *f.equals != atom.literal) f.contradictory = true;
            f.equals = atom.literal;
            if (std::find(f.not_equal.begin(), f.not_equal.end(), atom.literal) !=
                f.not_equal.end())
                f.contradictory = true;
        } else if (atom.op == CmpOp::Ne) {
            if (f.equals && *f.equals == atom.literal) f.contradictory = true;
            f.not_equal.push_back(atom.literal);
        }
    }
}

bool facts_contradictory(const PathFacts& facts) {
    for (const auto& [element, f] : facts) {
        (void)element;
        if (f.contradictory || f.ints.empty()) return true;
    }
    return false;
}

PathFacts facts_from_guards(const std::vector<DataExpr>& guards) {
    PathFacts facts;
    for (const DataExpr& guard : guards) apply_guard_facts(facts, guard);
    return facts;
}

Tri eval_data_expr_static(const DataExpr& e, const PathFacts& facts) {
    switch (e.kind) {
        case DataExpr::Kind::Compare: {
            if (!e.lhs.var.empty()) return Tri::Maybe;
            auto it = facts.find(e.lhs.element);
            if (it == facts.end()) return Tri::Maybe;
            const ElementFacts& f = it->second;
            if (f.contradictory) return Tri::Maybe;
            if (std::holds_alternative<std::int64_t>(e.literal)) {
                IntervalSet satisfying =
                    interval_from_cmp(e.op, std::get<std::int64_t>(e.literal));
                if (f.ints.subset_of(satisfying)) return Tri::Yes;
                if (f.ints.disjoint_with(satisfying)) return Tri::No;
                return Tri::Maybe;
            }
            if (f.equals) return compare_values(*f.equals, e.op, e.literal);
            bool excluded = std::find(f.not_equal.begin(), f.not_equal.end(), e.literal) !=
                            f.not_equal.end();
            if (excluded && e.op == CmpOp::Eq) return Tri::No;
            if (excluded && e.op == CmpOp::Ne) return Tri::Yes;
            return Tri::Maybe;
        }
        case DataExpr::Kind::SameValue:
            return e.lhs == e.rhs ? Tri::Yes : Tri::Maybe;
        case DataExpr::Kind::Not:
            return tri_not(eval_data_expr_static(e.children[0], facts));
        case DataExpr::Kind::And: {
            Tri r = Tri::Yes;
            for (const DataExpr& c : e.children) r = tri_and(r, eval_data_expr_static(c, facts));
            return r;
        }
        case DataExpr::Kind::Or: {
            Tri r = Tri::No;
            for (const DataExpr& c : e.children) r = tri_or(r, eval_data_expr_static(c, facts));
            return r;
        }
    }
    return Tri::Maybe;
}

std::optional<IntervalSet> interval_of_expr(const DataExpr& e, const std::string& element) {
    auto atoms = conjunctive_compare_atoms(e);
    if (!atoms) return std::nullopt;
    IntervalSet result = IntervalSet::all();
    for (const DataExpr& atom : *atoms) {
        if (!atom.lhs.var.empty() || atom.lhs.element != element) return std::nullopt;
        if (!std::holds_alternative<std::int64_t>(atom.literal)) return std::nullopt;
        result = result.intersect(interval_from_cmp(atom.op, std::get<std::int64_t>(atom.literal)));
    }
    return result;
}

std::optional<std::string> single_case_element(const DataExpr& e) {
    auto atoms = conjunctive_compare_atoms(e);
    if (!atoms || atoms->empty()) return std::nullopt;
    std::string element;
    for (const DataExpr& atom : *atoms) {
        if (!atom.lhs.var.empty()) return std::nullopt;
        if (element.empty())
            element = atom.lhs.element;
        else if (element != atom.lhs.element)
            return std::nullopt;
    }
    return element;
}

}  // namespace iupc
