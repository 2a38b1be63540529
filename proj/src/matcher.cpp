#include "iupc/matcher.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "iupc/errors.hpp"

namespace iupc {

namespace {

std::set<std::string> reachable_from(const ProcessSchema& s, const std::string& start) {
    std::set<std::string> seen{start};
    std::deque<std::string> work{start};
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop_front();
        for (const ControlEdge& e : s.control_edges)
            if (e.from == cur && seen.insert(e.to).second) work.push_back(e.to);
    }
    return seen;
}

}  // namespace

bool nodes_parallel(const ProcessSchema& s, const std::string& node_a, const std::string& node_b) {
    for (const Node& n : s.nodes) {
        if (n.kind != NodeKind::AndSplit) continue;
        auto branches = s.outgoing(n.id);
        std::vector<std::set<std::string>> reach;
        reach.reserve(branches.size());
        for (std::size_t e : branches) reach.push_back(reachable_from(s, s.control_edges[e].to));
        for (std::size_t i = 0; i < reach.size(); ++i) {
            for (std::size_t j = 0; j < reach.size(); ++j) {
                if (i == j) continue;
                // exclusively on branch i vs exclusively on branch j
                if (reach[i].count(node_a) && !reach[j].count(node_a) && reach[j].count(node_b) &&
                    !reach[i].count(node_b))
                    return true;
            }
        }
    }
    return false;
}

std::vector<MatchBinding> match_schema(const StructuralPattern& p, const ProcessSchema& s,
                                       std::size_t cap) {
    std::vector<PatternBinding> anchors = p.anchors();
    std::vector<std::vector<const Node*>> candidates;
    for (const PatternBinding& a : anchors) {
        auto nodes = s.activities_labeled(a.label);
        if (nodes.empty()) return {};
        std::sort(nodes.begin(), nodes.end(),
                  [](const Node* x, const Node* y) { return x->id < y->id; });
        candidates.push_back(std::move(nodes));
    }

    std::vector<MatchBinding> out;
    std::vector<std::size_t> pick(anchors.size(), 0);
    while (true) {
        MatchBinding b;
        b.completeness = MatchBinding::Completeness::AnchorOnly;
        for (std::size_t i = 0; i < anchors.size(); ++i)
            b.vars[anchors[i].var] = candidates[i][pick[i]]->id;
        out.push_back(std::move(b));
        if (out.size() > cap)
            throw PathExplosion("pattern produces more than " + std::to_string(cap) +
                                " anchor bindings on schema '" + s.id + "'");
        std::size_t i = anchors.size();
        while (i > 0) {
            --i;
            if (++pick[i] < candidates[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
        if (anchors.empty()) return out;
    }
}

namespace {

// Shared relation check; position = order index (path position or completion
// order). `element` names the matched schema node (static) for parallel-with.
struct BoundVar {
    std::size_t position = 0;
    std::string label;
    std::string element;  // node id (schema matching) when available
};

bool relations_hold(const std::vector<Relation>& relations,
                    const std::map<std::string, BoundVar>& bound,
                    const std::vector<std::size_t>& activity_order, const ProcessSchema* schema,
                    bool require_all_bound) {
    for (const Relation& r : relations) {
        auto l = bound.find(r.left);
        auto rt = bound.find(r.right);
        if (l == bound.end() || rt == bound.end()) {
            if (require_all_bound) return false;
            continue;  // relation involves a not-yet-bound var
        }
        switch (r.kind) {
            case Relation::Kind::EventuallyFollows:
                if (!(l->second.position < rt->second.position)) return false;
                break;
            case Relation::Kind::DirectlyFollows: {
                auto it = std::find(activity_order.begin(), activity_order.end(),
                                    l->second.position);
                if (it == activity_order.end() || std::next(it) == activity_order.end())
                    return false;
                if (*std::next(it) != rt->second.position) return false;
                break;
            }
            case Relation::Kind::ParallelWith: {
                if (!schema) return false;
                bool found = false;
                // decided on the schema: some pair of same-labeled nodes is parallel
                if (!l->second.element.empty() && !rt->second.element.empty()) {
                    found = nodes_parallel(*schema, l->second.element, rt->second.element);
                } else {
                    for (const Node* a : schema->activities_labeled(l->second.label)) {
                        for (const Node* b : schema->activities_labeled(rt->second.label))
                            if (nodes_parallel(*schema, a->id, b->id)) found = true;
                    }
                }
                if (!found) return false;
                break;
            }
        }
    }
    return true;
}

bool relation_touches_consequent(const Relation& r, const StructuralPattern& p) {
    const PatternBinding* l = p.binding(r.left);
    const PatternBinding* rt = p.binding(r.right);
    return (l && !l->anchor) || (rt && !rt->anchor);
}

}  // namespace

bool holds_on_path(const StructuralPattern& p, const ProcessSchema& s, const ExecutionPath& path,
                   const MatchBinding& anchor) {
    // absences are global on the path
    for (const std::string& absent : p.absences) {
        for (const std::string& node_id : path.nodes) {
            const Node* n = s.node(node_id);
            if (n && n->kind == NodeKind::Activity && n->label == absent) return false;
        }
    }

    std::vector<std::size_t> activity_order = path.activity_positions(s);

    // positions of each anchor's node on the path
    std::vector<PatternBinding> anchors = p.anchors();
    std::vector<std::vector<std::size_t>> anchor_positions;
    for (const PatternBinding& a : anchors) {
        auto it = anchor.vars.find(a.var);
        if (it == anchor.vars.end()) return true;  // unbound anchor: nothing to check
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < path.nodes.size(); ++i)
            if (path.nodes[i] == it->second) positions.push_back(i);
        if (positions.empty()) return true;  // anchor not on this path: vacuous
        anchor_positions.push_back(std::move(positions));
    }

    std::vector<Relation> anchor_relations, consequent_relations;
    for (const Relation& r : p.relations)
        (relation_touches_consequent(r, p) ? consequent_relations : anchor_relations).push_back(r);

    std::vector<PatternBinding> consequents = p.consequents();
    std::vector<std::vector<std::size_t>> consequent_candidates;
    for (const PatternBinding& c : consequents) {
        std::vector<std::size_t> candidates;
        for (std::size_t pos : activity_order)
            if (s.node(path.nodes[pos])->label == c.label) candidates.push_back(pos);
        consequent_candidates.push_back(std::move(candidates));
    }

    // one anchor placement combination
    auto check_combo = [&](const std::vector<std::size_t>& combo) -> bool {
        std::map<std::string, BoundVar> bound;
        for (std::size_t i = 0; i < anchors.size(); ++i)
            bound[anchors[i].var] =
                BoundVar{combo[i], anchors[i].label, path.nodes[combo[i]]};
        // anchor-side relations filter the trigger; a combo breaking them is
        // not a trigger at all
        if (!relations_hold(anchor_relations, bound, activity_order, &s, true)) return true;

        std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
            if (idx == consequents.size())
                return relations_hold(consequent_relations, bound, activity_order, &s, true);
            for (std::size_t pos : consequent_candidates[idx]) {
                bound[consequents[idx].var] =
                    BoundVar{pos, consequents[idx].label, path.nodes[pos]};
                // prune early with partially bound relations
                if (relations_hold(consequent_relations, bound, activity_order, &s, false) &&
                    assign(idx + 1))
                    return true;
                bound.erase(consequents[idx].var);
            }
            return false;
        };
        return assign(0);
    };

    std::vector<std::size_t> combo(anchors.size(), 0);
    while (true) {
        std::vector<std::size_t> placement;
        placement.reserve(anchors.size());
        for (std::size_t i = 0; i < anchors.size(); ++i)
            placement.push_back(anchor_positions[i][combo[i]]);
        if (!check_combo(placement)) return false;
        std::size_t i = anchors.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++combo[i] < anchor_positions[i].size()) {
                done = false;
                break;
            }
            combo[i] = 0;
        }
        if (done) return true;
    }
}

std::vector<MatchBinding> match_trace_prefix(const StructuralPattern& p, const Trace& t,
                                             std::size_t upto, const ProcessSchema* schema,
                                             std::size_t cap) {
    if (upto > t.events.size()) throw ModelError("trace prefix index past the end of the trace");

    struct Completed {
        std::string occurrence_id;
        std::string label;
        std::size_t complete_order;  // position among COMPLETE events
    };
    std::vector<Completed> completed;
    std::size_t complete_count = 0;
    for (std::size_t i = 0; i < upto; ++i) {
        const Event& e = t.events[i];
        if (e.kind != EventKind::Complete) continue;
        completed.push_back(Completed{e.occurrence_id, e.activity_label, complete_count++});
    }
    std::vector<std::size_t> completion_order(complete_count);
    for (std::size_t i = 0; i < complete_count; ++i) completion_order[i] = i;

    auto candidates_for = [&](const std::string& label) {
        std::vector<const Completed*> out;
        for (const Completed& c : completed)
            if (c.label == label) out.push_back(&c);
        return out;
    };

    std::vector<PatternBinding> anchors = p.anchors();
    std::vector<PatternBinding> consequents = p.consequents();
    std::vector<std::vector<const Completed*>> anchor_candidates;
    for (const PatternBinding& a : anchors) {
        anchor_candidates.push_back(candidates_for(a.label));
        if (anchor_candidates.back().empty()) return {};
    }

    std::vector<Relation> anchor_relations, consequent_relations;
    for (const Relation& r : p.relations)
        (relation_touches_consequent(r, p) ? consequent_relations : anchor_relations).push_back(r);

    std::vector<MatchBinding> out;
    auto emit = [&](const MatchBinding& b) {
        out.push_back(b);
        if (out.size() > cap)
            throw PathExplosion("pattern produces more than " + std::to_string(cap) +
                                " bindings on trace '" + t.instance_id + "'");
    };

    std::vector<std::size_t> pick(anchors.size(), 0);
    while (true) {
        std::map<std::string, BoundVar> bound;
        MatchBinding anchor_binding;
        anchor_binding.completeness = MatchBinding::Completeness::AnchorOnly;
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            const Completed* c = anchor_candidates[i][pick[i]];
            bound[anchors[i].var] = BoundVar{c->complete_order, c->label, {}};
            anchor_binding.vars[anchors[i].var] = c->occurrence_id;
        }
        if (relations_hold(anchor_relations, bound, completion_order, schema, true)) {
            // enumerate full assignments of consequent vars
            std::vector<MatchBinding> fulls;
            std::function<void(std::size_t, MatchBinding&)> assign =
                [&](std::size_t idx, MatchBinding& acc) {
                    if (idx == consequents.size()) {
                        if (relations_hold(consequent_relations, bound, completion_order, schema,
                                           true)) {
                            MatchBinding full = acc;
                            full.completeness = MatchBinding::Completeness::Full;
                            fulls.push_back(std::move(full));
                        }
                        return;
                    }
                    for (const Completed* c : candidates_for(consequents[idx].label)) {
                        bound[consequents[idx].var] = BoundVar{c->complete_order, c->label, {}};
                        acc.vars[consequents[idx].var] = c->occurrence_id;
                        if (relations_hold(consequent_relations, bound, completion_order, schema,
                                           false))
                            assign(idx + 1, acc);
                        bound.erase(consequents[idx].var);
                        acc.vars.erase(consequents[idx].var);
                    }
                };
            MatchBinding acc = anchor_binding;
            assign(0, acc);
            if (fulls.empty()) {
                emit(anchor_binding);
            } else {
                for (MatchBinding& f : fulls) emit(f);
            }
        }
        std::size_t i = anchors.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++pick[i] < anchor_candidates[i].size()) {
                done = false;
                break;
            }
            pick[i] = 0;
        }
        if (done) break;
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace iupc
