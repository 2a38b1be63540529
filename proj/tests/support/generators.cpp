#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace iupc::testing {

namespace {

int rand_int(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& pool) {
    return pool[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(pool.size()) - 1))];
}

struct Builder {
    std::mt19937& rng;
    const SchemaGenOptions& opt;
    int activities_left;
    int xor_left;
    int and_left;
    int counter = 0;
    ProcessSchema schema;

    std::string fresh(const std::string& prefix) {
        return prefix + std::to_string(counter++);
    }

    Block::Segment activity_segment() {
        Block::Segment seg;
        seg.kind = Block::Segment::Kind::Activity;
        seg.node_id = fresh("n");
        seg.label = pick(rng, opt.label_pool);
        --activities_left;
        return seg;
    }

    Block branch_block(int depth) {
        // every branch holds at least one activity so distinct branches never
        // produce identical node sequences
        Block b = build_block(depth + 1, rand_int(rng, 1, 2));
        if (b.segments.empty()) b.segments.push_back(activity_segment());
        return b;
    }

    Block build_block(int depth, int target_segments) {
        Block b;
        for (int i = 0; i < target_segments; ++i) {
            if (activities_left <= 0) break;
            int roll = rand_int(rng, 0, 9);
            if (depth < 2 && xor_left > 0 && activities_left >= 2 && roll < 3) {
                --xor_left;
                Block::Segment seg;
                seg.kind = Block::Segment::Kind::Xor;
                seg.split_id = fresh("xs");
                seg.join_id = fresh("xj");
                seg.branches.push_back(branch_block(depth));
                seg.branches.push_back(branch_block(depth));
                b.segments.push_back(std::move(seg));
            } else if (depth < 2 && and_left > 0 && activities_left >= 2 && roll < 6) {
                --and_left;
                Block::Segment seg;
                seg.kind = Block::Segment::Kind::And;
                seg.split_id = fresh("as");
                seg.join_id = fresh("aj");
                seg.branches.push_back(branch_block(depth));
                seg.branches.push_back(branch_block(depth));
                b.segments.push_back(std::move(seg));
            } else {
                b.segments.push_back(activity_segment());
            }
        }
        return b;
    }

    // entry node id and exit node id of a materialized block
    std::pair<std::string, std::string> materialize(const Block& b) {
        std::string entry, exit;
        for (const Block::Segment& seg : b.segments) {
            std::string seg_entry, seg_exit;
            if (seg.kind == Block::Segment::Kind::Activity) {
                schema.nodes.push_back(Node{seg.node_id, NodeKind::Activity, seg.label, {}});
                seg_entry = seg_exit = seg.node_id;
            } else {
                bool is_xor = seg.kind == Block::Segment::Kind::Xor;
                schema.nodes.push_back(
                    Node{seg.split_id, is_xor ? NodeKind::XorSplit : NodeKind::AndSplit, "", {}});
                schema.nodes.push_back(
                    Node{seg.join_id, is_xor ? NodeKind::XorJoin : NodeKind::AndJoin, "", {}});
                std::string element = "x_" + seg.split_id;
                if (is_xor && opt.with_guards)
                    schema.data_elements.push_back(DataElement{element, DataType::Integer, {}});
                int threshold = rand_int(rng, 10, 90);
                for (std::size_t i = 0; i < seg.branches.size(); ++i) {
                    auto [branch_entry, branch_exit] = materialize(seg.branches[i]);
                    ControlEdge in{seg.split_id, branch_entry, {}};
                    if (is_xor && opt.with_guards) {
                        FieldRef ref{"", element};
                        in.guard = Guard{DataExpr::compare(
                            ref, i == 0 ? CmpOp::Ge : CmpOp::Lt, std::int64_t{threshold})};
                    }
                    schema.control_edges.push_back(std::move(in));
                    schema.control_edges.push_back(ControlEdge{branch_exit, seg.join_id, {}});
                }
                seg_entry = seg.split_id;
                seg_exit = seg.join_id;
            }
            if (entry.empty())
                entry = seg_entry;
            else
                schema.control_edges.push_back(ControlEdge{exit, seg_entry, {}});
            exit = seg_exit;
        }
        return {entry, exit};
    }
};

std::vector<std::vector<std::string>> shuffles(const std::vector<std::string>& a,
                                               const std::vector<std::string>& b) {
    if (a.empty()) return {b};
    if (b.empty()) return {a};
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> a_rest(a.begin() + 1, a.end());
    for (auto& tail : shuffles(a_rest, b)) {
        std::vector<std::string> merged{a[0]};
        merged.insert(merged.end(), tail.begin(), tail.end());
        out.push_back(std::move(merged));
    }
    std::vector<std::string> b_rest(b.begin() + 1, b.end());
    for (auto& tail : shuffles(a, b_rest)) {
        std::vector<std::string> merged{b[0]};
        merged.insert(merged.end(), tail.begin(), tail.end());
        out.push_back(std::move(merged));
    }
    return out;
}

std::vector<std::vector<std::string>> paths_of_block(const Block& b) {
    std::vector<std::vector<std::string>> acc{{}};
    for (const Block::Segment& seg : b.segments) {
        std::vector<std::vector<std::string>> seg_paths;
        if (seg.kind == Block::Segment::Kind::Activity) {
            seg_paths.push_back({seg.node_id});
        } else if (seg.kind == Block::Segment::Kind::Xor) {
            for (const Block& branch : seg.branches) {
                for (auto& p : paths_of_block(branch)) {
                    std::vector<std::string> whole{seg.split_id};
                    whole.insert(whole.end(), p.begin(), p.end());
                    whole.push_back(seg.join_id);
                    seg_paths.push_back(std::move(whole));
                }
            }
        } else {
            for (auto& pa : paths_of_block(seg.branches[0])) {
                for (auto& pb : paths_of_block(seg.branches[1])) {
                    for (auto& merged : shuffles(pa, pb)) {
                        std::vector<std::string> whole{seg.split_id};
                        whole.insert(whole.end(), merged.begin(), merged.end());
                        whole.push_back(seg.join_id);
                        seg_paths.push_back(std::move(whole));
                    }
                }
            }
        }
        std::vector<std::vector<std::string>> next;
        for (const auto& prefix : acc) {
            for (const auto& sp : seg_paths) {
                std::vector<std::string> merged = prefix;
                merged.insert(merged.end(), sp.begin(), sp.end());
                next.push_back(std::move(merged));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

void labels_of_block(const Block& b, std::set<std::string>& out) {
    for (const Block::Segment& seg : b.segments) {
        if (seg.kind == Block::Segment::Kind::Activity) {
            out.insert(seg.label);
        } else {
            for (const Block& branch : seg.branches) labels_of_block(branch, out);
        }
    }
}

}  // namespace

GeneratedSchema random_schema(std::mt19937& rng, const SchemaGenOptions& options) {
    Builder builder{rng, options, rand_int(rng, 1, options.max_activities),
                    rand_int(rng, 0, options.max_xor), rand_int(rng, 0, options.max_and)};
    builder.schema.id = "generated";
    Block root = builder.build_block(0, rand_int(rng, 1, 3));
    if (root.segments.empty()) root.segments.push_back(builder.activity_segment());

    GeneratedSchema g;
    g.start_id = "start";
    g.end_id = "end";
    builder.schema.nodes.insert(builder.schema.nodes.begin(),
                                Node{g.start_id, NodeKind::Start, "", {}});
    builder.schema.nodes.push_back(Node{g.end_id, NodeKind::End, "", {}});
    auto [entry, exit] = builder.materialize(root);
    builder.schema.control_edges.push_back(ControlEdge{g.start_id, entry, {}});
    builder.schema.control_edges.push_back(ControlEdge{exit, g.end_id, {}});
    g.schema = std::move(builder.schema);
    g.root = std::move(root);
    g.schema.validate();
    return g;
}

std::vector<std::vector<std::string>> block_paths(const GeneratedSchema& g) {
    std::vector<std::vector<std::string>> out;
    for (auto& body : paths_of_block(g.root)) {
        std::vector<std::string> whole{g.start_id};
        whole.insert(whole.end(), body.begin(), body.end());
        whole.push_back(g.end_id);
        out.push_back(std::move(whole));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool block_parallel(const Block& root, const std::string& label_a, const std::string& label_b) {
    for (const Block::Segment& seg : root.segments) {
        if (seg.kind == Block::Segment::Kind::Activity) continue;
        if (seg.kind == Block::Segment::Kind::And) {
            std::set<std::string> left, right;
            labels_of_block(seg.branches[0], left);
            labels_of_block(seg.branches[1], right);
            if ((left.count(label_a) && right.count(label_b)) ||
                (left.count(label_b) && right.count(label_a)))
                return true;
        }
        for (const Block& branch : seg.branches)
            if (block_parallel(branch, label_a, label_b)) return true;
    }
    return false;
}

StructuralPattern random_pattern(std::mt19937& rng, const std::vector<std::string>& anchor_labels,
                                 const std::vector<std::string>& other_labels,
                                 const PatternGenOptions& options) {
    StructuralPattern p;
    int n_anchor = rand_int(rng, 1, options.max_anchors);
    int n_cons = rand_int(rng, 0, options.max_consequents);
    for (int i = 0; i < n_anchor; ++i)
        p.bindings.push_back(PatternBinding{"v" + std::to_string(i), pick(rng, anchor_labels), true});
    for (int i = 0; i < n_cons; ++i)
        p.bindings.push_back(PatternBinding{"v" + std::to_string(n_anchor + i),
                                            pick(rng, other_labels), false});
    int n_rel = rand_int(rng, 0, options.max_relations);
    for (int i = 0; i < n_rel && p.bindings.size() >= 2; ++i) {
        std::size_t l = static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<int>(p.bindings.size()) - 1));
        std::size_t r = static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<int>(p.bindings.size()) - 1));
        if (l == r) continue;
        Relation rel;
        rel.kind = options.allow_directly && rand_int(rng, 0, 3) == 0
                       ? Relation::Kind::DirectlyFollows
                       : Relation::Kind::EventuallyFollows;
        rel.left = p.bindings[l].var;
        rel.right = p.bindings[r].var;
        p.relations.push_back(std::move(rel));
    }
    if (options.allow_absence && rand_int(rng, 0, 3) == 0)
        p.absences.push_back(pick(rng, other_labels));
    return p;
}

namespace {

bool naive_relations(const StructuralPattern& p, const ProcessSchema& s, const Block& root,
                     const std::map<std::string, std::size_t>& pos,
                     const std::vector<std::size_t>& activity_positions, bool anchors_only) {
    for (const Relation& r : p.relations) {
        const PatternBinding* lb = p.binding(r.left);
        const PatternBinding* rb = p.binding(r.right);
        bool touches_consequent = (lb && !lb->anchor) || (rb && !rb->anchor);
        if (anchors_only == touches_consequent) continue;
        auto li = pos.find(r.left);
        auto ri = pos.find(r.right);
        if (li == pos.end() || ri == pos.end()) return false;
        switch (r.kind) {
            case Relation::Kind::EventuallyFollows:
                if (!(li->second < ri->second)) return false;
                break;
            case Relation::Kind::DirectlyFollows: {
                auto it = std::find(activity_positions.begin(), activity_positions.end(),
                                    li->second);
                if (it == activity_positions.end() ||
                    std::next(it) == activity_positions.end() || *std::next(it) != ri->second)
                    return false;
                break;
            }
            case Relation::Kind::ParallelWith:
                if (!block_parallel(root, lb->label, rb->label)) return false;
                break;
        }
    }
    return true;
}

}  // namespace

bool naive_holds(const StructuralPattern& p, const ProcessSchema& s, const Block& root,
                 const std::vector<std::string>& path_nodes,
                 const std::map<std::string, std::string>& anchor_binding) {
    auto label_at = [&](std::size_t i) -> std::string {
        const Node* n = s.node(path_nodes[i]);
        return n && n->kind == NodeKind::Activity ? n->label : std::string();
    };
    for (const std::string& absent : p.absences)
        for (std::size_t i = 0; i < path_nodes.size(); ++i)
            if (label_at(i) == absent) return false;

    std::vector<std::size_t> activity_positions;
    for (std::size_t i = 0; i < path_nodes.size(); ++i)
        if (!label_at(i).empty()) activity_positions.push_back(i);

    std::vector<PatternBinding> anchors = p.anchors();
    std::vector<PatternBinding> consequents = p.consequents();
    std::vector<std::vector<std::size_t>> anchor_placements;
    for (const PatternBinding& a : anchors) {
        std::vector<std::size_t> placements;
        auto bound = anchor_binding.find(a.var);
        if (bound == anchor_binding.end()) return true;
        for (std::size_t i = 0; i < path_nodes.size(); ++i)
            if (path_nodes[i] == bound->second) placements.push_back(i);
        if (placements.empty()) return true;  // not on this path
        anchor_placements.push_back(std::move(placements));
    }

    // iterate every anchor placement combination
    std::vector<std::size_t> idx(anchors.size(), 0);
    while (true) {
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < anchors.size(); ++i)
            pos[anchors[i].var] = anchor_placements[i][idx[i]];

        if (naive_relations(p, s, root, pos, activity_positions, true)) {
            // exhaustive search over consequent placements
            bool found = consequents.empty() &&
                         naive_relations(p, s, root, pos, activity_positions, false);
            if (!consequents.empty()) {
                std::vector<std::vector<std::size_t>> cons_placements;
                for (const PatternBinding& c : consequents) {
                    std::vector<std::size_t> placements;
                    for (std::size_t i : activity_positions)
                        if (label_at(i) == c.label) placements.push_back(i);
                    cons_placements.push_back(std::move(placements));
                }
                std::vector<std::size_t> cidx(consequents.size(), 0);
                bool exhausted = std::any_of(cons_placements.begin(), cons_placements.end(),
                                             [](const auto& v) { return v.empty(); });
                while (!exhausted) {
                    for (std::size_t i = 0; i < consequents.size(); ++i)
                        pos[consequents[i].var] = cons_placements[i][cidx[i]];
                    if (naive_relations(p, s, root, pos, activity_positions, false)) {
                        found = true;
                        break;
                    }
                    std::size_t i = consequents.size();
                    exhausted = true;
                    while (i > 0) {
                        --i;
                        if (++cidx[i] < cons_placements[i].size()) {
                            exhausted = false;
                            break;
                        }
                        cidx[i] = 0;
                    }
                }
                for (const PatternBinding& c : consequents) pos.erase(c.var);
            }
            if (!found) return false;
        }

        std::size_t i = anchors.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++idx[i] < anchor_placements[i].size()) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
        if (done) return true;
    }
}

int naive_design_verdict(const StructuralPattern& p, const ProcessSchema& s, const Block& root,
                         const std::vector<std::vector<std::string>>& paths) {
    // enumerate anchor bindings: product over label-matching activity nodes
    std::vector<PatternBinding> anchors = p.anchors();
    std::vector<std::vector<std::string>> candidates;
    for (const PatternBinding& a : anchors) {
        std::vector<std::string> nodes;
        for (const Node& n : s.nodes)
            if (n.kind == NodeKind::Activity && n.label == a.label) nodes.push_back(n.id);
        std::sort(nodes.begin(), nodes.end());
        candidates.push_back(std::move(nodes));
    }
    std::vector<std::map<std::string, std::string>> bindings;
    std::vector<std::size_t> pickv(anchors.size(), 0);
    while (true) {
        std::map<std::string, std::string> b;
        for (std::size_t i = 0; i < anchors.size(); ++i) b[anchors[i].var] = candidates[i][pickv[i]];
        bindings.push_back(std::move(b));
        std::size_t i = anchors.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++pickv[i] < candidates[i].size()) {
                done = false;
                break;
            }
            pickv[i] = 0;
        }
        if (done) break;
    }

    std::size_t ok = 0, fail = 0;
    for (const auto& path : paths) {
        for (const auto& binding : bindings) {
            bool on_path = true;
            for (const auto& [var, node] : binding) {
                (void)var;
                if (std::find(path.begin(), path.end(), node) == path.end()) on_path = false;
            }
            if (!on_path) continue;
            if (naive_holds(p, s, root, path, binding))
                ++ok;
            else
                ++fail;
        }
    }
    if (fail == 0) return 0;       // satisfied
    if (ok == 0) return 1;         // violated
    return 2;                      // possibly violated
}

bool valid_walk(const ProcessSchema& s, const std::vector<std::string>& nodes) {
    if (nodes.empty()) return false;

    std::function<bool(std::size_t, std::map<std::size_t, int>&)> step =
        [&](std::size_t idx, std::map<std::size_t, int>& tokens) -> bool {
        if (idx == nodes.size()) {
            for (const auto& [e, count] : tokens) {
                (void)e;
                if (count != 0) return false;
            }
            return true;
        }
        const Node* n = s.node(nodes[idx]);
        if (!n) return false;
        auto in = s.incoming(n->id);
        auto out = s.outgoing(n->id);
        auto consume = [&](std::size_t e) { --tokens[e]; };
        auto produce = [&](std::size_t e) { ++tokens[e]; };
        auto has = [&](std::size_t e) {
            auto it = tokens.find(e);
            return it != tokens.end() && it->second > 0;
        };
        switch (n->kind) {
            case NodeKind::Start: {
                if (idx != 0) return false;
                produce(out[0]);
                bool r = step(idx + 1, tokens);
                consume(out[0]);
                return r;
            }
            case NodeKind::End: {
                for (std::size_t e : in) {
                    if (!has(e)) continue;
                    consume(e);
                    bool r = idx + 1 == nodes.size() && step(idx + 1, tokens);
                    produce(e);
                    if (r) return true;
                }
                return false;
            }
            case NodeKind::Activity:
            case NodeKind::XorJoin: {
                for (std::size_t e : in) {
                    if (!has(e)) continue;
                    consume(e);
                    produce(out[0]);
                    bool r = step(idx + 1, tokens);
                    consume(out[0]);
                    produce(e);
                    if (r) return true;
                }
                return false;
            }
            case NodeKind::XorSplit: {
                if (!has(in[0])) return false;
                for (std::size_t o : out) {
                    consume(in[0]);
                    produce(o);
                    bool r = step(idx + 1, tokens);
                    consume(o);
                    produce(in[0]);
                    if (r) return true;
                }
                return false;
            }
            case NodeKind::AndSplit: {
                if (!has(in[0])) return false;
                consume(in[0]);
                for (std::size_t o : out) produce(o);
                bool r = step(idx + 1, tokens);
                for (std::size_t o : out) consume(o);
                produce(in[0]);
                return r;
            }
            case NodeKind::AndJoin: {
                for (std::size_t e : in)
                    if (!has(e)) return false;
                for (std::size_t e : in) consume(e);
                produce(out[0]);
                bool r = step(idx + 1, tokens);
                consume(out[0]);
                for (std::size_t e : in) produce(e);
                return r;
            }
        }
        return false;
    };

    std::map<std::size_t, int> tokens;
    return nodes.front() == s.start_node().id && nodes.back() == s.end_node().id &&
           step(0, tokens);
}

Trace linearize(const ProcessSchema& s, const ExecutionPath& path, const std::string& instance_id,
                Timestamp start, Timestamp step_ms) {
    Trace t;
    t.instance_id = instance_id;
    t.process_type = s.id;
    Timestamp now = start;
    int counter = 0;
    for (const std::string& label : path.activity_labels(s)) {
        std::string occ = instance_id + "-o" + std::to_string(counter++);
        Event begin;
        begin.kind = EventKind::Start;
        begin.activity_label = label;
        begin.occurrence_id = occ;
        begin.timestamp = now;
        now += step_ms;
        Event done = begin;
        done.kind = EventKind::Complete;
        done.timestamp = now;
        now += step_ms;
        t.events.push_back(std::move(begin));
        t.events.push_back(std::move(done));
    }
    return t;
}

}  // namespace iupc::testing
