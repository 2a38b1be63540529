#include "iupc/paths.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "iupc/errors.hpp"

namespace iupc {

std::vector<std::size_t> ExecutionPath::activity_positions(const ProcessSchema& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node* n = s.node(nodes[i]);
        if (n && n->kind == NodeKind::Activity) out.push_back(i);
    }
    return out;
}

std::vector<std::string> ExecutionPath::activity_labels(const ProcessSchema& s) const {
    std::vector<std::string> out;
    for (std::size_t i : activity_positions(s)) out.push_back(s.node(nodes[i])->label);
    return out;
}

namespace {

// Token game over edge markings: every reachable firing sequence from start to
// end, with each edge produced at most loop_bound times per path.
class Enumerator {
public:
    Enumerator(const ProcessSchema& schema, const PathOptions& options)
        : s_(schema), opt_(options) {
        for (const Node& n : s_.nodes) node_order_.push_back(&n);
        std::sort(node_order_.begin(), node_order_.end(),
                  [](const Node* a, const Node* b) { return a->id < b->id; });
        for (const Node& n : s_.nodes) {
            out_edges_[n.id] = s_.outgoing(n.id);
            in_edges_[n.id] = s_.incoming(n.id);
        }
        step_cap_ = opt_.max_paths * 20 + 10'000;
    }

    std::vector<ExecutionPath> run() {
        tokens_.assign(s_.control_edges.size(), 0);
        traversals_.assign(s_.control_edges.size(), 0);
        const Node& start = s_.start_node();
        path_.push_back(start.id);
        std::size_t out = out_edges_.at(start.id)[0];
        produce(out);
        dfs();
        std::sort(results_.begin(), results_.end(),
                  [](const ExecutionPath& a, const ExecutionPath& b) { return a.nodes < b.nodes; });
        return std::move(results_);
    }

private:
    bool can_produce(std::size_t edge) const {
        return traversals_[edge] < opt_.loop_bound;
    }

    void produce(std::size_t edge) {
        ++tokens_[edge];
        ++traversals_[edge];
    }

    void unproduce(std::size_t edge) {
        --tokens_[edge];
        --traversals_[edge];
    }

    bool no_tokens() const {
        return std::all_of(tokens_.begin(), tokens_.end(), [](int t) { return t == 0; });
    }

    void record() {
        if (!seen_.insert(path_).second) return;
        results_.push_back(ExecutionPath{path_, guards_});
        if (results_.size() > opt_.max_paths)
            throw PathExplosion("schema '" + s_.id + "': more than " +
                                std::to_string(opt_.max_paths) + " execution paths");
    }

    void fire(const Node& n, const std::vector<std::size_t>& consumed,
              const std::vector<std::size_t>& produced, const Guard* guard) {
        for (std::size_t e : consumed) --tokens_[e];
        for (std::size_t e : produced) produce(e);
        path_.push_back(n.id);
        if (guard) guards_.push_back(guard->expr);
        dfs();
        if (guard) guards_.pop_back();
        path_.pop_back();
        for (std::size_t e : produced) unproduce(e);
        for (std::size_t e : consumed) ++tokens_[e];
    }

    void dfs() {
        if (++steps_ > step_cap_)
            throw PathExplosion("schema '" + s_.id + "': path enumeration state explosion");
        for (const Node* n : node_order_) {
            const auto& in = in_edges_.at(n->id);
            const auto& out = out_edges_.at(n->id);
            switch (n->kind) {
                case NodeKind::Start:
                    break;  // fires exactly once, before the search
                case NodeKind::End:
                    for (std::size_t e : in) {
                        if (tokens_[e] == 0) continue;
                        --tokens_[e];
                        path_.push_back(n->id);
                        if (no_tokens()) record();  // stranded tokens: unsound completion
                        path_.pop_back();
                        ++tokens_[e];
                    }
                    break;
                case NodeKind::Activity:
                case NodeKind::XorJoin:
                    for (std::size_t e : in) {
                        if (tokens_[e] == 0 || !can_produce(out[0])) continue;
                        fire(*n, {e}, {out[0]}, nullptr);
                    }
                    break;
                case NodeKind::XorSplit: {
                    if (tokens_[in[0]] == 0) break;
                    for (std::size_t o : out) {
                        if (!can_produce(o)) continue;
                        const auto& guard = s_.control_edges[o].guard;
                        fire(*n, {in[0]}, {o}, guard ? &*guard : nullptr);
                    }
                    break;
                }
                case NodeKind::AndSplit: {
                    if (tokens_[in[0]] == 0) break;
                    bool ok = std::all_of(out.begin(), out.end(),
                                          [&](std::size_t o) { return can_produce(o); });
                    if (ok) fire(*n, {in[0]}, out, nullptr);
                    break;
                }
                case NodeKind::AndJoin: {
                    bool ready = std::all_of(in.begin(), in.end(),
                                             [&](std::size_t e) { return tokens_[e] > 0; });
                    if (ready && can_produce(out[0])) fire(*n, in, {out[0]}, nullptr);
                    break;
                }
            }
        }
    }

    const ProcessSchema& s_;
    PathOptions opt_;
    std::vector<const Node*> node_order_;
    std::map<std::string, std::vector<std::size_t>> out_edges_, in_edges_;
    std::vector<int> tokens_;
    std::vector<int> traversals_;
    std::vector<std::string> path_;
    std::vector<DataExpr> guards_;
    std::set<std::vector<std::string>> seen_;
    std::vector<ExecutionPath> results_;
    std::size_t steps_ = 0;
    std::size_t step_cap_ = 0;
};

}  // namespace

std::vector<ExecutionPath> enumerate_paths(const ProcessSchema& schema,
                                           const PathOptions& options) {
    if (options.loop_bound < 1) throw ModelError("loop bound must be at least 1");
    return Enumerator(schema, options).run();
}

PathFacts path_facts(const ProcessSchema& schema, const ExecutionPath& path, bool& infeasible) {
    PathFacts facts;
    infeasible = false;
    std::size_t guard_index = 0;
    for (const std::string& node_id : path.nodes) {
        const Node* n = schema.node(node_id);
        if (!n) continue;
        if (n->kind == NodeKind::Activity) {
            for (const DataEdge& e : schema.data_edges)
                if (e.activity == node_id && e.mode == AccessMode::Write) facts.erase(e.element);
        } else if (n->kind == NodeKind::XorSplit && guard_index < path.guards.size()) {
            apply_guard_facts(facts, path.guards[guard_index++]);
            if (facts_contradictory(facts)) infeasible = true;
        }
    }
    return facts;
}

}  // namespace iupc
