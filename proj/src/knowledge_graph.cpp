#include "semcom/knowledge_graph.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "semcom/errors.hpp"

namespace semcom {

void KnowledgeGraph::add_vertex(const std::string& name) {
    if (name.empty()) throw ConfigError("knowledge graph: empty vertex name");
    vertices_.insert(name);
}

void KnowledgeGraph::add_arc(const std::string& from, const std::string& action,
                             const std::string& to) {
    if (!has_vertex(from)) throw LookupError("knowledge graph: unknown vertex '" + from + "'");
    if (!has_vertex(to)) throw LookupError("knowledge graph: unknown vertex '" + to + "'");
    Arc arc{from, action, to};
    if (!arcs_.insert(arc).second) {
        throw ConfigError("knowledge graph: duplicate arc " + from + " -" + action + "-> " + to);
    }
    auto& list = out_[from];
    list.insert(std::upper_bound(list.begin(), list.end(), arc,
                                 [](const Arc& a, const Arc& b) {
                                     return std::tie(a.to, a.action) < std::tie(b.to, b.action);
                                 }),
                std::move(arc));
}

std::vector<Arc> KnowledgeGraph::outgoing(const std::string& from) const {
    const auto it = out_.find(from);
    return it == out_.end() ? std::vector<Arc>{} : it->second;
}

bool path_in_graph(const KnowledgeGraph& kg, const KnowledgePath& path) {
    if (path.vertices.empty() || path.actions.size() + 1 != path.vertices.size()) return false;
    for (std::size_t i = 0; i < path.actions.size(); ++i) {
        if (!kg.has_arc({path.vertices[i], path.actions[i], path.vertices[i + 1]})) return false;
    }
    return true;
}

std::vector<KnowledgePath> find_paths(const KnowledgeGraph& kg, const std::string& start,
                                      const std::string& goal, std::size_t max_depth,
                                      std::size_t max_paths) {
    if (!kg.has_vertex(start)) throw LookupError("find_paths: unknown start '" + start + "'");
    if (!kg.has_vertex(goal)) throw LookupError("find_paths: unknown goal '" + goal + "'");

    std::vector<KnowledgePath> found;
    if (max_paths == 0) return found;
    KnowledgePath current{{start}, {}};
    std::set<std::string> on_path{start};
    if (start == goal) {
        found.push_back(current);
        return found;
    }

    // Walk distinct vertex sequences in order; parallel arcs between the same
    // pair are expanded only at the goal, so output stays sorted by
    // (vertices, actions) and the cap can stop the search early.
    std::vector<std::vector<std::string>> step_actions;
    std::function<void(const KnowledgePath&, std::size_t)> emit = [&](const KnowledgePath& p, std::size_t i) {
        if (found.size() >= max_paths) return;
        if (i == step_actions.size()) {
            found.push_back(p);
            return;
        }
        for (const auto& a : step_actions[i]) {
            KnowledgePath q = p;
            q.actions.push_back(a);
            emit(q, i + 1);
        }
    };
    std::function<void(const std::string&)> dfs = [&](const std::string& at) {
        if (step_actions.size() >= max_depth) return;
        const std::vector<Arc> arcs = kg.outgoing(at);
        for (std::size_t i = 0; i < arcs.size() && found.size() < max_paths;) {
            const std::string& to = arcs[i].to;
            std::vector<std::string> actions;
            for (; i < arcs.size() && arcs[i].to == to; ++i) actions.push_back(arcs[i].action);
            if (on_path.contains(to)) continue;
            current.vertices.push_back(to);
            step_actions.push_back(std::move(actions));
            if (to == goal) {
                emit(KnowledgePath{current.vertices, {}}, 0);
            } else {
                on_path.insert(to);
                dfs(to);
                on_path.erase(to);
            }
            current.vertices.pop_back();
            step_actions.pop_back();
        }
    };
    dfs(start);
    return found;
}

}  // namespace semcom
