#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace semcom {

struct Arc {
    std::string from;
    std::string action;
    std::string to;

    auto operator<=>(const Arc&) const = default;
};

/// Directed object-action graph.
class KnowledgeGraph {
public:
    void add_vertex(const std::string& name);
    /// Both endpoints must already exist; duplicate triples are rejected.
    void add_arc(const std::string& from, const std::string& action, const std::string& to);

    bool has_vertex(const std::string& name) const { return vertices_.contains(name); }
    bool has_arc(const Arc& arc) const { return arcs_.contains(arc); }

    const std::set<std::string>& vertices() const { return vertices_; }
    const std::set<Arc>& arcs() const { return arcs_; }

    /// Outgoing arcs ordered by (to, action).
    std::vector<Arc> outgoing(const std::string& from) const;

private:
    std::set<std::string> vertices_;
    std::set<Arc> arcs_;
    std::map<std::string, std::vector<Arc>> out_;
};

/// nu_0 -a_1-> nu_1 ... -a_u-> nu_u.
struct KnowledgePath {
    std::vector<std::string> vertices;
    std::vector<std::string> actions;

    std::size_t length() const { return actions.size(); }
    std::set<std::string> objects() const { return {vertices.begin(), vertices.end()}; }

    bool operator==(const KnowledgePath&) const = default;
};

/// Every (from, action, to) step of the path is an arc of the graph.
bool path_in_graph(const KnowledgeGraph& kg, const KnowledgePath& path);

/// Simple directed paths start -> goal with at most max_depth actions, in
/// lexicographic order of (vertex sequence, action sequence), at most max_paths of them.
std::vector<KnowledgePath> find_paths(const KnowledgeGraph& kg, const std::string& start,
                                      const std::string& goal, std::size_t max_depth,
                                      std::size_t max_paths);

}  // namespace semcom
