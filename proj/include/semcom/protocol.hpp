#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semcom/feature_channel.hpp"
#include "semcom/gm_model.hpp"
#include "semcom/knowledge_graph.hpp"
#include "semcom/semantic_match.hpp"

namespace semcom {

enum class ProtocolStatus { exploring, hit, failed_timeout, infeasible };

std::string to_string(ProtocolStatus status);

struct Recognition {
    double confidence = 0.0;
    std::size_t views = 0;
    bool recognized = false;
};

struct ProtocolState {
    std::vector<KnowledgePath> paths;
    /// Classifier labels matched to some task object.
    std::set<std::string> relevant;
    /// Task object -> labels that match it. Objects absent here match their own name.
    std::map<std::string, std::set<std::string>> object_labels;
    std::map<std::string, Recognition> recognized;
    double exploration_s = 0.0;
    double transmission_s = 0.0;
    ProtocolStatus status = ProtocolStatus::exploring;
    std::optional<std::size_t> hit_path;
    std::vector<std::string> trace;

    double elapsed_s() const { return exploration_s + transmission_s; }
};

/// Records one classification; the label counts as recognized once a confidence
/// reaches xi (inclusive). The highest confidence seen is kept.
void update_recognition(ProtocolState& state, const std::string& label, double confidence, double xi);

/// Lowest path index whose objects are all recognized.
std::optional<std::size_t> check_path_hit(const ProtocolState& state,
                                          const std::vector<KnowledgePath>& paths);

struct TaskSpec {
    std::string start;
    std::string goal;
    /// When non-empty, used instead of path finding; each entry is an object chain.
    std::vector<std::vector<std::string>> explicit_paths;
};

struct ProtocolConfig {
    SemanticMatchConfig match;
    FeasibilityMode feasibility = FeasibilityMode::subset;
    double xi = 0.9;
    std::size_t max_depth = 8;
    std::size_t max_paths = 16;
    std::size_t max_views = 64;
    double time_limit_s = 1e9;
};

struct EnvironmentObject {
    std::string name;
    std::size_t true_class = 0;
};

/// Objects met in order, with Exp(arrival_rate) gaps between arrivals.
struct Environment {
    std::vector<EnvironmentObject> objects;
    double arrival_rate = 1.0;
};

/// Server-side classifier plus the uplink that feeds it.
struct ClassifierSetup {
    GmModel model;
    std::vector<std::string> class_names;
    LinkConfig link;
    double scale = 1.0;
};

/// Steps 1-7: path finding, semantic matching, feasibility, then exploration
/// until a path is hit, the environment is exhausted or time runs out.
ProtocolState run_protocol(const KnowledgeGraph& kg, const TaskSpec& task, const ProtocolConfig& cfg,
                           const Environment& env, const ClassifierSetup& classifier,
                           std::uint64_t seed);

}  // namespace semcom
