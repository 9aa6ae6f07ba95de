#include "semcom/protocol.hpp"

#include <algorithm>
#include <random>

#include "semcom/csv.hpp"
#include "semcom/errors.hpp"
#include "semcom/margin_classifier.hpp"
#include "semcom/random.hpp"

namespace semcom {

namespace {

bool object_recognized(const ProtocolState& state, const std::string& object) {
    auto recognized = [&](const std::string& label) {
        const auto it = state.recognized.find(label);
        return it != state.recognized.end() && it->second.recognized;
    };
    const auto it = state.object_labels.find(object);
    if (it == state.object_labels.end()) return recognized(object);
    return std::any_of(it->second.begin(), it->second.end(), recognized);
}

std::string join(const std::set<std::string>& items) {
    std::string out = "{";
    for (const auto& s : items) {
        if (out.size() > 1) out += ", ";
        out += s;
    }
    return out + "}";
}

std::string describe(const KnowledgePath& path) {
    std::string out = path.vertices.front();
    for (std::size_t i = 0; i < path.actions.size(); ++i) {
        out += path.actions[i].empty() ? " -> " : " -" + path.actions[i] + "-> ";
        out += path.vertices[i + 1];
    }
    return out;
}

std::vector<KnowledgePath> task_paths(const KnowledgeGraph& kg, const TaskSpec& task,
                                      const ProtocolConfig& cfg) {
    if (task.explicit_paths.empty()) {
        return find_paths(kg, task.start, task.goal, cfg.max_depth, cfg.max_paths);
    }
    std::vector<KnowledgePath> paths;
    for (const auto& chain : task.explicit_paths) {
        if (chain.empty()) throw ConfigError("task: empty explicit path");
        KnowledgePath p;
        p.vertices = chain;
        p.actions.assign(chain.size() - 1, "");
        paths.push_back(std::move(p));
    }
    return paths;
}

}  // namespace

std::string to_string(ProtocolStatus status) {
    switch (status) {
    case ProtocolStatus::exploring: return "exploring";
    case ProtocolStatus::hit: return "hit";
    case ProtocolStatus::failed_timeout: return "failed_timeout";
    case ProtocolStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

void update_recognition(ProtocolState& state, const std::string& label, double confidence, double xi) {
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw DomainError("update_recognition: confidence must lie in [0, 1]");
    }
    Recognition& r = state.recognized[label];
    r.confidence = std::max(r.confidence, confidence);
    ++r.views;
    if (confidence >= xi) r.recognized = true;
}

std::optional<std::size_t> check_path_hit(const ProtocolState& state,
                                          const std::vector<KnowledgePath>& paths) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto objects = paths[i].objects();
        if (std::all_of(objects.begin(), objects.end(),
                        [&](const std::string& o) { return object_recognized(state, o); })) {
            return i;
        }
    }
    return std::nullopt;
}

ProtocolState run_protocol(const KnowledgeGraph& kg, const TaskSpec& task, const ProtocolConfig& cfg,
                           const Environment& env, const ClassifierSetup& classifier,
                           std::uint64_t seed) {
    if (!(cfg.xi > 0.0 && cfg.xi < 1.0)) throw ConfigError("protocol: xi must lie in (0, 1)");
    if (cfg.max_views < 1) throw ConfigError("protocol: max_views must be >= 1");
    if (!(env.arrival_rate > 0.0)) throw ConfigError("protocol: arrival_rate must be positive");
    if (classifier.class_names.size() != classifier.model.num_classes()) {
        throw ConfigError("protocol: one class name per model class required");
    }

    ProtocolState state;
    state.paths = task_paths(kg, task, cfg);
    state.trace.push_back("step 1: " + std::to_string(state.paths.size()) + " knowledge path(s)");
    for (std::size_t i = 0; i < state.paths.size(); ++i) {
        state.trace.push_back("  path " + std::to_string(i) + ": " + describe(state.paths[i]));
    }

    std::set<std::string> objects;
    for (const auto& p : state.paths) {
        const auto o = p.objects();
        objects.insert(o.begin(), o.end());
    }
    const std::set<std::string> labels(classifier.class_names.begin(), classifier.class_names.end());
    state.object_labels = match_table(objects, labels, cfg.match);
    std::set<std::string> covered;
    for (const auto& [object, hits] : state.object_labels) {
        state.relevant.insert(hits.begin(), hits.end());
        if (!hits.empty()) covered.insert(object);
    }
    state.trace.push_back("step 2: relevant labels " + join(state.relevant));

    if (!check_feasibility(state.paths, covered, cfg.feasibility)) {
        state.status = ProtocolStatus::infeasible;
        state.trace.push_back("step 3: infeasible");
        return state;
    }
    state.trace.push_back("step 3: feasible");

    const PreparedLink link(classifier.link, classifier.model.dims());
    const double noise = error_variance(classifier.link.bits_per_feature, link.point().p_b) /
                         (classifier.scale * classifier.scale);
    Rng arrivals = make_stream(seed, "arrivals");
    std::exponential_distribution<double> gap(env.arrival_rate);

    for (std::size_t k = 0; k < env.objects.size(); ++k) {
        if (state.elapsed_s() >= cfg.time_limit_s) break;
        const EnvironmentObject& obj = env.objects[k];
        if (obj.true_class >= classifier.model.num_classes()) {
            throw ConfigError("protocol: environment object '" + obj.name + "' has an unknown class");
        }
        state.exploration_s += gap(arrivals);
        if (state.elapsed_s() > cfg.time_limit_s) break;
        state.trace.push_back("step 4: object " + std::to_string(k) + " (" + obj.name + ") at t=" +
                              format_double(state.elapsed_s()));

        Rng views_rng = make_stream(derive_seed(seed, "views"), k);
        FeatureVector sum = FeatureVector::Zero(static_cast<Eigen::Index>(classifier.model.dims()));
        for (std::size_t m = 1; m <= cfg.max_views; ++m) {
            const FeatureVector x = sample(classifier.model, obj.true_class, views_rng);
            const TransmitResult tx = link.transmit(x, classifier.scale, 1, views_rng);
            state.transmission_s += tx.latency_s;
            sum += tx.received;
            const ClassificationOutcome out =
                classify_ovo(classifier.model, sum / static_cast<double>(m),
                             Variance{noise, classifier.model.units()}, m);
            const std::string& name = classifier.class_names[out.label];
            update_recognition(state, name, out.confidence, cfg.xi);
            state.trace.push_back("step 5: view " + std::to_string(m) + " label=" + name +
                                  " confidence=" + format_double(out.confidence));
            if (out.confidence >= cfg.xi) break;
        }

        if (const auto hit = check_path_hit(state, state.paths)) {
            state.status = ProtocolStatus::hit;
            state.hit_path = hit;
            state.trace.push_back("step 6: path " + std::to_string(*hit) + " hit");
            state.trace.push_back("step 7: execute " + describe(state.paths[*hit]));
            return state;
        }
    }
    state.status = ProtocolStatus::failed_timeout;
    state.trace.push_back("step 7: stopped without a hit at t=" + format_double(state.elapsed_s()));
    return state;
}

}  // namespace semcom
