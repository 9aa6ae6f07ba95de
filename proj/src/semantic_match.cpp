#include "semcom/semantic_match.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "semcom/errors.hpp"
#include "semcom/random.hpp"

namespace semcom {

namespace {

std::string lower(std::string_view word) {
    std::string s(word);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

Eigen::VectorXd TrigramHashEmbedding::embed(std::string_view word) const {
    if (word.empty()) throw DomainError("embed: empty word");
    const std::string padded = "^" + lower(word) + "$";
    Eigen::VectorXd v = Eigen::VectorXd::Zero(kDims);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        const std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, 3));
        v[static_cast<Eigen::Index>(h % kDims)] += (h >> 63) ? -1.0 : 1.0;
    }
    const double n = v.norm();
    // a word whose trigrams cancel exactly still needs a direction
    if (n == 0.0) {
        v[static_cast<Eigen::Index>(fnv1a64(padded) % kDims)] = 1.0;
        return v;
    }
    return v / n;
}

SynonymEmbedding::SynonymEmbedding(std::map<std::string, std::string> canonical) {
    for (auto& [k, v] : canonical) canonical_.emplace(lower(k), lower(v));
}

Eigen::VectorXd SynonymEmbedding::embed(std::string_view word) const {
    const std::string key = lower(word);
    const auto it = canonical_.find(key);
    return base_.embed(it == canonical_.end() ? key : it->second);
}

std::shared_ptr<const EmbeddingProvider> make_embedding_provider(
    const std::string& id, std::map<std::string, std::string> synonyms) {
    if (id == "trigram_hash") return std::make_shared<TrigramHashEmbedding>();
    if (id == "synonym_table") return std::make_shared<SynonymEmbedding>(std::move(synonyms));
    throw ConfigError("unknown embedding provider '" + id + "'");
}

void SemanticMatchConfig::validate() const {
    if (!provider) throw ConfigError("semantic match: no embedding provider");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("semantic match: epsilon must be finite and >= 0");
    }
}

double semantic_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, DistanceMetric metric) {
    if (a.size() != b.size()) throw DomainError("semantic_distance: length mismatch");
    if (metric == DistanceMetric::euclidean) return (a - b).norm();
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw DomainError("semantic_distance: zero vector");
    return std::max(0.0, 1.0 - a.dot(b) / (na * nb));
}

std::map<std::string, std::set<std::string>> match_table(const std::set<std::string>& task_objects,
                                                         const std::set<std::string>& labels,
                                                         const SemanticMatchConfig& cfg) {
    cfg.validate();
    std::map<std::string, Eigen::VectorXd> label_vec;
    for (const auto& l : labels) label_vec.emplace(l, cfg.provider->embed(l));
    std::map<std::string, std::set<std::string>> table;
    for (const auto& j : task_objects) {
        const Eigen::VectorXd vj = cfg.provider->embed(j);
        auto& hits = table[j];
        for (const auto& [l, vl] : label_vec) {
            if (semantic_distance(vl, vj, cfg.metric) <= cfg.epsilon) hits.insert(l);
        }
    }
    return table;
}

std::set<std::string> semantic_match(const std::set<std::string>& task_objects,
                                     const std::set<std::string>& labels,
                                     const SemanticMatchConfig& cfg) {
    std::set<std::string> relevant;
    for (const auto& [object, hits] : match_table(task_objects, labels, cfg)) {
        relevant.insert(hits.begin(), hits.end());
    }
    return relevant;
}

bool check_feasibility(const std::vector<KnowledgePath>& paths, const std::set<std::string>& covered,
                       FeasibilityMode mode) {
    if (covered.empty()) return false;
    for (const auto& path : paths) {
        const auto objects = path.objects();
        if (mode == FeasibilityMode::subset) {
            if (std::includes(covered.begin(), covered.end(), objects.begin(), objects.end())) return true;
        } else if (std::any_of(objects.begin(), objects.end(),
                               [&](const std::string& o) { return covered.contains(o); })) {
            return true;
        }
    }
    return false;
}

}  // namespace semcom
