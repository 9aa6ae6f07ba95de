#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/knowledge_graph.hpp"

namespace semcom {

/// Maps a word to a fixed-length vector; deterministic per provider and word.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string id() const = 0;
    virtual Eigen::VectorXd embed(std::string_view word) const = 0;
};

/// Signed feature hashing of lower-cased character trigrams (with word
/// boundary padding) into 64 dimensions, L2-normalised.
class TrigramHashEmbedding final : public EmbeddingProvider {
public:
    static constexpr int kDims = 64;
    std::string id() const override { return "trigram_hash"; }
    Eigen::VectorXd embed(std::string_view word) const override;
};

/// Rewrites words through a synonym table before delegating to trigram hashing.
class SynonymEmbedding final : public EmbeddingProvider {
public:
    explicit SynonymEmbedding(std::map<std::string, std::string> canonical);
    std::string id() const override { return "synonym_table"; }
    Eigen::VectorXd embed(std::string_view word) const override;

    const std::map<std::string, std::string>& table() const { return canonical_; }

private:
    std::map<std::string, std::string> canonical_;
    TrigramHashEmbedding base_;
};

/// "trigram_hash" or "synonym_table"; unknown ids raise a config error.
std::shared_ptr<const EmbeddingProvider> make_embedding_provider(
    const std::string& id, std::map<std::string, std::string> synonyms = {});

enum class DistanceMetric { cosine, euclidean };

struct SemanticMatchConfig {
    std::shared_ptr<const EmbeddingProvider> provider = std::make_shared<TrigramHashEmbedding>();
    DistanceMetric metric = DistanceMetric::cosine;
    double epsilon = 0.1;

    void validate() const;
};

/// 1 - cos for cosine, L2 norm of the difference for euclidean.
double semantic_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, DistanceMetric metric);

/// Labels within epsilon of at least one task object.
std::set<std::string> semantic_match(const std::set<std::string>& task_objects,
                                     const std::set<std::string>& labels,
                                     const SemanticMatchConfig& cfg);

/// For each task object, the labels within epsilon of it.
std::map<std::string, std::set<std::string>> match_table(const std::set<std::string>& task_objects,
                                                         const std::set<std::string>& labels,
                                                         const SemanticMatchConfig& cfg);

enum class FeasibilityMode { subset, intersect };

/// Object set of each path covered by (subset) or touching (intersect) the
/// relevant objects; the set holds KG object names.
bool check_feasibility(const std::vector<KnowledgePath>& paths, const std::set<std::string>& covered,
                       FeasibilityMode mode = FeasibilityMode::subset);

}  // namespace semcom
