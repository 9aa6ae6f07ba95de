#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "semcom/feature_channel.hpp"
#include "semcom/gm_model.hpp"
#include "semcom/margin_classifier.hpp"
#include "semcom/worker_pool.hpp"

namespace semcom {

enum class Enhancement { none, retransmission, multiview };

struct ExplorationScenario {
    double arrival_rate = 1.0;
    std::size_t num_objects = 30;
    double relevant_fraction = 0.8;
    std::vector<std::size_t> path_lengths{10, 10, 10};
    LinkConfig link;
    GmModel model = make_binary_model(100, 1.0, 1.0);
    double scale = 1.0;
    double xi = 0.9;
    std::size_t max_views_per_object = 64;
    double time_limit_s = std::numeric_limits<double>::infinity();
    Enhancement enhancement = Enhancement::multiview;
    /// Used to size retransmissions: cluster mass and the count formula variant.
    double zeta = 0.95;
    RetransmissionVariant variant = RetransmissionVariant::minus_one;

    void validate() const;
};

struct EnvironmentAssignment {
    std::vector<std::size_t> labels;
    /// Path index per object, empty for objects on no path.
    std::vector<std::optional<std::size_t>> path_of;
    std::size_t relevant_count = 0;
};

/// floor(fraction * K) objects are task relevant and carry labels from the
/// first classes; the first sum(path_lengths) of them are split over the paths.
EnvironmentAssignment assign_environment(const ExplorationScenario& scenario, Rng& rng);

struct LatencyRecord {
    double exploration_time_s = 0.0;
    double transmission_time_s = 0.0;
    std::size_t total_views = 0;
    std::size_t objects_encountered = 0;
    std::optional<std::size_t> hit_path;
    bool success = false;

    double total_time_s() const { return exploration_time_s + transmission_time_s; }
};

/// Reusable per-scenario state (prepared link, retransmission count).
class EpisodeSimulator {
public:
    explicit EpisodeSimulator(ExplorationScenario scenario);

    const ExplorationScenario& scenario() const { return scenario_; }
    std::size_t transmissions_per_view() const { return transmissions_; }

    /// One episode driven entirely by `seed`.
    LatencyRecord run(std::uint64_t seed) const;

private:
    ExplorationScenario scenario_;
    PreparedLink link_;
    std::size_t transmissions_ = 1;
    double noise_feature_var_ = 0.0;
};

LatencyRecord simulate_episode(const ExplorationScenario& scenario, std::uint64_t seed);

struct EpisodeSummary {
    std::size_t episodes = 0;
    double mean_exploration_s = 0.0;
    double mean_transmission_s = 0.0;
    double mean_total_s = 0.0;
    double total_std_error = 0.0;
    double mean_views = 0.0;
    double success_rate = 0.0;
};

/// Episodes i = 0..n-1 use seed derive_seed(seed, i); independent of pool size.
EpisodeSummary run_episodes(const ExplorationScenario& scenario, std::size_t episodes,
                            std::uint64_t seed, WorkerPool& pool);

struct AccuracyTask {
    GmModel model = make_binary_model(100, 1.0, 1.0);
    LinkConfig link;
    double scale = 1.0;
    std::size_t trials = 10000;
    std::size_t views = 1;
    std::size_t transmissions = 1;
};

struct AccuracyEstimate {
    std::size_t trials = 0;
    double accuracy = 0.0;
    double std_error = 0.0;
    /// 95% normal-approximation half width.
    double ci_half_width = 0.0;
    /// Fraction where the received and transmitted features get the same label.
    double alignment = 0.0;
};

/// Label drawn uniformly, `views` samples each sent `transmissions` times and
/// averaged, pooled, then classified. Work is split into fixed chunks with their
/// own streams, so the estimate does not depend on the pool size.
AccuracyEstimate monte_carlo_accuracy(const AccuracyTask& task, std::uint64_t seed, WorkerPool& pool);

AccuracyEstimate monte_carlo_accuracy(const AccuracyTask& task, std::uint64_t seed);

}  // namespace semcom
