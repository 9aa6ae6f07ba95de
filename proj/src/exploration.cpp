#include "semcom/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

constexpr std::size_t kEpisodeChunk = 64;
constexpr std::size_t kTrialChunk = 1024;
constexpr std::size_t kMaxTransmissions = 1'000'000;

std::size_t relevant_classes(std::size_t classes) {
    const auto r = static_cast<std::size_t>(std::lround(0.8 * static_cast<double>(classes)));
    return std::clamp<std::size_t>(r, 1, classes - 1);
}

std::size_t retransmissions_for(const ExplorationScenario& s, double p_b) {
    if (s.enhancement != Enhancement::retransmission || p_b == 0.0) return 1;
    const GmModel q = s.model.in_quantized_units(s.scale);
    const Hyperplane h = hyperplane_between(q, 0, 1);
    return std::min(kMaxTransmissions, required_transmissions(q, h, s.zeta, s.link.bits_per_feature,
                                                              p_b, s.xi, s.variant));
}

}  // namespace

void ExplorationScenario::validate() const {
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
        throw ConfigError("scenario: arrival_rate must be positive and finite");
    }
    if (num_objects < 1) throw ConfigError("scenario: num_objects must be >= 1");
    if (!(relevant_fraction >= 0.0 && relevant_fraction <= 1.0)) {
        throw ConfigError("scenario: relevant_fraction must lie in [0, 1]");
    }
    if (path_lengths.empty()) throw ConfigError("scenario: at least one path is required");
    if (std::find(path_lengths.begin(), path_lengths.end(), 0U) != path_lengths.end()) {
        throw ConfigError("scenario: path lengths must be >= 1");
    }
    const std::size_t relevant =
        static_cast<std::size_t>(std::floor(relevant_fraction * static_cast<double>(num_objects) + 1e-9));
    const std::size_t needed = std::accumulate(path_lengths.begin(), path_lengths.end(), std::size_t{0});
    if (needed > relevant) {
        throw ConfigError("scenario: paths need " + std::to_string(needed) + " objects but only " +
                          std::to_string(relevant) + " are relevant");
    }
    if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("scenario: xi must lie in (0, 1)");
    if (max_views_per_object < 1) throw ConfigError("scenario: max_views_per_object must be >= 1");
    if (!(time_limit_s >= 0.0)) throw ConfigError("scenario: time_limit_s must be >= 0");
    if (!(scale > 0.0)) throw ConfigError("scenario: scale must be positive");
    if (model.units() != Units::feature) throw UnitError("scenario: model must be in feature units");
    link.validate();
}

EnvironmentAssignment assign_environment(const ExplorationScenario& scenario, Rng& rng) {
    scenario.validate();
    const std::size_t k = scenario.num_objects;
    EnvironmentAssignment env;
    env.relevant_count = static_cast<std::size_t>(
        std::floor(scenario.relevant_fraction * static_cast<double>(k) + 1e-9));
    env.labels.resize(k);
    env.path_of.resize(k);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t classes = scenario.model.num_classes();
    const std::size_t split = relevant_classes(classes);
    std::uniform_int_distribution<std::size_t> relevant_label(0, split - 1);
    std::uniform_int_distribution<std::size_t> other_label(split, classes - 1);

    std::size_t path = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t obj = order[i];
        if (i < env.relevant_count) {
            env.labels[obj] = relevant_label(rng);
            if (path < scenario.path_lengths.size()) {
                env.path_of[obj] = path;
                if (++used == scenario.path_lengths[path]) {
                    ++path;
                    used = 0;
                }
            }
        } else {
            env.labels[obj] = other_label(rng);
        }
    }
    return env;
}

EpisodeSimulator::EpisodeSimulator(ExplorationScenario scenario)
    : scenario_((scenario.validate(), std::move(scenario))),
      link_(scenario_.link, scenario_.model.dims()) {
    transmissions_ = retransmissions_for(scenario_, link_.point().p_b);
    noise_feature_var_ = error_variance(scenario_.link.bits_per_feature, link_.point().p_b) /
                         (scenario_.scale * scenario_.scale) / static_cast<double>(transmissions_);
}

LatencyRecord EpisodeSimulator::run(std::uint64_t seed) const {
    const ExplorationScenario& s = scenario_;
    Rng env_rng = make_stream(seed, "environment");
    const EnvironmentAssignment env = assign_environment(s, env_rng);

    Rng order_rng = make_stream(seed, "order");
    std::vector<std::size_t> order(s.num_objects);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), order_rng);

    std::vector<std::size_t> remaining = s.path_lengths;
    Rng arrivals = make_stream(seed, "arrivals");
    std::exponential_distribution<double> unit_gap(1.0);
    const std::uint64_t view_master = derive_seed(seed, "views");
    const std::size_t max_views = s.enhancement == Enhancement::none ? 1 : s.max_views_per_object;
    const Variance noise{noise_feature_var_, Units::feature};

    LatencyRecord rec;
    for (const std::size_t obj : order) {
        if (rec.total_time_s() >= s.time_limit_s) break;
        // unit-rate gaps scaled by 1/lambda keep arrivals comparable across rates
        rec.exploration_time_s += unit_gap(arrivals) / s.arrival_rate;
        if (rec.total_time_s() > s.time_limit_s) break;
        ++rec.objects_encountered;

        Rng view_rng = make_stream(view_master, obj);
        FeatureVector sum = FeatureVector::Zero(static_cast<Eigen::Index>(s.model.dims()));
        bool recognized = false;
        for (std::size_t m = 1; m <= max_views; ++m) {
            const FeatureVector x = sample(s.model, env.labels[obj], view_rng);
            const TransmitResult tx = link_.transmit(x, s.scale, transmissions_, view_rng);
            rec.transmission_time_s += tx.latency_s;
            ++rec.total_views;
            sum += tx.received;
            const ClassificationOutcome out =
                classify_ovo(s.model, sum / static_cast<double>(m), noise, m);
            if (out.confidence >= s.xi) {
                recognized = out.label == env.labels[obj];
                break;
            }
        }
        if (recognized && env.path_of[obj]) {
            const std::size_t p = *env.path_of[obj];
            if (--remaining[p] == 0) {
                rec.hit_path = p;
                rec.success = true;
                break;
            }
        }
    }
    return rec;
}

LatencyRecord simulate_episode(const ExplorationScenario& scenario, std::uint64_t seed) {
    return EpisodeSimulator(scenario).run(seed);
}

EpisodeSummary run_episodes(const ExplorationScenario& scenario, std::size_t episodes,
                            std::uint64_t seed, WorkerPool& pool) {
    if (episodes < 1) throw ConfigError("run_episodes: episodes must be >= 1");
    const EpisodeSimulator sim(scenario);
    std::vector<LatencyRecord> records(episodes);
    const std::size_t chunks = (episodes + kEpisodeChunk - 1) / kEpisodeChunk;
    pool.parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(episodes, (c + 1) * kEpisodeChunk);
        for (std::size_t i = c * kEpisodeChunk; i < end; ++i) records[i] = sim.run(derive_seed(seed, i));
    });

    EpisodeSummary sum;
    sum.episodes = episodes;
    double total_sq = 0.0;
    for (const auto& r : records) {
        sum.mean_exploration_s += r.exploration_time_s;
        sum.mean_transmission_s += r.transmission_time_s;
        sum.mean_total_s += r.total_time_s();
        total_sq += r.total_time_s() * r.total_time_s();
        sum.mean_views += static_cast<double>(r.total_views);
        sum.success_rate += r.success ? 1.0 : 0.0;
    }
    const auto n = static_cast<double>(episodes);
    sum.mean_exploration_s /= n;
    sum.mean_transmission_s /= n;
    sum.mean_total_s /= n;
    sum.mean_views /= n;
    sum.success_rate /= n;
    if (episodes > 1) {
        const double var = std::max(0.0, (total_sq - n * sum.mean_total_s * sum.mean_total_s) / (n - 1.0));
        sum.total_std_error = std::sqrt(var / n);
    }
    return sum;
}

AccuracyEstimate monte_carlo_accuracy(const AccuracyTask& task, std::uint64_t seed, WorkerPool& pool) {
    if (task.trials < 1) throw ConfigError("monte_carlo_accuracy: trials must be >= 1");
    if (task.views < 1 || task.transmissions < 1) {
        throw ConfigError("monte_carlo_accuracy: views and transmissions must be >= 1");
    }
    if (task.model.units() != Units::feature) {
        throw UnitError("monte_carlo_accuracy: model must be in feature units");
    }
    const PreparedLink prepared(task.link, task.model.dims());
    const Variance noise{error_variance(task.link.bits_per_feature, prepared.point().p_b) /
                             (task.scale * task.scale) / static_cast<double>(task.transmissions),
                         Units::feature};

    const std::size_t chunks = (task.trials + kTrialChunk - 1) / kTrialChunk;
    std::vector<std::size_t> correct(chunks, 0);
    std::vector<std::size_t> aligned(chunks, 0);
    const auto d = static_cast<Eigen::Index>(task.model.dims());
    pool.parallel_for(chunks, [&](std::size_t c) {
        Rng rng = make_stream(seed, c);
        std::uniform_int_distribution<std::size_t> pick(0, task.model.num_classes() - 1);
        const std::size_t end = std::min(task.trials, (c + 1) * kTrialChunk);
        FeatureVector clean(d);
        FeatureVector received(d);
        for (std::size_t t = c * kTrialChunk; t < end; ++t) {
            const std::size_t label = pick(rng);
            clean.setZero();
            received.setZero();
            for (std::size_t v = 0; v < task.views; ++v) {
                const FeatureVector x = sample(task.model, label, rng);
                clean += x;
                received += prepared.transmit(x, task.scale, task.transmissions, rng).received;
            }
            const double inv = 1.0 / static_cast<double>(task.views);
            const std::size_t got = classify_label(task.model, received * inv, noise);
            const std::size_t sent = classify_label(task.model, clean * inv);
            correct[c] += got == label ? 1 : 0;
            aligned[c] += got == sent ? 1 : 0;
        }
    });

    AccuracyEstimate est;
    est.trials = task.trials;
    const auto n = static_cast<double>(task.trials);
    est.accuracy = static_cast<double>(std::accumulate(correct.begin(), correct.end(), std::size_t{0})) / n;
    est.alignment = static_cast<double>(std::accumulate(aligned.begin(), aligned.end(), std::size_t{0})) / n;
    est.std_error = std::sqrt(est.accuracy * (1.0 - est.accuracy) / n);
    est.ci_half_width = 1.959963984540054 * est.std_error;
    return est;
}

AccuracyEstimate monte_carlo_accuracy(const AccuracyTask& task, std::uint64_t seed) {
    WorkerPool inline_pool(1);
    return monte_carlo_accuracy(task, seed, inline_pool);
}

}  // namespace semcom
