#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semcom/errors.hpp"
#include "semcom/exploration.hpp"

using namespace semcom;

namespace {

ExplorationScenario instant_scenario() {
    ExplorationScenario s;
    s.num_objects = 30;
    s.path_lengths = {3};
    s.link.bep = 0.0;
    s.link.bandwidth_hz = 1e12;
    s.model = make_binary_model(100, 1.0, 1.0);
    s.scale = default_scale(s.model, 8);
    s.xi = 0.5;
    return s;
}

ExplorationScenario noisy_scenario(double bep, double xi) {
    ExplorationScenario s;
    s.num_objects = 40;
    s.link.bep = bep;
    s.model = make_binary_model(100, 0.15, 1.0);
    s.scale = default_scale(s.model, 8);
    s.xi = xi;
    return s;
}

}  // namespace

TEST_CASE("environment assignment") {
    ExplorationScenario s = instant_scenario();
    Rng a = make_stream(1, "env");
    const EnvironmentAssignment env = assign_environment(s, a);
    CHECK(env.relevant_count == 24);
    CHECK(std::count_if(env.path_of.begin(), env.path_of.end(), [](auto p) { return p.has_value(); }) == 3);
    std::size_t relevant_labels = 0;
    for (std::size_t i = 0; i < 30; ++i) {
        if (env.path_of[i]) CHECK(env.labels[i] == 0);
        relevant_labels += env.labels[i] == 0 ? 1 : 0;
    }
    // binary model: one relevant class, one irrelevant class
    CHECK(relevant_labels == 24);
    Rng b = make_stream(1, "env");
    const EnvironmentAssignment again = assign_environment(s, b);
    CHECK(again.labels == env.labels);
    CHECK(again.path_of == env.path_of);

    s.path_lengths = {10, 10, 10};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.path_lengths = {10, 10, 4};
    CHECK_NOTHROW(s.validate());
    s.model = s.model.in_quantized_units(2.0);
    CHECK_THROWS_AS(s.validate(), UnitError);
}

TEST_CASE("episodes are deterministic and decompose into exploration plus transmission") {
    const ExplorationScenario s = noisy_scenario(0.3, 0.95);
    const EpisodeSimulator sim(s);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LatencyRecord a = sim.run(seed);
        const LatencyRecord b = simulate_episode(s, seed);
        CHECK(a.exploration_time_s == b.exploration_time_s);
        CHECK(a.transmission_time_s == b.transmission_time_s);
        CHECK(a.total_views == b.total_views);
        CHECK(a.total_time_s() == a.exploration_time_s + a.transmission_time_s);
        CHECK(a.transmission_time_s == doctest::Approx(static_cast<double>(a.total_views) * 8e-4));
        CHECK(a.total_views >= a.objects_encountered);
    }
}

TEST_CASE("a zero time limit gives an empty failure") {
    ExplorationScenario s = instant_scenario();
    s.time_limit_s = 0.0;
    const LatencyRecord r = simulate_episode(s, 3);
    CHECK_FALSE(r.success);
    CHECK(r.total_views == 0);
    CHECK(r.objects_encountered == 0);
}

TEST_CASE("a noiseless link recognizes every object in one view") {
    const ExplorationScenario s = instant_scenario();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const LatencyRecord r = simulate_episode(s, seed);
        CHECK(r.success);
        CHECK(r.total_views == r.objects_encountered);
    }
}

TEST_CASE("order-statistic desk check") {
    // last of 3 marked objects among 30 arrives at position 3 * 31 / 4 on average
    const ExplorationScenario s = instant_scenario();
    WorkerPool pool(1);
    const EpisodeSummary sum = run_episodes(s, 20000, 11, pool);
    CHECK(std::fabs(sum.mean_exploration_s - 23.25) < 4.0 * sum.total_std_error + 0.01);
    CHECK(sum.success_rate == 1.0);
}

TEST_CASE("results do not depend on the worker count") {
    const ExplorationScenario s = noisy_scenario(0.3, 0.9);
    WorkerPool one(1);
    WorkerPool four(4);
    const EpisodeSummary a = run_episodes(s, 300, 5, one);
    const EpisodeSummary b = run_episodes(s, 300, 5, four);
    CHECK(a.mean_total_s == b.mean_total_s);
    CHECK(a.mean_views == b.mean_views);

    AccuracyTask t;
    t.model = make_binary_model(100, 0.3, 1.0);
    t.scale = default_scale(t.model, 8);
    t.link.bep = 0.3;
    t.trials = 5000;
    const AccuracyEstimate x = monte_carlo_accuracy(t, 9, one);
    const AccuracyEstimate y = monte_carlo_accuracy(t, 9, four);
    CHECK(x.accuracy == y.accuracy);
    CHECK(x.alignment == y.alignment);
}

TEST_CASE("transmission time grows with the confidence target") {
    WorkerPool pool(2);
    double prev = 0.0;
    for (double xi : {0.6, 0.9, 0.99, 0.999}) {
        const EpisodeSummary s = run_episodes(noisy_scenario(0.3, xi), 400, 21, pool);
        CHECK(s.mean_transmission_s >= prev);
        prev = s.mean_transmission_s;
    }
}

TEST_CASE("enhancements") {
    ExplorationScenario s = noisy_scenario(0.35, 0.99);
    s.enhancement = Enhancement::retransmission;
    const EpisodeSimulator retx(s);
    CHECK(retx.transmissions_per_view() > 1);
    s.link.bep = 0.0;
    CHECK(EpisodeSimulator(s).transmissions_per_view() == 1);

    s = noisy_scenario(0.35, 0.99);
    s.enhancement = Enhancement::none;
    const LatencyRecord r = simulate_episode(s, 4);
    CHECK(r.total_views == r.objects_encountered);
}

TEST_CASE("Monte-Carlo accuracy") {
    AccuracyTask t;
    t.trials = 3000;
    for (const GmModel& m : {make_binary_model(100, 1.0, 1.0), make_ten_class_model(100)}) {
        t.model = m;
        t.scale = default_scale(m, 8);
        t.link.bep = 0.0;
        CHECK(monte_carlo_accuracy(t, 1).accuracy >= 0.999);
    }
    t.model = make_binary_model(100, 0.15, 1.0);
    t.scale = default_scale(t.model, 8);
    t.link.bep = 0.3;
    t.trials = 20000;
    const AccuracyEstimate one = monte_carlo_accuracy(t, 2);
    t.views = 4;
    const AccuracyEstimate four = monte_carlo_accuracy(t, 2);
    CHECK(four.accuracy >= one.accuracy - one.ci_half_width);
    CHECK(one.ci_half_width == doctest::Approx(1.959963984540054 * one.std_error));
    t.trials = 0;
    CHECK_THROWS_AS(monte_carlo_accuracy(t, 2), ConfigError);
}
