#include <doctest.h>

#include <algorithm>
#include <string>

#include "semcom/config.hpp"
#include "semcom/errors.hpp"
#include "semcom/protocol.hpp"

using namespace semcom;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(SEMCOM_DATA_DIR) / "configs";

ProtocolDemoConfig load(const std::string& name) {
    const auto path = kConfigs / name;
    return parse_protocol_config(read_json_file(path), path.parent_path());
}

ProtocolState run(const ProtocolDemoConfig& c, std::uint64_t seed) {
    return run_protocol(c.kg, c.task, c.protocol, c.environment, c.classifier(), seed);
}

bool has_step(const ProtocolState& s, const std::string& prefix) {
    return std::any_of(s.trace.begin(), s.trace.end(),
                       [&](const std::string& l) { return l.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST_CASE("recognition bookkeeping") {
    ProtocolState s;
    update_recognition(s, "cup", 0.5, 0.9);
    CHECK_FALSE(s.recognized.at("cup").recognized);
    update_recognition(s, "cup", 0.9, 0.9);
    CHECK(s.recognized.at("cup").recognized);
    update_recognition(s, "cup", 0.2, 0.9);
    CHECK(s.recognized.at("cup").confidence == 0.9);
    CHECK(s.recognized.at("cup").views == 3);
    CHECK_THROWS_AS(update_recognition(s, "cup", 1.5, 0.9), DomainError);
}

TEST_CASE("a path is hit only once every object on it is recognized") {
    const std::vector<KnowledgePath> paths{{{"table", "mug", "coffee"}, {"a", "b"}},
                                           {{"table", "phone", "coffee"}, {"c", "d"}}};
    ProtocolState s;
    s.object_labels = {{"table", {"desk"}}, {"mug", {"cup"}}};
    update_recognition(s, "desk", 0.99, 0.9);
    update_recognition(s, "coffee", 0.95, 0.9);
    CHECK_FALSE(check_path_hit(s, paths));
    update_recognition(s, "cup", 0.89, 0.9);
    CHECK_FALSE(check_path_hit(s, paths));
    update_recognition(s, "phone", 0.91, 0.9);
    CHECK(check_path_hit(s, paths) == std::optional<std::size_t>{1});
    update_recognition(s, "cup", 0.93, 0.9);
    CHECK(check_path_hit(s, paths) == std::optional<std::size_t>{0});
}

TEST_CASE("coffee demo reaches a hit and every hit object is confident") {
    const ProtocolDemoConfig c = load("coffee_demo.json");
    const ProtocolState s = run(c, 7);
    REQUIRE(s.status == ProtocolStatus::hit);
    REQUIRE(s.hit_path);
    CHECK(s.paths.size() == 2);
    CHECK(s.relevant == std::set<std::string>{"coffee", "coffee_machine", "cup", "desk", "phone"});
    for (const auto& object : s.paths[*s.hit_path].objects()) {
        bool confident = false;
        for (const auto& label : s.object_labels.at(object)) {
            const auto it = s.recognized.find(label);
            if (it != s.recognized.end() && it->second.confidence >= c.protocol.xi) confident = true;
        }
        CHECK(confident);
    }
    CHECK(s.trace.back().rfind("step 7: execute", 0) == 0);
    CHECK(s.elapsed_s() == s.exploration_s + s.transmission_s);
}

TEST_CASE("protocol runs are deterministic per seed") {
    const ProtocolDemoConfig c = load("coffee_demo.json");
    CHECK(run(c, 7).trace == run(c, 7).trace);
    CHECK(run(c, 7).trace != run(c, 8).trace);
}

TEST_CASE("subset infeasibility stops before exploring") {
    const ProtocolState s = run(load("coffee_infeasible.json"), 7);
    CHECK(s.status == ProtocolStatus::infeasible);
    CHECK(s.trace.back() == "step 3: infeasible");
    CHECK_FALSE(has_step(s, "step 4"));
    CHECK(s.elapsed_s() == 0.0);
    CHECK(s.recognized.empty());
}

TEST_CASE("intersect mode lets the same task explore") {
    ProtocolDemoConfig c = load("coffee_infeasible.json");
    c.protocol.feasibility = FeasibilityMode::intersect;
    const ProtocolState s = run(c, 7);
    CHECK(has_step(s, "step 4"));
    CHECK(s.status == ProtocolStatus::failed_timeout);
}

TEST_CASE("unreachable confidence or no time ends without a hit") {
    ProtocolDemoConfig c = load("coffee_demo.json");
    c.protocol.time_limit_s = 0.0;
    const ProtocolState none = run(c, 7);
    CHECK(none.status == ProtocolStatus::failed_timeout);
    CHECK(none.recognized.empty());

    c = load("coffee_demo.json");
    c.link.bep = 0.45;
    c.protocol.xi = 0.999999;
    c.protocol.max_views = 1;
    const ProtocolState noisy = run(c, 7);
    CHECK(noisy.status == ProtocolStatus::failed_timeout);
    CHECK_FALSE(noisy.hit_path);
}

TEST_CASE("explicit paths replace path finding") {
    ProtocolDemoConfig c = load("coffee_demo.json");
    c.task.explicit_paths = {{"phone", "coffee"}};
    const ProtocolState s = run(c, 7);
    REQUIRE(s.paths.size() == 1);
    CHECK(s.paths[0].actions == std::vector<std::string>{""});
    CHECK(s.status == ProtocolStatus::hit);
}
