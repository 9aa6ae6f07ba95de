#include <doctest.h>

#include <string>

#include "semcom/config.hpp"
#include "semcom/errors.hpp"

using namespace semcom;

namespace {

const std::filesystem::path kData(SEMCOM_DATA_DIR);

std::string error_of(const Json& doc) {
    try {
        parse_experiment_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("unknown keys are rejected by name at every level") {
    CHECK(error_of(Json::parse(R"({"seeed": 1})")).find("\"seeed\"") != std::string::npos);
    CHECK(error_of(Json::parse(R"({"link": {"snrr_db": 3}})")).find("\"snrr_db\"") != std::string::npos);
    CHECK(error_of(Json::parse(R"({"sweep": {"bepp": [0.1]}})")).find("\"bepp\"") != std::string::npos);
    CHECK(error_of(Json::parse(R"({"model": {"preset": "binary", "dim": 3}})")).find("\"dim\"") !=
          std::string::npos);
}

TEST_CASE("type and range errors are config errors") {
    CHECK_FALSE(error_of(Json::parse(R"({"trials": "many"})")).empty());
    CHECK_FALSE(error_of(Json::parse(R"({"model": {"preset": "cubic"}})")).empty());
    CHECK_FALSE(error_of(Json::parse(R"({"link": {"scheme": "fixed_binary", "bep": 0.1, "snr_db": 3}})")).empty());
    CHECK_FALSE(error_of(Json::parse(R"({"exploration": {"enhancement": "magic"}})")).empty());
    CHECK_THROWS_AS(read_json_file(kData / "does_not_exist.json"), ConfigError);
}

TEST_CASE("defaults are filled and echoed") {
    const ExperimentConfig c = parse_experiment_config(Json::parse(R"({"link": {"bep": 0.1}, "seed": 3})"));
    CHECK(c.seed == std::optional<std::uint64_t>{3});
    CHECK(c.trials == 100000);
    CHECK(c.quantization.bits == 8);
    CHECK(c.quantization.headroom_sigmas == 3.5);
    CHECK(c.link.bits_per_feature == 8);
    const Json j = to_json(c);
    CHECK(j["link"]["bandwidth_hz"] == 1e6);
    CHECK(to_json(parse_experiment_config(j)) == j);
}

TEST_CASE("snr in dB converts to linear") {
    const ExperimentConfig c = parse_experiment_config(
        Json::parse(R"({"link": {"scheme": "adaptive_multilevel", "snr_db": 10}})"));
    CHECK(*c.link.snr_linear == doctest::Approx(10.0));
}

TEST_CASE("per-experiment default axes") {
    ExperimentConfig c = parse_experiment_config(Json::parse(R"({"link": {"bep": 0.1}})"));
    CHECK(experiment_names().size() == 8);
    for (const auto& name : experiment_names()) CHECK_NOTHROW(resolve_for(c, name));
    CHECK(resolve_for(c, "acc_vs_bep").sweep.amplitudes->size() == 3);
    CHECK(resolve_for(c, "latency_vs_arrival").sweep.path_length_sets->size() == 2);
    c.sweep.bep = std::vector<double>{0.2};
    CHECK(resolve_for(c, "acc_vs_bep").sweep.bep->size() == 1);
    CHECK_THROWS_AS(resolve_for(c, "acc_vs_nothing"), ConfigError);
}

TEST_CASE("shipped modulation policy file equals the built-in default") {
    const ModulationPolicy file = load_modulation_policy(kData / "defaults" / "modulation_policy.json");
    const ModulationPolicy builtin = default_modulation_policy();
    REQUIRE(file.size() == builtin.size());
    for (std::size_t i = 0; i < file.size(); ++i) {
        CHECK(file[i].snr_db == builtin[i].snr_db);
        CHECK(file[i].constellation == builtin[i].constellation);
    }
    CHECK_THROWS_AS(parse_modulation_policy(Json::parse(R"({"version": 2, "policy": []})")), ConfigError);
    CHECK_THROWS_AS(parse_modulation_policy(Json::parse(R"([{"snr_db": 0, "M": 8}])")), ConfigError);
}

TEST_CASE("knowledge graph documents") {
    const KnowledgeGraph kg = parse_knowledge_graph(read_json_file(kData / "fixtures" / "coffee_kg.json"));
    CHECK(kg.vertices().size() == 5);
    CHECK(kg.arcs().size() == 5);
    CHECK_THROWS_AS(parse_knowledge_graph(Json::parse(R"({"vertices": ["a"], "arcs": [], "extra": 1})")),
                    ConfigError);
}

TEST_CASE("protocol configs") {
    const auto path = kData / "configs" / "coffee_demo.json";
    const ProtocolDemoConfig c = parse_protocol_config(read_json_file(path), path.parent_path());
    CHECK(c.class_names.size() == 10);
    CHECK(c.environment.objects.size() == 9);
    CHECK(c.environment.objects[1].true_class == 0);
    CHECK(c.protocol.match.provider->id() == "synonym_table");

    Json bad = read_json_file(path);
    bad["environment"]["objects"][0]["class"] = "unicorn";
    CHECK_THROWS_AS(parse_protocol_config(bad, path.parent_path()), ConfigError);
    bad = read_json_file(path);
    bad["matching"]["metirc"] = "cosine";
    CHECK_THROWS_WITH_AS(parse_protocol_config(bad, path.parent_path()), doctest::Contains("metirc"), ConfigError);
}
