#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcom/exploration.hpp"
#include "semcom/feature_channel.hpp"
#include "semcom/gm_model.hpp"
#include "semcom/knowledge_graph.hpp"
#include "semcom/protocol.hpp"

namespace semcom {

using Json = nlohmann::ordered_json;

struct ModelSpec {
    std::string preset = "binary";
    std::size_t dims = 100;
    double amplitude = 1.0;
    double variance = 1.0;
    /// custom preset only: L rows of D values
    std::vector<std::vector<double>> centroids;
    std::vector<double> covariance_diag;

    GmModel build() const;
    /// Same preset at another amplitude (binary and ten_class only).
    GmModel build_with_amplitude(double amplitude) const;
};

struct QuantizationSpec {
    int bits = 8;
    double headroom_sigmas = 3.5;
    std::optional<double> scale;

    double resolve(const GmModel& model) const;
};

struct ExplorationSpec {
    double arrival_rate = 1.0;
    std::size_t num_objects = 40;
    double relevant_fraction = 0.8;
    std::vector<std::size_t> path_lengths{10, 10, 10};
    std::size_t max_views_per_object = 64;
    double time_limit_s = 1e9;
    Enhancement enhancement = Enhancement::multiview;
    double xi = 0.9;
};

/// Sweep axes. Unset axes take per-experiment defaults when resolved.
struct SweepSpec {
    std::optional<std::vector<double>> bep;
    std::optional<std::vector<double>> snr_db;
    std::optional<std::vector<double>> amplitudes;
    std::optional<std::vector<std::size_t>> views;
    std::optional<std::vector<std::size_t>> transmissions;
    std::optional<std::vector<double>> xi;
    std::optional<std::vector<double>> arrival_rate;
    std::optional<std::vector<std::vector<std::size_t>>> path_length_sets;
    double zeta = 0.95;
    RetransmissionVariant variant = RetransmissionVariant::minus_one;
};

struct ExperimentConfig {
    std::string experiment;
    std::vector<std::string> experiments;
    std::optional<std::uint64_t> seed;
    ModelSpec model;
    QuantizationSpec quantization;
    LinkConfig link;
    ExplorationSpec exploration;
    SweepSpec sweep;
    std::size_t trials = 100000;
    std::size_t episodes = 10000;
};

const std::vector<std::string>& experiment_names();

/// Strict parse: every object rejects keys it does not know, naming the key.
/// Relative file references resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Copy with `experiment` set to `name` and that experiment's default sweep axes filled in.
ExperimentConfig resolve_for(const ExperimentConfig& cfg, const std::string& name);

/// Fully resolved document; echoed into output headers and hashed.
Json to_json(const ExperimentConfig& cfg);

ModulationPolicy parse_modulation_policy(const Json& doc);
ModulationPolicy load_modulation_policy(const std::filesystem::path& path);

KnowledgeGraph parse_knowledge_graph(const Json& doc);

struct ProtocolDemoConfig {
    KnowledgeGraph kg;
    TaskSpec task;
    ProtocolConfig protocol;
    Environment environment;
    std::vector<std::string> class_names;
    ModelSpec model;
    QuantizationSpec quantization;
    LinkConfig link;
    std::optional<std::uint64_t> seed;
    Json resolved;

    ClassifierSetup classifier() const;
};

ProtocolDemoConfig parse_protocol_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Reads and parses a JSON file; missing or malformed files raise a config error.
Json read_json_file(const std::filesystem::path& path);

}  // namespace semcom
