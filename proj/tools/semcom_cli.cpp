// semcom: experiment runner, bounds tables and protocol traces.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "semcom/config.hpp"
#include "semcom/errors.hpp"
#include "semcom/experiments.hpp"
#include "semcom/protocol.hpp"
#include "semcom/worker_pool.hpp"

namespace fs = std::filesystem;
using namespace semcom;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunConfig {
    std::string command;
    fs::path config_path;
    std::optional<std::uint64_t> seed;
    std::string output_path;
    std::optional<std::size_t> workers;
    std::string experiment;
};

std::size_t resolve_workers(const RunConfig& rc) {
    if (rc.workers) {
        if (*rc.workers < 1) throw ConfigError("--workers must be >= 1");
        return *rc.workers;
    }
    if (const char* env = std::getenv("SEMCOM_WORKERS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw ConfigError("SEMCOM_WORKERS must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    return 1;
}

std::uint64_t resolve_seed(const RunConfig& rc, std::optional<std::uint64_t> from_config) {
    if (rc.seed) return *rc.seed;
    if (from_config) return *from_config;
    throw ConfigError("a seed is required: pass --seed or set \"seed\" in the config");
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void print_progress(const std::string& experiment, std::size_t done, std::size_t total) {
    std::fprintf(stderr, "[%s] %zu/%zu\n", experiment.c_str(), done, total);
}

int run_simulate(const RunConfig& rc) {
    ExperimentConfig cfg = parse_experiment_config(read_json_file(rc.config_path), rc.config_path.parent_path());
    if (!rc.experiment.empty()) cfg.experiment = rc.experiment;
    if (cfg.experiment.empty()) throw ConfigError("no experiment: set \"experiment\" or pass --experiment");
    const std::uint64_t seed = resolve_seed(rc, cfg.seed);
    WorkerPool pool(resolve_workers(rc));
    emit(run_experiment(cfg, seed, pool, print_progress).str(), rc.output_path);
    return 0;
}

int run_sweep(const RunConfig& rc) {
    ExperimentConfig cfg = parse_experiment_config(read_json_file(rc.config_path), rc.config_path.parent_path());
    const std::uint64_t seed = resolve_seed(rc, cfg.seed);
    if (rc.output_path.empty()) throw ConfigError("sweep needs --out DIR");
    const fs::path dir(rc.output_path);
    fs::create_directories(dir);
    const auto names = cfg.experiments.empty() ? experiment_names() : cfg.experiments;
    WorkerPool pool(resolve_workers(rc));
    for (const auto& name : names) {
        ExperimentConfig one = cfg;
        one.experiment = name;
        emit(run_experiment(one, seed, pool, print_progress).str(), (dir / (name + ".csv")).string());
    }
    return 0;
}

int run_bounds(const RunConfig& rc) {
    const ExperimentConfig cfg =
        parse_experiment_config(read_json_file(rc.config_path), rc.config_path.parent_path());
    const std::uint64_t seed = resolve_seed(rc, cfg.seed);
    emit(bounds_table(cfg, seed).str(), rc.output_path);
    return 0;
}

int run_protocol_demo(const RunConfig& rc) {
    const ProtocolDemoConfig cfg =
        parse_protocol_config(read_json_file(rc.config_path), rc.config_path.parent_path());
    const std::uint64_t seed = resolve_seed(rc, cfg.seed);
    const ProtocolState state = run_protocol(cfg.kg, cfg.task, cfg.protocol, cfg.environment,
                                             cfg.classifier(), seed);
    std::string out;
    out += std::string("# tool: semcom ") + kToolVersion + "\n";
    out += "# command: protocol-demo\n";
    out += "# config_hash: " + config_hash(cfg.resolved) + "\n";
    out += "# seed: " + std::to_string(seed) + "\n";
    out += "# config: " + cfg.resolved.dump() + "\n";
    for (const auto& line : state.trace) out += line + "\n";
    out += "status: " + to_string(state.status) + "\n";
    emit(out, rc.output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-based low-latency semantic communication workbench"};
    app.require_subcommand(1);
    RunConfig rc;
    std::uint64_t seed = 0;
    std::size_t workers = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", rc.config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "master seed (or \"seed\" in the config)");
        sub->add_option("--out", rc.output_path, "output file (directory for sweep); stdout if omitted");
        sub->add_option("--workers", workers, "worker threads (default: SEMCOM_WORKERS or 1)");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "run one experiment and write its CSV");
    add_common(simulate);
    simulate->add_option("--experiment", rc.experiment, "experiment name (overrides the config)");
    CLI::App* bounds = app.add_subcommand("bounds", "tabulate the analytical bounds");
    add_common(bounds);
    CLI::App* sweep = app.add_subcommand("sweep", "run every listed experiment into --out DIR");
    add_common(sweep);
    CLI::App* demo = app.add_subcommand("protocol-demo", "print a step-by-step protocol trace");
    add_common(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    for (CLI::App* sub : {simulate, bounds, sweep, demo}) {
        if (sub->parsed()) {
            rc.command = sub->get_name();
            if (sub->count("--seed")) rc.seed = seed;
            if (sub->count("--workers")) rc.workers = workers;
        }
    }

    try {
        if (rc.command == "simulate") return run_simulate(rc);
        if (rc.command == "sweep") return run_sweep(rc);
        if (rc.command == "bounds") return run_bounds(rc);
        return run_protocol_demo(rc);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
