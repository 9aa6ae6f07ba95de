#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "semcom/config.hpp"
#include "semcom/csv.hpp"
#include "semcom/worker_pool.hpp"

namespace semcom {

inline constexpr const char* kToolVersion = "0.1.0";

/// (experiment, points done, points total)
using ProgressFn = std::function<void(const std::string&, std::size_t, std::size_t)>;

/// Runs cfg.experiment (resolved with its default axes) and returns the table,
/// metadata included. Output depends only on (cfg, seed), not on the pool size.
CsvTable run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, WorkerPool& pool,
                        const ProgressFn& progress = {});

/// Bounds table over sweep.bep with multiview columns for sweep.views and
/// transmission counts for sweep.xi.
CsvTable bounds_table(const ExperimentConfig& cfg, std::uint64_t seed);

/// Hex FNV-1a of the compact JSON dump.
std::string config_hash(const Json& resolved);

/// Writes tool version, config hash, seed and the one-line resolved config.
void add_metadata(CsvTable& table, const std::string& command, const Json& resolved,
                  std::uint64_t seed);

}  // namespace semcom
