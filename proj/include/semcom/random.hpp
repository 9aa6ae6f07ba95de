#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace semcom {

using Rng = std::mt19937_64;

/// Deterministic child seed for stream `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Child seed for a named sub-stream ("channel", "environment", ...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
}

inline Rng make_stream(std::uint64_t master, std::string_view name) {
    return Rng(derive_seed(master, name));
}

/// 64-bit FNV-1a; stable across platforms, used for config fingerprints and stream names.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace semcom
