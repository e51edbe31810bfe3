#pragma once

#include <cstdint>
#include <string>

#include "wpt/tuner.hpp"

namespace wpt {

// JSON configuration. Every physical quantity carries its SI unit in the key
// (l_henry, radius_m, ...). Missing keys keep the built-in defaults; unknown
// keys are rejected so that misspelt units do not silently fall back.

/// Parse config text. `origin` names the source in error messages. Throws
/// ConfigError naming the line (syntax) or the JSON path (content).
SystemConfig parse_config(const std::string& text, const std::string& origin = "<config>");
SystemConfig load_config(const std::string& path);

/// Canonical JSON for a config; stable across runs (sorted keys).
std::string dump_config(const SystemConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string config_hash(const SystemConfig& cfg);

}  // namespace wpt
