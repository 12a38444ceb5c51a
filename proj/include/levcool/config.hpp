#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "levcool/models.hpp"
#include "levcool/optics.hpp"
#include "levcool/params.hpp"

namespace levcool {

enum class ConfigErrorKind { parse_error, unknown_key, duplicate_key, missing_key, unit_mismatch, invalid_value };

std::string_view to_string(ConfigErrorKind kind);

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string key, int line, const std::string& message);

    ConfigErrorKind kind() const { return kind_; }
    const std::string& key() const { return key_; }
    int line() const { return line_; }  // 0 when the error is not tied to a line

private:
    ConfigErrorKind kind_;
    std::string key_;
    int line_;
};

struct ConfigEntry {
    std::string key;
    std::string value;  // right-hand side with the unit stripped for numeric keys
    std::string unit;
    int line = 0;
};

// Syntax-level view of a `key = value [unit]` file.
struct RawConfig {
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(std::string_view key) const;
    void set(const std::string& key, const std::string& value, const std::string& unit);
};

RawConfig parse_config(std::string_view text);

struct PhysicalSetup {
    PhysicalConfig config;
    ModelKind model = ModelKind::three_mode;

    bool operator==(const PhysicalSetup&) const = default;
};

using ModelConfig = std::variant<PhysicalSetup, ThreeModeParams, FiveModeParams>;

ModelConfig load_config(std::string_view text);
ModelConfig interpret(const RawConfig& raw);
std::string emit_config(const ModelConfig& cfg);

// True for keys that take a number, for the mode named in the raw config.
bool numeric_key(std::string_view mode, std::string_view key);

struct ForceScanSpec {
    ForceScanParams params;
    double start = 0.3, stop = 3.0;
    int points = 541;
};

// Physical particle and tweezer keys plus scan_start, scan_stop, scan_points.
ForceScanSpec load_force_scan(std::string_view text);

}  // namespace levcool
