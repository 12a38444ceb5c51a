#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levcool/config.hpp"

namespace levcool {

struct SweepAxis {
    std::string key;
    double start = 0.0, stop = 0.0;
    int count = 2;
    std::string unit;  // passed through to the config reader

    double value(int i) const;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;  // axis 1 is the outer loop
    RawConfig fixed;
    std::optional<std::string> output;

    std::string mode() const;
    std::size_t size() const;
};

// Config text plus `axis1 = key start stop count [unit]`, optional `axis2`
// and `output = path`.
SweepSpec parse_sweep(std::string_view text);

enum class FailureKind { none, config, numerical };

struct RunRecord {
    std::vector<double> axes;
    std::optional<ModelConfig> inputs;  // absent when the point failed to interpret
    bool stable = false;
    bool marginal = false;
    double margin = 0.0;
    std::array<std::optional<double>, 4> n_bar{};
    std::array<std::optional<double>, 2> dark_residual{};  // x sector, z sector
    double wall_time = 0.0;  // s
    FailureKind failure = FailureKind::none;
    std::string error;
};

// Single-shot evaluation; never throws for bad inputs, the error lands in the record.
RunRecord evaluate(const ModelConfig& cfg);

// Grid point i of the spec, as a config ready to interpret.
RawConfig grid_point(const SweepSpec& spec, std::size_t i, std::vector<double>* axis_values = nullptr);

std::vector<RunRecord> run_sweep(const SweepSpec& spec, int workers = 1);

}  // namespace levcool
