#pragma once

#include "lrperc/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lrperc {

struct ResultRow {
    std::string experiment;
    std::string model;
    std::string k;
    std::uint64_t seed = 0;
    std::uint64_t reps = 0;
    std::string horizon;
    std::string window;
    std::vector<std::pair<std::string, std::string>> params; // flattened as key=value;...
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::optional<double> wall_seconds; // filled only with timing = true

    const std::string* param(const std::string& key) const;
};

struct ResultTable {
    std::string experiment;
    std::string config_hash;
    std::vector<ResultRow> rows;
};

const std::vector<std::string>& experiment_names();

/// Keys accepted by an experiment, including the global ones.
const std::vector<std::string>& experiment_keys(const std::string& experiment);

/// Fills defaults and rejects unknown keys. Does not run anything.
Config resolve_config(const std::string& experiment, Config cfg);

/// 16 hex digits over the resolved config, ignoring threads/out/timing/config.
std::string config_hash(const Config& resolved);

/// Resolves, validates and runs. The resolved config is written to `log`
/// when given. Throws std::invalid_argument naming the bad field.
ResultTable run_experiment(const std::string& experiment, const Config& cfg, std::ostream* log = nullptr);

std::string csv_header();
std::string render_csv(const ResultTable& table);

/// path "-" writes to stdout.
void emit_csv(const ResultTable& table, const std::string& path);

/// %.6g, with "nan" for NaN.
std::string format_number(double v);

} // namespace lrperc
