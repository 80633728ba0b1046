/*
 * Copyright 2026 The cbsamp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbsamp/errors.hpp"

namespace cbsamp {

enum class ExperimentKind {
    eigen_fidelity,
    eigen_scaling,
    avg_permanent,
    good_fraction,
    good_mass,
    tv_probe,
};

const char* experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);  // throws ConfigError

enum class ResultFormat { csv, jsonl };

/**
 * @brief Declarative description of one experiment campaign.
 *
 * Parsed from a flat `key = value` text file; unknown keys are rejected.
 * For eigen-scaling, m_list holds the m/n ratio grid instead of raw mode
 * counts (records retain the raw m).
 */
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::good_fraction;
    std::vector<std::uint64_t> n_list;
    std::vector<std::uint64_t> m_list;
    std::uint64_t samples = 0;      // 0 = experiment-specific desk-scale default
    std::uint64_t matrices = 100;   // good-mass: circulant instances per point
    std::uint64_t bins = 64;        // histogram bins per axis (TV probe: per marginal)
    double hist_range = 1.1;        // complex-plane histogram half-width
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
    std::string output;             // result file path (required by `run`)
    ResultFormat format = ResultFormat::csv;
    bool paper_scale = false;       // restore publication-scale sample counts

    /// Effective sample count after defaults and paper_scale.
    [[nodiscard]] std::uint64_t effective_samples() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Throws ConfigError / GuardError before any computation if the config is
/// invalid or exceeds a module cost guard.
void validate_config(const ExperimentConfig& cfg);

/**
 * @brief One emitted statistic.
 *
 * Serialized fields are fully determined by (master_seed, config); volatile
 * run metadata (worker layout, wall time) is kept out of result files so
 * re-runs are byte-identical, and is reported on the progress stream instead.
 */
struct ResultRecord {
    std::string experiment;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string label;      // ensemble, ensemble pair, or qualifier
    std::string statistic;
    double value = 0.0;
    double error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t master_seed = 0;
    nlohmann::ordered_json extra;  // jsonl-only metadata (bins, ratio, ...)
};

/// Runs the configured experiment and returns all records in deterministic
/// order. Progress lines (one per (n, m) point, with timing) go to `progress`
/// when non-null.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         std::ostream* progress = nullptr);

void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out);
void write_records_jsonl(const std::vector<ResultRecord>& records, std::ostream& out);

/// Serializes records to cfg.output atomically (temp file + rename); an
/// interrupted run never leaves a partial file at the final path.
void write_result_file(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records);

/// Full campaign: validate, run, persist, summarize. Returns the process
/// exit code (0 ok; 2 config, 3 guard, 4 numerical).
int run_campaign(const ExperimentConfig& cfg, std::ostream& progress);

}  // namespace cbsamp
