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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cbsamp/experiment.hpp"

namespace cbsamp {

const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::eigen_fidelity: return "eigen-fidelity";
        case ExperimentKind::eigen_scaling: return "eigen-scaling";
        case ExperimentKind::avg_permanent: return "avg-permanent";
        case ExperimentKind::good_fraction: return "good-fraction";
        case ExperimentKind::good_mass: return "good-mass";
        case ExperimentKind::tv_probe: return "tv-probe";
    }
    return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::eigen_fidelity, ExperimentKind::eigen_scaling, ExperimentKind::avg_permanent,
          ExperimentKind::good_fraction, ExperimentKind::good_mass, ExperimentKind::tv_probe}) {
        if (name == experiment_name(k)) return k;
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

std::uint64_t ExperimentConfig::effective_samples() const {
    if (paper_scale) {
        switch (experiment) {
            case ExperimentKind::good_fraction: return 5'000'000;
            case ExperimentKind::good_mass: return 1'000'000;
            default: return 1'000'000;
        }
    }
    if (samples > 0) return samples;
    switch (experiment) {
        case ExperimentKind::eigen_fidelity:
        case ExperimentKind::eigen_scaling:
        case ExperimentKind::avg_permanent: return 10'000;
        case ExperimentKind::good_fraction:
        case ExperimentKind::good_mass:
        case ExperimentKind::tv_probe: return 100'000;
    }
    return 10'000;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list element");
        out.push_back(parse_u64(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    bool have_experiment = false, have_n = false, have_m = false;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

        if (key == "experiment") {
            cfg.experiment = experiment_from_name(value);
            have_experiment = true;
        } else if (key == "n_list") {
            cfg.n_list = parse_u64_list(key, value);
            have_n = true;
        } else if (key == "m_list") {
            cfg.m_list = parse_u64_list(key, value);
            have_m = true;
        } else if (key == "samples") {
            cfg.samples = parse_u64(key, value);
        } else if (key == "matrices") {
            cfg.matrices = parse_u64(key, value);
        } else if (key == "bins") {
            cfg.bins = parse_u64(key, value);
        } else if (key == "hist_range") {
            cfg.hist_range = parse_double(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_u64(key, value);
        } else if (key == "workers") {
            cfg.workers = static_cast<unsigned>(parse_u64(key, value));
        } else if (key == "output") {
            cfg.output = value;
        } else if (key == "format") {
            if (value == "csv") cfg.format = ResultFormat::csv;
            else if (value == "jsonl") cfg.format = ResultFormat::jsonl;
            else throw ConfigError("key 'format': expected csv or jsonl, got '" + value + "'");
        } else if (key == "paper_scale") {
            cfg.paper_scale = parse_bool(key, value);
        } else {
            throw ConfigError("unknown key '" + key + "' (line " + std::to_string(line_no) + ")");
        }
    }
    if (!have_experiment) throw ConfigError("missing required key 'experiment'");
    if (!have_n) throw ConfigError("missing required key 'n_list'");
    if (!have_m) throw ConfigError("missing required key 'm_list'");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    out << "experiment,n,m,label,statistic,value,error,samples,master_seed\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.n << ',' << r.m << ',' << r.label << ',' << r.statistic << ','
            << format_double(r.value) << ',' << format_double(r.error) << ',' << r.samples << ','
            << r.master_seed << '\n';
    }
}

void write_records_jsonl(const std::vector<ResultRecord>& records, std::ostream& out) {
    for (const auto& r : records) {
        nlohmann::ordered_json row;
        row["experiment"] = r.experiment;
        row["n"] = r.n;
        row["m"] = r.m;
        row["label"] = r.label;
        row["statistic"] = r.statistic;
        row["value"] = r.value;
        row["error"] = r.error;
        row["samples"] = r.samples;
        row["master_seed"] = r.master_seed;
        if (!r.extra.is_null()) row["extra"] = r.extra;
        out << row.dump() << '\n';
    }
}

void write_result_file(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records) {
    if (cfg.output.empty()) throw ConfigError("no output path configured");
    const std::filesystem::path target(cfg.output);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open '" + temp.string() + "' for writing");
        if (cfg.format == ResultFormat::csv) {
            write_records_csv(records, out);
        } else {
            write_records_jsonl(records, out);
        }
        out.flush();
        if (!out) throw NumericalError("write failed for '" + temp.string() + "'");
    }
    std::filesystem::rename(temp, target);
}

}  // namespace cbsamp
