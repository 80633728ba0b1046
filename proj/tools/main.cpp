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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbsamp/collisions.hpp"
#include "cbsamp/distribution.hpp"
#include "cbsamp/experiment.hpp"
#include "cbsamp/matrix_core.hpp"
#include "cbsamp/permanent.hpp"
#include "cbsamp/spectra.hpp"

namespace {

using namespace cbsamp;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const GuardError*>(&e)) return 3;
    if (dynamic_cast<const NumericalError*>(&e)) return 4;
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
    return 4;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open '" + temp.string() + "' for writing");
        out << text;
        out.flush();
        if (!out) throw NumericalError("write failed for '" + temp.string() + "'");
    }
    std::filesystem::rename(temp, target);
}

ComplexMatrix generate_matrix(const std::string& kind, std::size_t m, std::size_t n,
                              std::uint64_t seed, nlohmann::ordered_json* meta) {
    RandomStream rng = StreamFamily(seed, "gen/" + kind).at(0);
    if (kind == "circulant") {
        const CirculantUnitary u = CirculantUnitary::sample(m, rng);
        if (meta) (*meta)["phases"] = u.phases().phases;
        return u.dense();
    }
    if (kind == "haar") return haar_unitary(m, rng);
    if (kind == "dft") return dft_matrix(m);
    if (kind == "ginibre") {
        if (n == 0) throw ConfigError("ginibre needs --n (matrix size; --m sets the 1/m variance)");
        return ginibre_matrix(n, m, rng);
    }
    throw ConfigError("unknown matrix kind '" + kind + "' (circulant|haar|ginibre|dft)");
}

ComplexMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file '" + path + "'");
    nlohmann::json j;
    in >> j;
    return matrix_from_json(j);
}

int cmd_gen(const std::string& kind, std::size_t m, std::size_t n, std::uint64_t seed,
            const std::string& out_path) {
    nlohmann::ordered_json meta;
    meta["kind"] = kind;
    meta["m"] = m;
    meta["seed"] = seed;
    const ComplexMatrix a = generate_matrix(kind, m, n, seed, &meta);
    nlohmann::ordered_json merged = meta;
    nlohmann::ordered_json mj = matrix_to_json(a);
    merged["rows"] = mj["rows"];
    merged["cols"] = mj["cols"];
    merged["entries"] = std::move(mj["entries"]);
    const std::string text = merged.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_atomic(out_path, text);
        std::cout << "wrote " << a.rows() << "x" << a.cols() << " matrix to " << out_path << std::endl;
    }
    return 0;
}

int cmd_perm(const std::string& in_path, const std::string& method) {
    const ComplexMatrix a = load_matrix(in_path);
    Complex value;
    if (method == "naive") value = permanent_naive(a);
    else if (method == "ryser") value = permanent_ryser(a);
    else throw ConfigError("unknown method '" + method + "' (naive|ryser)");
    std::cout << "permanent = " << value.real() << (value.imag() < 0 ? " - " : " + ")
              << std::abs(value.imag()) << "i" << std::endl;
    std::cout << "|permanent|^2 = " << std::norm(value) << std::endl;
    return 0;
}

int cmd_dist(const std::string& in_path, const std::string& kind, std::size_t m, std::size_t n,
             std::uint64_t seed, const std::string& out_path, const std::string& format) {
    const InputConfiguration inputs = InputConfiguration::contiguous(n);
    OutcomeDistribution dist;
    if (!in_path.empty()) {
        dist = full_distribution(load_matrix(in_path), inputs, "file:" + in_path, 0);
    } else {
        const ComplexMatrix a = generate_matrix(kind, m, 0, seed, nullptr);
        dist = full_distribution(a, inputs, kind, seed);
    }
    std::ostringstream body;
    if (format == "jsonl") {
        write_distribution_jsonl(dist, body);
    } else if (format == "csv") {
        body << "modes,probability\n";
        for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
            body << '"';
            for (std::size_t k = 0; k < dist.outcomes[i].modes.size(); ++k) {
                if (k) body << ' ';
                body << dist.outcomes[i].modes[k];
            }
            body << "\"," << dist.probabilities[i] << '\n';
        }
    } else {
        throw ConfigError("unknown format '" + format + "' (csv|jsonl)");
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        write_text_atomic(out_path, body.str());
        std::cout << "wrote " << dist.outcomes.size() << " outcomes to " << out_path << std::endl;
    }
    return 0;
}

bool check(const char* name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << std::endl;
    return ok;
}

/// Quick oracle cross-check suite: the slow reference paths against the
/// production kernels on seeded inputs.
int cmd_verify() {
    bool ok = true;
    StreamFamily streams(20260809, "verify");

    {
        bool agree = true;
        for (std::size_t n = 2; n <= 7 && agree; ++n) {
            for (std::uint64_t rep = 0; rep < 20; ++rep) {
                RandomStream rng = streams.sub("perm").sub(n).at(rep);
                const ComplexMatrix a = ginibre_matrix(n, 1, rng);
                const Complex fast = permanent_ryser(a);
                const Complex slow = permanent_naive(a);
                if (std::abs(fast - slow) > 1e-9 * std::max(1.0, std::abs(slow))) {
                    agree = false;
                    break;
                }
            }
        }
        ok &= check("permanent: Ryser matches naive enumeration (n = 2..7)", agree);
    }
    {
        RandomStream rng = streams.sub("circ").at(0);
        const CirculantUnitary u = CirculantUnitary::sample(16, rng);
        const ComplexMatrix dense = u.dense();
        bool spectrum_ok = true;
        auto lambdas = eigenvalues(dense);
        for (double phi : u.phases().phases) {
            const Complex target = std::polar(1.0, phi);
            bool found = false;
            for (auto& lambda : lambdas) {
                if (std::abs(lambda - target) < 1e-8) {
                    found = true;
                    break;
                }
            }
            spectrum_ok &= found;
        }
        ok &= check("circulant: dense spectrum equals {exp(i*phi_j)} (m = 16)", spectrum_ok);
        ok &= check("circulant: unitary to 1e-10 (m = 16)", unitarity_error(dense) <= 1e-10);
        const CirculantUnitary direct = CirculantUnitary::from_phases(u.phases());
        double gap = 0.0;
        for (std::size_t k = 0; k < 16; ++k)
            gap = std::max(gap, std::abs(direct.first_row()[k] - u.first_row()[k]));
        ok &= check("circulant: fast first row matches direct summation to 1e-10", gap <= 1e-10);
    }
    ok &= check("dft: F is unitary to 1e-12 (m = 64)", unitarity_error(dft_matrix(64)) <= 1e-12);
    {
        bool agree = true;
        for (std::size_t n = 2; n <= 3; ++n) {
            for (std::size_t m = n; m <= 12; ++m) {
                for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& modes) {
                    OutputConfiguration s(static_cast<std::uint32_t>(m), modes);
                    if (is_good_outcome(s, n, m) != is_good_outcome_index_pattern(s, n, m))
                        agree = false;
                });
            }
        }
        ok &= check("collisions: distance and index-pattern predicates agree (n <= 3, m <= 12)", agree);
    }
    {
        bool agree = true;
        for (std::size_t n = 2; n <= 4 && agree; ++n) {
            for (std::size_t m = n * n; m <= 30; ++m) {
                if (count_good_outcomes_exact(n, m) != count_good_outcomes_closed_form(n, m)) {
                    agree = false;
                    break;
                }
            }
        }
        ok &= check("collisions: exact enumeration equals closed-form gap count", agree);
    }
    {
        MomentAccumulator acc;
        for (std::uint64_t i = 0; i < 20000; ++i) {
            RandomStream rng = streams.sub("ginibre").at(i);
            acc.add(std::norm(ginibre_matrix(1, 4, rng)(0, 0)));
        }
        const bool moment_ok = std::abs(acc.mean() - 0.25) < 5.0 * acc.stderr_mean();
        ok &= check("ginibre: E|x|^2 = 1/m within 5 standard errors", moment_ok);
    }
    if (!ok) {
        std::cout << "verify: FAILED" << std::endl;
        return 4;
    }
    std::cout << "verify: all checks passed" << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circulant boson sampling laboratory"};
    app.require_subcommand(1);

    std::string gen_kind = "circulant", gen_out;
    std::size_t gen_m = 8, gen_n = 0;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a matrix and write it as JSON");
    gen->add_option("--kind", gen_kind, "circulant|haar|ginibre|dft")->capture_default_str();
    gen->add_option("--m", gen_m, "mode count (ginibre: the 1/m variance scale)")
        ->capture_default_str();
    gen->add_option("--n", gen_n, "ginibre matrix size");
    gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output path (stdout when omitted)");

    std::string perm_in, perm_method = "ryser";
    auto* perm = app.add_subcommand("perm", "permanent of a matrix from JSON");
    perm->add_option("--in", perm_in, "matrix JSON file")->required();
    perm->add_option("--method", perm_method, "naive|ryser")->capture_default_str();

    std::string dist_in, dist_kind = "circulant", dist_out, dist_format = "jsonl";
    std::size_t dist_m = 8, dist_n = 2;
    std::uint64_t dist_seed = 1;
    auto* dist = app.add_subcommand("dist", "full output distribution of a small instance");
    dist->add_option("--in", dist_in, "matrix JSON file (overrides --kind/--m/--seed)");
    dist->add_option("--kind", dist_kind, "circulant|haar|dft")->capture_default_str();
    dist->add_option("--m", dist_m, "mode count")->capture_default_str();
    dist->add_option("--n", dist_n, "photon count")->capture_default_str();
    dist->add_option("--seed", dist_seed, "random seed")->capture_default_str();
    dist->add_option("--out", dist_out, "output path (stdout when omitted)");
    dist->add_option("--format", dist_format, "csv|jsonl")->capture_default_str();

    std::string run_config, run_out;
    std::uint64_t run_seed = 0;
    unsigned run_workers = 0;
    std::string run_format;
    bool run_paper_scale = false;
    auto* run = app.add_subcommand("run", "run an experiment campaign from a config file");
    run->add_option("config", run_config, "config file (flat key = value lines)")->required();
    run->add_option("--seed", run_seed, "override master_seed");
    run->add_option("--workers", run_workers, "override worker count");
    run->add_option("--out", run_out, "override output path");
    run->add_option("--format", run_format, "override format (csv|jsonl)");
    run->add_flag("--paper-scale", run_paper_scale, "publication-scale sample counts");

    app.add_subcommand("verify", "run the oracle cross-check suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_kind, gen_m, gen_n, gen_seed, gen_out);
        if (perm->parsed()) return cmd_perm(perm_in, perm_method);
        if (dist->parsed())
            return cmd_dist(dist_in, dist_kind, dist_m, dist_n, dist_seed, dist_out, dist_format);
        if (run->parsed()) {
            ExperimentConfig cfg = parse_config_file(run_config);
            if (run_seed) cfg.master_seed = run_seed;
            if (run_workers) cfg.workers = run_workers;
            if (!run_out.empty()) cfg.output = run_out;
            if (!run_format.empty()) {
                if (run_format == "csv") cfg.format = ResultFormat::csv;
                else if (run_format == "jsonl") cfg.format = ResultFormat::jsonl;
                else throw ConfigError("unknown format '" + run_format + "'");
            }
            if (run_paper_scale) cfg.paper_scale = true;
            return run_campaign(cfg, std::cout);
        }
        return cmd_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return exit_code_for(e);
    }
}
