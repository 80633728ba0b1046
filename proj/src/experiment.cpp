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

#include "cbsamp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "cbsamp/collisions.hpp"
#include "cbsamp/distribution.hpp"
#include "cbsamp/permanent.hpp"
#include "cbsamp/spectra.hpp"
#include "cbsamp/stats.hpp"

namespace cbsamp {

namespace {

class PointTimer {
  public:
    explicit PointTimer(std::ostream* progress) : progress_(progress) {
        start_ = std::chrono::steady_clock::now();
    }
    void report(const std::string& line) {
        if (!progress_) return;
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", elapsed.count());
        (*progress_) << line << " (" << buf << " s)" << std::endl;
    }

  private:
    std::ostream* progress_;
    std::chrono::steady_clock::time_point start_;
};

ResultRecord make_record(const ExperimentConfig& cfg, std::uint64_t n, std::uint64_t m,
                         std::string label, std::string statistic, double value, double error,
                         std::uint64_t samples) {
    ResultRecord r;
    r.experiment = experiment_name(cfg.experiment);
    r.n = n;
    r.m = m;
    r.label = std::move(label);
    r.statistic = std::move(statistic);
    r.value = value;
    r.error = error;
    r.samples = samples;
    r.master_seed = cfg.master_seed;
    return r;
}

std::string pair_label(Ensemble a, Ensemble b) {
    return std::string(ensemble_name(a)) + "|" + ensemble_name(b);
}

void run_eigen_point(const ExperimentConfig& cfg, std::uint64_t n, std::uint64_t m,
                     std::uint64_t ratio_or_zero, const std::vector<std::pair<Ensemble, Ensemble>>& pairs,
                     std::vector<ResultRecord>& records, std::ostream* progress) {
    PointTimer timer(progress);
    const std::uint64_t samples = cfg.effective_samples();
    EigenFidelityOptions opts;
    opts.bins_per_axis = cfg.bins;
    opts.range = cfg.hist_range;
    const StreamFamily streams =
        StreamFamily(cfg.master_seed, experiment_name(cfg.experiment)).sub(n).sub(m);
    const auto fidelities = eigen_fidelity_experiment(n, m, pairs, samples, opts, streams,
                                                      ParallelOptions{cfg.workers});
    std::string summary;
    for (const auto& f : fidelities) {
        auto base = make_record(cfg, n, m, pair_label(f.first, f.second), "fidelity", f.fidelity,
                                f.sigma, samples);
        base.extra["bins"] = cfg.bins;
        base.extra["hist_range"] = cfg.hist_range;
        if (ratio_or_zero) base.extra["m_over_n"] = ratio_or_zero;
        records.push_back(base);
        auto debiased = make_record(cfg, n, m, pair_label(f.first, f.second), "fidelity_debiased",
                                    f.fidelity + f.bias, f.sigma, samples);
        debiased.extra = base.extra;
        records.push_back(debiased);
        summary += " " + pair_label(f.first, f.second) + "=" +
                   std::to_string(f.fidelity).substr(0, 6);
    }
    timer.report("[" + std::string(experiment_name(cfg.experiment)) + "] n=" + std::to_string(n) +
                 " m=" + std::to_string(m) + summary);
}

void run_eigen_fidelity(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                        std::ostream* progress) {
    const std::vector<std::pair<Ensemble, Ensemble>> pairs = {
        {Ensemble::circulant, Ensemble::gaussian},
        {Ensemble::haar, Ensemble::gaussian},
        {Ensemble::haar, Ensemble::circulant},
    };
    for (std::uint64_t n : cfg.n_list)
        for (std::uint64_t m : cfg.m_list) run_eigen_point(cfg, n, m, 0, pairs, records, progress);
}

void run_eigen_scaling(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                       std::ostream* progress) {
    const std::vector<std::pair<Ensemble, Ensemble>> pairs = {
        {Ensemble::circulant, Ensemble::gaussian},
    };
    for (std::uint64_t n : cfg.n_list) {
        for (std::uint64_t ratio : cfg.m_list) {
            run_eigen_point(cfg, n, ratio * n, ratio, pairs, records, progress);
        }
    }
}

void run_avg_permanent(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                       std::ostream* progress) {
    const std::uint64_t samples = cfg.effective_samples();
    for (std::uint64_t n : cfg.n_list) {
        const InputConfiguration inputs = InputConfiguration::contiguous(n);
        for (std::uint64_t m : cfg.m_list) {
            PointTimer timer(progress);
            const double expected = expected_gaussian_permanent_sq(n, m);
            const StreamFamily point =
                StreamFamily(cfg.master_seed, experiment_name(cfg.experiment)).sub(n).sub(m);
            std::string summary;
            for (Ensemble e : {Ensemble::circulant, Ensemble::haar, Ensemble::gaussian}) {
                const StreamFamily streams = point.sub(ensemble_name(e));
                const auto stats = run_blocks<MomentAccumulator>(
                    samples, 2048, ParallelOptions{cfg.workers},
                    [&](std::uint64_t lo, std::uint64_t hi, MomentAccumulator& block) {
                        for (std::uint64_t i = lo; i < hi; ++i) {
                            RandomStream rng = streams.at(i);
                            ComplexMatrix t;
                            switch (e) {
                                case Ensemble::circulant: {
                                    const CirculantUnitary u = CirculantUnitary::sample(m, rng);
                                    const OutputConfiguration s = sample_good_outcome(n, m, rng);
                                    t = truncate(u, inputs, s);
                                    break;
                                }
                                case Ensemble::haar:
                                    t = haar_truncation(n, m, rng);
                                    break;
                                case Ensemble::gaussian:
                                    t = ginibre_matrix(n, m, rng);
                                    break;
                            }
                            block.add(std::norm(permanent_ryser(t)));
                        }
                    });
                const std::string label = ensemble_name(e);
                records.push_back(make_record(cfg, n, m, label, "perm_sq_mean", stats.mean(),
                                              stats.stderr_mean(), samples));
                records.push_back(
                    make_record(cfg, n, m, label, "perm_sq_std", stats.stddev(), 0.0, samples));
                const double distance = std::abs(stats.mean() - expected) / expected;
                records.push_back(make_record(cfg, n, m, label, "rel_distance", distance,
                                              stats.stderr_mean() / expected, samples));
                summary += std::string(" ") + label + "=" + std::to_string(distance).substr(0, 6);
            }
            records.push_back(
                make_record(cfg, n, m, "reference", "expected_perm_sq", expected, 0.0, 0));
            timer.report("[avg-permanent] n=" + std::to_string(n) + " m=" + std::to_string(m) +
                         " rel_distance:" + summary);
        }
    }
}

void run_good_fraction(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                       std::ostream* progress) {
    const std::uint64_t samples = cfg.effective_samples();
    for (std::uint64_t n : cfg.n_list) {
        for (std::uint64_t m : cfg.m_list) {
            PointTimer timer(progress);
            const StreamFamily streams =
                StreamFamily(cfg.master_seed, experiment_name(cfg.experiment)).sub(n).sub(m);
            const FractionEstimate est =
                estimate_good_fraction(n, m, samples, streams, ParallelOptions{cfg.workers});
            records.push_back(
                make_record(cfg, n, m, "uniform", "good_fraction", est.fraction, est.stddev, samples));
            records.push_back(make_record(cfg, n, m, "uniform", "bad_fraction", 1.0 - est.fraction,
                                          est.stddev, samples));
            records.push_back(make_record(cfg, n, m, "closed-form", "good_fraction_exact",
                                          good_fraction_closed_form(n, m), 0.0, 0));
            timer.report("[good-fraction] n=" + std::to_string(n) + " m=" + std::to_string(m) +
                         " fraction=" + std::to_string(est.fraction));
        }
    }
}

void run_good_mass(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                   std::ostream* progress) {
    const std::uint64_t samples = cfg.effective_samples();
    for (std::uint64_t n : cfg.n_list) {
        for (std::uint64_t m : cfg.m_list) {
            PointTimer timer(progress);
            const StreamFamily point =
                StreamFamily(cfg.master_seed, experiment_name(cfg.experiment)).sub(n).sub(m);
            const StreamFamily matrix_streams = point.sub("matrix");
            MomentAccumulator across_matrices;
            KahanSum<double> mc_error_sq;
            for (std::uint64_t k = 0; k < cfg.matrices; ++k) {
                RandomStream matrix_rng = matrix_streams.at(k);
                const CirculantUnitary u = CirculantUnitary::sample(m, matrix_rng);
                const MassEstimate est = estimate_good_probability_mass(
                    u, n, samples, point.sub("outcomes").sub(k), ParallelOptions{cfg.workers});
                across_matrices.add(est.mass);
                mc_error_sq.add(est.error * est.error);
            }
            const double k = static_cast<double>(cfg.matrices);
            const double between = across_matrices.count > 1 ? across_matrices.variance() : 0.0;
            const double mean_mc_sq = mc_error_sq.sum / k;
            const double error = std::sqrt((between + mean_mc_sq) / k);
            auto rec = make_record(cfg, n, m, "circulant", "good_mass", across_matrices.mean(), error,
                                   samples);
            rec.extra["matrices"] = cfg.matrices;
            records.push_back(rec);
            auto bad = make_record(cfg, n, m, "circulant", "bad_mass", 1.0 - across_matrices.mean(),
                                   error, samples);
            bad.extra["matrices"] = cfg.matrices;
            records.push_back(bad);
            records.push_back(make_record(cfg, n, m, "circulant", "good_mass_spread",
                                          across_matrices.stddev(), 0.0, samples));
            timer.report("[good-mass] n=" + std::to_string(n) + " m=" + std::to_string(m) +
                         " mass=" + std::to_string(across_matrices.mean()));
        }
    }
}

void run_tv_probe(const ExperimentConfig& cfg, std::vector<ResultRecord>& records,
                  std::ostream* progress) {
    const std::uint64_t samples = cfg.effective_samples();
    for (std::uint64_t n : cfg.n_list) {
        for (std::uint64_t m : cfg.m_list) {
            PointTimer timer(progress);
            const StreamFamily point =
                StreamFamily(cfg.master_seed, experiment_name(cfg.experiment)).sub(n).sub(m);
            std::string summary;
            for (Ensemble source : {Ensemble::circulant, Ensemble::gaussian}) {
                const auto probe = variation_distance_probe(n, m, samples, cfg.bins, source,
                                                            point.sub(ensemble_name(source)),
                                                            ParallelOptions{cfg.workers});
                const std::string label = ensemble_name(source);
                auto tv = make_record(cfg, n, m, label, "max_marginal_tv", probe.max_marginal_tv,
                                      probe.tv_noise_floor, samples);
                tv.extra["bins"] = cfg.bins;
                records.push_back(tv);
                records.push_back(make_record(cfg, n, m, label, "max_intensity_correlation",
                                              probe.max_intensity_correlation, 0.0, samples));
                records.push_back(make_record(cfg, n, m, label, "max_coordinate_correlation",
                                              probe.max_coordinate_correlation, 0.0, samples));
                records.push_back(make_record(cfg, n, m, label, "tv_noise_floor",
                                              probe.tv_noise_floor, 0.0, samples));
                summary += " " + label + "_tv=" + std::to_string(probe.max_marginal_tv).substr(0, 8);
            }
            timer.report("[tv-probe] n=" + std::to_string(n) + " m=" + std::to_string(m) + summary);
        }
    }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n_list.empty()) throw ConfigError("n_list must not be empty");
    if (cfg.m_list.empty()) throw ConfigError("m_list must not be empty");
    for (std::uint64_t n : cfg.n_list)
        if (n == 0) throw ConfigError("photon counts must be positive");
    for (std::uint64_t m : cfg.m_list)
        if (m == 0) throw ConfigError("mode counts must be positive");
    if (cfg.bins < 2) throw ConfigError("bins must be at least 2");
    if (!(cfg.hist_range > 0.0)) throw ConfigError("hist_range must be positive");
    if (cfg.workers == 0) throw ConfigError("workers must be at least 1");
    if (cfg.effective_samples() == 0) throw ConfigError("samples must be positive");
    if (cfg.experiment == ExperimentKind::good_mass && cfg.matrices == 0)
        throw ConfigError("matrices must be positive");

    // Cost guards are checked for every (n, m) point before anything runs.
    for (std::uint64_t n : cfg.n_list) {
        for (std::uint64_t m_raw : cfg.m_list) {
            const std::uint64_t m =
                cfg.experiment == ExperimentKind::eigen_scaling ? m_raw * n : m_raw;
            switch (cfg.experiment) {
                case ExperimentKind::eigen_fidelity:
                case ExperimentKind::eigen_scaling:
                    if (n > 64)
                        throw GuardError("eigen experiments: n exceeds eigenvalue guard n <= 64");
                    if (m < n * n)
                        throw GuardError("eigen experiments with circulant truncations need m >= n^2 "
                                         "(n = " + std::to_string(n) + ", m = " + std::to_string(m) + ")");
                    break;
                case ExperimentKind::avg_permanent:
                case ExperimentKind::good_mass:
                    if (n > 8) throw GuardError("permanent experiments: n exceeds guard n <= 8");
                    if (m < n * n)
                        throw GuardError("circulant good outcomes need m >= n^2 (n = " +
                                         std::to_string(n) + ", m = " + std::to_string(m) + ")");
                    break;
                case ExperimentKind::tv_probe:
                    if (n > 8) throw GuardError("tv-probe: n exceeds guard n <= 8");
                    if (m < n * n)
                        throw GuardError("tv-probe needs m >= n^2 (n = " + std::to_string(n) +
                                         ", m = " + std::to_string(m) + ")");
                    break;
                case ExperimentKind::good_fraction:
                    multiset_count(n, m);  // throws if the outcome space overflows
                    break;
            }
        }
    }
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, std::ostream* progress) {
    validate_config(cfg);
    std::vector<ResultRecord> records;
    switch (cfg.experiment) {
        case ExperimentKind::eigen_fidelity: run_eigen_fidelity(cfg, records, progress); break;
        case ExperimentKind::eigen_scaling: run_eigen_scaling(cfg, records, progress); break;
        case ExperimentKind::avg_permanent: run_avg_permanent(cfg, records, progress); break;
        case ExperimentKind::good_fraction: run_good_fraction(cfg, records, progress); break;
        case ExperimentKind::good_mass: run_good_mass(cfg, records, progress); break;
        case ExperimentKind::tv_probe: run_tv_probe(cfg, records, progress); break;
    }
    return records;
}

int run_campaign(const ExperimentConfig& cfg, std::ostream& progress) {
    try {
        if (cfg.output.empty()) throw ConfigError("campaign requires an output path");
        const auto records = run_experiment(cfg, &progress);
        write_result_file(cfg, records);
        progress << "wrote " << records.size() << " records to " << cfg.output << " ("
                 << (cfg.format == ResultFormat::csv ? "csv" : "jsonl") << ", master_seed "
                 << cfg.master_seed << ", workers " << cfg.workers << ")" << std::endl;
        return 0;
    } catch (const ConfigError& e) {
        progress << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const GuardError& e) {
        progress << "guard violation: " << e.what() << std::endl;
        return 3;
    } catch (const std::invalid_argument& e) {
        progress << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        progress << "numerical failure: " << e.what() << std::endl;
        return 4;
    }
}

}  // namespace cbsamp
