#include "ilv/experiment.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "ilv/decoder.hpp"
#include "ilv/syndrome.hpp"

namespace ilv {

WilsonInterval wilson_interval(uint64_t failures, uint64_t trials) {
    if (trials == 0) {
        throw std::invalid_argument("interval requires at least one trial");
    }
    constexpr double z = 1.959963984540054;  // 95% two-sided
    const double n = double(trials);
    const double phat = double(failures) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (phat + z2n / 2.0) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2n / (4.0 * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct PointJob {
    uint32_t point_id;
    uint32_t distance_index;
    const std::vector<uint64_t>* thresholds;
};

struct SweepPlan {
    std::vector<std::pair<SyndromeGraph, SyndromeGraph>> graphs;  // per distance
    std::vector<std::vector<uint64_t>> thresholds;                // per point
    std::vector<PointJob> jobs;                                   // per point
};

uint32_t resolve_workers(uint32_t requested) {
    if (requested != 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs all jobs' trials on a worker pool. Each trial owns the random stream
// (seed, point_id, trial), so the failure counts do not depend on how trials
// are distributed over workers.
std::vector<uint64_t> run_jobs(const SweepPlan& plan, uint32_t n_trials, uint64_t seed,
                               uint32_t workers, bool correlated) {
    struct Task {
        uint32_t job;
        uint32_t first_trial;
        uint32_t count;
    };
    constexpr uint32_t chunk = 256;
    std::vector<Task> tasks;
    for (uint32_t j = 0; j < plan.jobs.size(); ++j) {
        for (uint32_t t = 0; t < n_trials; t += chunk) {
            tasks.push_back({j, t, std::min(chunk, n_trials - t)});
        }
    }

    std::vector<std::atomic<uint64_t>> failures(plan.jobs.size());
    std::atomic<size_t> next_task{0};
    const Philox4x32::Key key = key_from_seed(seed);

    const auto worker_loop = [&] {
        // one workspace pair per distance, created on first use
        std::vector<std::unique_ptr<std::pair<DecoderWorkspace, DecoderWorkspace>>> ws(
            plan.graphs.size());
        while (true) {
            const size_t task_index = next_task.fetch_add(1);
            if (task_index >= tasks.size()) {
                break;
            }
            const Task& task = tasks[task_index];
            const PointJob& job = plan.jobs[task.job];
            const auto& [primal, dual] = plan.graphs[job.distance_index];
            auto& pair = ws[job.distance_index];
            if (!pair) {
                pair = std::make_unique<std::pair<DecoderWorkspace, DecoderWorkspace>>(
                    DecoderWorkspace(primal), DecoderWorkspace(dual));
            }
            const TrialContext ctx{&primal, &dual, job.thresholds, job.thresholds, correlated};
            uint64_t local_failures = 0;
            for (uint32_t t = 0; t < task.count; ++t) {
                const TrialOutcome outcome =
                    run_trial(ctx, key, job.point_id, task.first_trial + t, pair->first,
                              pair->second);
                local_failures += outcome.fail() ? 1 : 0;
            }
            failures[task.job].fetch_add(local_failures);
        }
    };

    const uint32_t n_workers = std::min<uint32_t>(resolve_workers(workers),
                                                  uint32_t(tasks.size() == 0 ? 1 : tasks.size()));
    if (n_workers <= 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (uint32_t i = 0; i < n_workers; ++i) {
            pool.emplace_back(worker_loop);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }

    std::vector<uint64_t> counts(plan.jobs.size());
    for (size_t i = 0; i < counts.size(); ++i) {
        counts[i] = failures[i].load();
    }
    return counts;
}

}  // namespace

PointResult estimate_rate_with_probs(const DirectionalErasure& probs, uint32_t distance,
                                     uint32_t n_trials, uint64_t seed, uint32_t workers,
                                     uint32_t point_id, bool correlated_erasures,
                                     uint32_t rastering_length) {
    if (n_trials < 1) {
        throw std::invalid_argument("need at least one trial");
    }
    SweepPlan plan;
    plan.graphs.push_back(build_syndrome_graphs(distance));
    plan.thresholds.push_back(erasure_thresholds(plan.graphs[0].first, probs));
    plan.jobs.push_back({point_id, 0, &plan.thresholds[0]});

    const uint64_t failures =
        run_jobs(plan, n_trials, seed, workers, correlated_erasures)[0];
    const auto ci = wilson_interval(failures, n_trials);
    return {rastering_length, distance, 0.0, n_trials, failures,
            double(failures) / double(n_trials), ci.lo, ci.hi};
}

PointResult estimate_rate(uint32_t rastering_length, uint32_t distance, double p_baseline,
                          double p_clock, uint32_t n_trials, uint64_t seed, uint32_t workers,
                          uint32_t point_id, bool correlated_erasures) {
    const DirectionalErasure probs =
        directional_erasure({p_baseline, p_clock}, rastering_length);
    PointResult result = estimate_rate_with_probs(probs, distance, n_trials, seed, workers,
                                                  point_id, correlated_erasures,
                                                  rastering_length);
    result.p_baseline = p_baseline;
    return result;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.p_baseline_grid.empty()) {
        throw std::invalid_argument("baseline-loss grid must not be empty");
    }
    for (size_t i = 1; i < spec.p_baseline_grid.size(); ++i) {
        if (!(spec.p_baseline_grid[i] > spec.p_baseline_grid[i - 1])) {
            throw std::invalid_argument("baseline-loss grid must be strictly increasing");
        }
    }
    if (spec.distances.empty()) {
        throw std::invalid_argument("need at least one block size");
    }
    if (spec.trials_per_point < 1) {
        throw std::invalid_argument("need at least one trial per point");
    }

    SweepResult result;
    result.spec = spec;

    SweepPlan plan;
    plan.graphs.reserve(spec.distances.size());
    for (const uint32_t d : spec.distances) {
        plan.graphs.push_back(build_syndrome_graphs(d));
    }
    const uint32_t n_grid = uint32_t(spec.p_baseline_grid.size());
    plan.thresholds.resize(size_t(spec.distances.size()) * n_grid);
    for (uint32_t di = 0; di < spec.distances.size(); ++di) {
        for (uint32_t pi = 0; pi < n_grid; ++pi) {
            const uint32_t point_id = di * n_grid + pi;
            const DirectionalErasure probs = directional_erasure(
                {spec.p_baseline_grid[pi], spec.p_clock}, spec.rastering_length);
            plan.thresholds[point_id] = erasure_thresholds(plan.graphs[di].first, probs);
            plan.jobs.push_back({point_id, di, &plan.thresholds[point_id]});
        }
    }

    const std::vector<uint64_t> failures = run_jobs(plan, spec.trials_per_point, spec.seed,
                                                    spec.workers, spec.correlated_erasures);

    result.points.reserve(plan.jobs.size());
    for (uint32_t di = 0; di < spec.distances.size(); ++di) {
        for (uint32_t pi = 0; pi < n_grid; ++pi) {
            const uint32_t point_id = di * n_grid + pi;
            const uint64_t k = failures[point_id];
            const auto ci = wilson_interval(k, spec.trials_per_point);
            result.points.push_back({spec.rastering_length, spec.distances[di],
                                     spec.p_baseline_grid[pi], spec.trials_per_point, k,
                                     double(k) / double(spec.trials_per_point), ci.lo, ci.hi});
        }
    }

    std::vector<std::vector<RatePoint>> curves(spec.distances.size());
    for (uint32_t di = 0; di < spec.distances.size(); ++di) {
        curves[di].reserve(n_grid);
        for (uint32_t pi = 0; pi < n_grid; ++pi) {
            const PointResult& pt = result.points[size_t(di) * n_grid + pi];
            curves[di].push_back({pt.p_baseline, pt.n_trials, pt.n_failures});
        }
    }
    try {
        result.threshold =
            bootstrap_threshold(curves, spec.bootstrap_resamples, spec.seed ^ 0x9E3779B97F4A7C15ull);
        result.threshold_ok = true;
    } catch (const FitError& e) {
        result.errors.push_back(std::string("fit: ") + e.what());
    } catch (const ThresholdError& e) {
        result.errors.push_back(std::string("threshold: ") + e.what());
    }
    return result;
}

}  // namespace ilv
