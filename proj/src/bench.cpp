#include "tlfabrikc/bench.hpp"

#include "tlfabrikc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tlf {

namespace {

// Restart streams are separate from task generation and identical for every method.
constexpr std::uint64_t kSolverStream = 0x5eed5eed5eed5eedULL;

}  // namespace

void BenchSpec::validate() const {
    if (segments < 1) throw ConfigError("bench needs at least one segment");
    if (tasks < 1) throw ConfigError("bench needs at least one task");
    if (!(theta_range >= 0.0 && theta_range < kPi)) throw ConfigError("theta_range must lie in [0, pi)");
    if (!(phi_range >= 0.0 && phi_range <= kTwoPi)) throw ConfigError("phi_range must lie in [0, 2pi]");
    if (!(segment_length > 0.0) || !(connector_length >= 0.0)) throw ConfigError("invalid segment geometry");
    if (methods.empty()) throw ConfigError("bench needs at least one method");
    solver.validate();
}

BenchTask make_bench_task(const BenchSpec& spec, std::uint64_t index) {
    Rng rng = Rng::for_task(spec.seed, index);
    ArmShape tmpl;
    tmpl.connector_length = spec.connector_length;
    tmpl.segments.assign(static_cast<std::size_t>(spec.segments), SegmentArc{0.0, 0.0, spec.segment_length});
    auto draw = [&] {
        ArmShape s = tmpl;
        for (auto& seg : s.segments) {
            seg.theta = rng.uniform(0.0, spec.theta_range);
            seg.phi = rng.uniform(0.0, spec.phi_range);
        }
        return s;
    };
    BenchTask task;
    task.initial = draw();
    task.target = forward_kinematics(draw());
    return task;
}

std::array<double, 3> prefix_means(std::vector<double> values) {
    std::array<double, 3> out{0, 0, 0};
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    const std::array<double, 3> fractions{0.2, 0.6, 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fractions[k] * values.size())));
        out[k] = std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n), 0.0) /
                 static_cast<double>(n);
    }
    return out;
}

BenchStats run_benchmark(const BenchSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.tasks);
    std::vector<BenchTask> tasks(n);
    parallel_for(n, spec.jobs, [&](std::size_t i) { tasks[i] = make_bench_task(spec, i); });

    BenchStats stats;
    stats.segments = spec.segments;
    for (Ablation method : spec.methods) {
        const SolverConfig cfg = spec.solver.with_ablation(method);
        std::vector<TaskOutcome> outcomes(n);
        parallel_for(n, spec.jobs, [&](std::size_t i) {
            Rng rng = Rng::for_task(spec.seed ^ kSolverStream ^ spec.solver.rng_seed, i);
            const SolveReport r = solve(tasks[i].initial, tasks[i].target, cfg, rng);
            const PoseError e = pose_error(forward_kinematics(r.shape), tasks[i].target);
            const bool verified = e.position <= cfg.e_min && e.rotation <= cfg.rot_min;
            outcomes[i] = {r.success && verified, r.iterations, r.wall_time * 1e3, r.success && !verified, r.shape};
        });

        MethodStats m;
        m.method = method;
        m.tasks = spec.tasks;
        std::vector<double> iters;
        std::vector<double> times;
        for (const auto& o : outcomes) {
            m.successes += o.success ? 1 : 0;
            m.false_successes += o.false_success ? 1 : 0;
            iters.push_back(o.iterations);
            times.push_back(o.time_ms);
        }
        m.success_rate = static_cast<double>(m.successes) / static_cast<double>(spec.tasks);
        m.iterations = prefix_means(iters);
        m.time_ms = prefix_means(times);
        stats.methods.push_back(m);
        stats.outcomes.push_back(std::move(outcomes));
    }
    return stats;
}

}  // namespace tlf
