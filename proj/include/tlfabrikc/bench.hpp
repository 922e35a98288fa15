#pragma once

#include "tlfabrikc/solver.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace tlf {

struct BenchTask {
    ArmShape initial;
    Pose target;
};

struct BenchSpec {
    int segments = 3;
    int tasks = 1000;
    std::uint64_t seed = 0;
    double theta_range = 0.5 * kPi;  // θ ~ U[0, theta_range] for initial and target shapes
    double phi_range = kTwoPi;
    double segment_length = 0.1;
    double connector_length = kDefaultConnectorLength;
    std::vector<Ablation> methods{Ablation::Tlgi, Ablation::Full, Ablation::TlgiStar, Ablation::TlfStar};
    SolverConfig solver;
    int jobs = 1;

    void validate() const;
};

/// Task `index`: initial shape and target pose (FK of a second random shape), both drawn from
/// Rng::for_task(seed, index).
BenchTask make_bench_task(const BenchSpec& spec, std::uint64_t index);

struct TaskOutcome {
    bool success = false;
    int iterations = 0;
    double time_ms = 0.0;
    /// Solver claimed success but the independent FK check disagrees.
    bool false_success = false;
    ArmShape shape;  // final solver shape
};

struct MethodStats {
    Ablation method = Ablation::Full;
    int tasks = 0;
    int successes = 0;
    int false_successes = 0;
    double success_rate = 0.0;
    /// Means over the fastest 20%, 60% and 100% of tasks after sorting each metric ascending.
    std::array<double, 3> iterations{0, 0, 0};
    std::array<double, 3> time_ms{0, 0, 0};
};

struct BenchStats {
    int segments = 0;
    std::vector<MethodStats> methods;
    /// outcomes[m][t] for method m and task t.
    std::vector<std::vector<TaskOutcome>> outcomes;
};

/// Means of the sorted prefixes covering 20%, 60% and 100% of `values` (each prefix holds at
/// least one element).
std::array<double, 3> prefix_means(std::vector<double> values);

BenchStats run_benchmark(const BenchSpec& spec);

}  // namespace tlf
