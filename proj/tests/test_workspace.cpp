#include "test_support.hpp"
#include "tlfabrikc/bench.hpp"
#include "tlfabrikc/workspace.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace tlf;

namespace {

double pairwise_mean(const std::vector<Vec3>& d) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const double c = std::clamp(d[i].normalized().dot(d[j].normalized()), -1.0, 1.0);
            sum += std::acos(c);
            ++n;
        }
    }
    return n ? sum / n : 0.0;
}

ArmShape robot3() {
    ArmShape s;
    s.segments.assign(3, SegmentArc{0.0, 0.0, 0.1});
    return s;
}

}  // namespace

TEST(Dispersion, ClosedForms) {
    EXPECT_EQ(dispersion({}), 0.0);
    EXPECT_EQ(dispersion({Vec3::UnitX()}), 0.0);
    EXPECT_NEAR(dispersion({Vec3::UnitZ(), -Vec3::UnitZ()}), kPi, 1e-15);
    EXPECT_NEAR(cell_score(2, kPi), 6.0, 1e-15);
    EXPECT_NEAR(cell_score(1, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(cell_score(4, 0.25 * kPi), 6.0, 1e-15);
    EXPECT_NEAR(dispersion({Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}), kPi / 2, 1e-15);
}

TEST(Dispersion, PairwiseOracle) {
    Rng rng(71);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Vec3> d;
        const int n = 2 + static_cast<int>(rng.uniform(0, 30));
        for (int i = 0; i < n; ++i) d.push_back(tlf::testing::random_unit(rng));
        EXPECT_NEAR(dispersion(d), pairwise_mean(d), 1e-12);
    }
}

TEST(CellIndex, FloorsTowardNegative) {
    EXPECT_EQ(cell_index(Vec3(0.05, -0.05, 0.15), 0.1), (std::array<int, 3>{0, -1, 1}));
    EXPECT_EQ(cell_index(Vec3(-0.1, 0.0, 0.2999), 0.1), (std::array<int, 3>{-1, 0, 2}));
}

TEST(BinCells, CountsDispersionScores) {
    Rng rng(72);
    std::vector<WorkspacePoint> pts;
    for (int i = 0; i < 500; ++i) {
        pts.push_back({Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(0, 0.3)),
                       tlf::testing::random_unit(rng), rng.uniform(0, 1) < 0.7});
    }
    for (bool feasible_only : {false, true}) {
        const auto cells = bin_cells(pts, 0.1, feasible_only);
        std::map<std::array<int, 3>, std::vector<Vec3>> groups;
        for (const auto& p : pts) {
            if (feasible_only && !p.stroke_ok) continue;
            groups[cell_index(p.position, 0.1)].push_back(p.direction);
        }
        ASSERT_EQ(cells.size(), groups.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) EXPECT_LT(cells[i - 1].index, cells[i].index);
            const auto& g = groups.at(cells[i].index);
            EXPECT_EQ(cells[i].count, static_cast<int>(g.size()));
            EXPECT_NEAR(cells[i].dispersion, pairwise_mean(g), 1e-12);
            EXPECT_NEAR(cells[i].score, g.size() * (1.0 + pairwise_mean(g) / (0.5 * kPi)), 1e-9);
        }
    }
}

TEST(SampleWorkspace, SingleSample) {
    WorkspaceSpec spec;
    spec.samples = 1;
    const auto r = sample_workspace(robot3(), spec, 5);
    ASSERT_EQ(r.cells.size(), 1u);
    EXPECT_EQ(r.cells[0].count, 1);
    EXPECT_EQ(r.cells[0].dispersion, 0.0);
    EXPECT_EQ(r.cells[0].score, 1.0);
}

TEST(SampleWorkspace, DeterministicAcrossJobs) {
    WorkspaceSpec spec;
    spec.samples = 2000;
    const auto a = sample_workspace(robot3(), spec, 9, 1);
    const auto b = sample_workspace(robot3(), spec, 9, 4);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].position, b.points[i].position);
        EXPECT_EQ(a.points[i].stroke_ok, b.points[i].stroke_ok);
    }
    EXPECT_EQ(a.infeasible, b.infeasible);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].score, b.cells[i].score);
}

TEST(SampleWorkspace, PointsAreForwardKinematics) {
    WorkspaceSpec spec;
    spec.samples = 300;
    spec.theta_max = 0.89 * kPi;
    const auto r = sample_workspace(robot3(), spec, 3);
    int infeasible = 0;
    for (const auto& p : r.points) {
        EXPECT_NEAR(p.direction.norm(), 1.0, 1e-12);
        EXPECT_LE(p.position.norm(), 0.3 + 3 * kDefaultConnectorLength + 1e-12);
        infeasible += p.stroke_ok ? 0 : 1;
    }
    EXPECT_EQ(infeasible, r.infeasible);
    EXPECT_GT(r.infeasible_fraction(), 0.0);
    spec.stroke_filter = true;
    const auto f = sample_workspace(robot3(), spec, 3);
    int binned = 0;
    for (const auto& c : f.cells) binned += c.count;
    EXPECT_EQ(binned, spec.samples - f.infeasible);
}

TEST(SampleWorkspace, Validation) {
    WorkspaceSpec spec;
    spec.samples = 0;
    EXPECT_THROW(spec.validate(), ConfigError);
    spec = {};
    spec.cell_size = 0.0;
    EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(XLayers, GroupsByFirstIndex) {
    std::vector<WorkspaceCell> cells{{{-1, 0, 0}, 1, 0, 1}, {{-1, 2, 0}, 1, 0, 1}, {{0, 0, 1}, 2, 0, 2}};
    const auto layers = x_layers(cells);
    ASSERT_EQ(layers.size(), 2u);
    EXPECT_EQ(layers[0].size(), 2u);
    EXPECT_EQ(layers[1][0].index[0], 0);
}

TEST(PrefixMeans, SortedPrefixOracle) {
    const auto m = prefix_means({5, 1, 4, 2, 3, 10, 6, 7, 8, 9});
    EXPECT_DOUBLE_EQ(m[0], 1.5);
    EXPECT_DOUBLE_EQ(m[1], 3.5);
    EXPECT_DOUBLE_EQ(m[2], 5.5);
    const auto one = prefix_means({4.0});
    EXPECT_EQ(one, (std::array<double, 3>{4.0, 4.0, 4.0}));
    Rng rng(73);
    std::vector<double> v;
    for (int i = 0; i < 137; ++i) v.push_back(rng.uniform(0, 100));
    const auto r = prefix_means(v);
    EXPECT_LE(r[0], r[1]);
    EXPECT_LE(r[1], r[2]);
}

TEST(Bench, TasksDeterministicAndInRange) {
    BenchSpec spec;
    spec.segments = 4;
    const BenchTask a = make_bench_task(spec, 17);
    const BenchTask b = make_bench_task(spec, 17);
    EXPECT_EQ(a.target.position, b.target.position);
    for (const auto& seg : a.initial.segments) {
        EXPECT_LE(seg.theta, 0.5 * kPi);
        EXPECT_EQ(seg.length, 0.1);
    }
    const BenchTask c = make_bench_task(spec, 18);
    EXPECT_NE(a.target.position, c.target.position);
}

TEST(Bench, TwoSegmentRun) {
    BenchSpec spec;
    spec.segments = 2;
    spec.tasks = 200;
    spec.seed = 7;
    spec.jobs = 4;
    const BenchStats s = run_benchmark(spec);
    ASSERT_EQ(s.methods.size(), 4u);
    for (const auto& m : s.methods) {
        EXPECT_EQ(m.successes, 200);
        EXPECT_EQ(m.false_successes, 0);
        EXPECT_LE(m.iterations[0], m.iterations[1]);
        EXPECT_LE(m.iterations[1], m.iterations[2]);
        EXPECT_LE(m.time_ms[0], m.time_ms[1]);
        EXPECT_LE(m.time_ms[1], m.time_ms[2]);
        EXPECT_GT(m.iterations[2], 1.0);
        EXPECT_LT(m.iterations[2], 4.0);
    }
    // Worker count does not change results.
    spec.jobs = 1;
    const BenchStats t = run_benchmark(spec);
    for (std::size_t k = 0; k < s.methods.size(); ++k) {
        EXPECT_EQ(s.methods[k].iterations, t.methods[k].iterations);
        EXPECT_EQ(s.methods[k].successes, t.methods[k].successes);
    }
}

TEST(Bench, Validation) {
    BenchSpec spec;
    spec.tasks = 0;
    EXPECT_THROW(spec.validate(), ConfigError);
    spec = {};
    spec.methods.clear();
    EXPECT_THROW(spec.validate(), ConfigError);
    spec = {};
    spec.theta_range = kPi;
    EXPECT_THROW(spec.validate(), ConfigError);
}
