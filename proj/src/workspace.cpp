#include "tlfabrikc/workspace.hpp"

#include "tlfabrikc/parallel.hpp"
#include "tlfabrikc/random.hpp"

#include <cmath>
#include <map>

namespace tlf {

void WorkspaceSpec::validate() const {
    if (samples < 1) throw ConfigError("workspace needs at least one sample");
    if (!(theta_max >= 0.0 && theta_max < kPi)) throw ConfigError("workspace theta_max must lie in [0, pi)");
    if (!(phi_max >= 0.0 && phi_max <= kTwoPi)) throw ConfigError("workspace phi_max must lie in [0, 2pi]");
    if (!(cell_size > 0.0)) throw ConfigError("cell_size must be positive");
    if (!(hole_radius > 0.0) || !(stroke_limit > 0.0)) throw ConfigError("hole radius and stroke limit must be positive");
}

double dispersion(const std::vector<Vec3>& directions) {
    const std::size_t n = directions.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) sum += angle_between(directions[a], directions[b]);
    }
    return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

double cell_score(int count, double d) {
    return count * (1.0 + d / kMaxDispersion);
}

std::array<int, 3> cell_index(const Vec3& p, double cell_size) {
    return {static_cast<int>(std::floor(p.x() / cell_size)), static_cast<int>(std::floor(p.y() / cell_size)),
            static_cast<int>(std::floor(p.z() / cell_size))};
}

std::vector<WorkspaceCell> bin_cells(const std::vector<WorkspacePoint>& points, double cell_size, bool feasible_only) {
    std::map<std::array<int, 3>, std::vector<Vec3>> bins;
    for (const auto& p : points) {
        if (feasible_only && !p.stroke_ok) continue;
        bins[cell_index(p.position, cell_size)].push_back(p.direction);
    }
    std::vector<WorkspaceCell> cells;
    cells.reserve(bins.size());
    for (const auto& [idx, dirs] : bins) {
        WorkspaceCell c;
        c.index = idx;
        c.count = static_cast<int>(dirs.size());
        c.dispersion = dispersion(dirs);
        c.score = cell_score(c.count, c.dispersion);
        cells.push_back(c);
    }
    return cells;
}

WorkspaceResult sample_workspace(const ArmShape& robot, const WorkspaceSpec& spec, std::uint64_t seed, int jobs) {
    spec.validate();
    WorkspaceResult out;
    out.points.resize(static_cast<std::size_t>(spec.samples));
    parallel_for(out.points.size(), jobs, [&](std::size_t i) {
        Rng rng = Rng::for_task(seed, i);
        ArmShape s = robot;
        for (auto& seg : s.segments) {
            seg.theta = rng.uniform(0.0, spec.theta_max);
            seg.phi = rng.uniform(0.0, spec.phi_max);
        }
        const Pose tip = forward_kinematics(s);
        out.points[i] = {tip.position, tip.z_axis(),
                         stroke_feasible(tendon_deltas(s, spec.hole_radius), spec.stroke_limit)};
    });
    for (const auto& p : out.points) out.infeasible += p.stroke_ok ? 0 : 1;
    out.cells = bin_cells(out.points, spec.cell_size, spec.stroke_filter);
    return out;
}

std::vector<std::vector<WorkspaceCell>> x_layers(const std::vector<WorkspaceCell>& cells) {
    std::map<int, std::vector<WorkspaceCell>> layers;
    for (const auto& c : cells) layers[c.index[0]].push_back(c);
    std::vector<std::vector<WorkspaceCell>> out;
    out.reserve(layers.size());
    for (auto& [i, v] : layers) out.push_back(std::move(v));
    return out;
}

}  // namespace tlf
