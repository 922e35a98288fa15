#pragma once

#include "tlfabrikc/arc.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace tlf {

/// Largest dispersion used to normalize the cell score.
inline constexpr double kMaxDispersion = 0.5 * kPi;

struct WorkspaceSpec {
    int samples = 5000;
    double theta_max = kDefaultThetaMax;  // θ_j ~ U[0, theta_max]
    double phi_max = kTwoPi;              // φ_j ~ U[0, phi_max)
    double cell_size = 0.1;               // m
    double hole_radius = kDefaultHoleRadius;
    double stroke_limit = kDefaultStrokeLimit;
    /// Drop shapes whose tendon deltas exceed the stroke before binning.
    bool stroke_filter = false;

    void validate() const;
};

struct WorkspacePoint {
    Vec3 position;
    Vec3 direction;  // tip z-axis
    bool stroke_ok = true;
};

struct WorkspaceCell {
    std::array<int, 3> index{0, 0, 0};
    int count = 0;
    double dispersion = 0.0;  // rad
    double score = 0.0;
};

struct WorkspaceResult {
    std::vector<WorkspacePoint> points;  // every sample, feasible or not
    std::vector<WorkspaceCell> cells;    // sorted by index
    int infeasible = 0;

    double infeasible_fraction() const {
        return points.empty() ? 0.0 : static_cast<double>(infeasible) / static_cast<double>(points.size());
    }
};

/// Mean angle over all unordered pairs of directions; 0 for fewer than two.
double dispersion(const std::vector<Vec3>& directions);

/// S = N·(1 + D / (0.5π)).
double cell_score(int count, double dispersion);

std::array<int, 3> cell_index(const Vec3& p, double cell_size);

/// Bins points into cells and scores them. Only points flagged stroke_ok are binned when
/// `feasible_only` is set.
std::vector<WorkspaceCell> bin_cells(const std::vector<WorkspacePoint>& points, double cell_size, bool feasible_only);

/// Monte Carlo workspace of `robot` (lengths, connector and base are taken from it). Sample i
/// draws from Rng::for_task(seed, i), so the result does not depend on `jobs`.
WorkspaceResult sample_workspace(const ArmShape& robot, const WorkspaceSpec& spec, std::uint64_t seed, int jobs = 1);

/// Cells grouped by x layer (cell index i), in increasing x.
std::vector<std::vector<WorkspaceCell>> x_layers(const std::vector<WorkspaceCell>& cells);

}  // namespace tlf
