#pragma once

#include "tlfabrikc/arc.hpp"
#include "tlfabrikc/constraints.hpp"
#include "tlfabrikc/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tlf {

enum class TrajectoryKind { Arc, Infinity, SCurve, Custom };

TrajectoryKind parse_trajectory_kind(const std::string& name);
std::string to_string(TrajectoryKind k);

/// Arc-length parameterized polyline with unit tangents.
struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::Custom;
    std::vector<Vec3> points;
    std::vector<Vec3> tangents;
    std::vector<double> arc;  // cumulative length, arc[0] = 0

    double length() const { return arc.empty() ? 0.0 : arc.back(); }
    /// Linear interpolation at arc length s (clamped to the ends); the tangent is renormalized.
    Vec3 point_at(double s) const;
    Vec3 tangent_at(double s) const;
    /// Distance from q to the nearest point of the polyline.
    double distance_to(const Vec3& q) const;
    /// Appends `tail`, dropping its first point when it coincides with the current end.
    void append(const Trajectory& tail);

    /// Builds the cumulative arc lengths; tangents are normalized (or taken from finite
    /// differences when empty). Throws ConfigError on fewer than two points.
    static Trajectory from_points(std::vector<Vec3> points, std::vector<Vec3> tangents = {},
                                  TrajectoryKind kind = TrajectoryKind::Custom);
};

struct TrajectorySpec {
    TrajectoryKind kind = TrajectoryKind::Arc;
    double radius = 0.2;   // arc and s-curve radius, m
    double length = 0.4;   // arc and s-curve length, m
    /// Bending direction in the start frame's x/y plane. Empty: the bending plane of the last
    /// segment, so the path continues the arm's curvature.
    std::optional<double> bend_phi;
    double amp_x = 0.2;            // infinity: x(t) = amp_x sin t
    double amp_y = 0.1;            // infinity: y(t) = amp_y sin 2t
    double fold = kPi / 6.0;       // infinity: tilt of each half about the local y-axis
    std::vector<Vec3> points;      // custom, world coordinates
    double spacing = 0.001;        // polyline spacing, m

    void validate() const;
};

/// Trajectory expressed in `start`: arc and s-curve leave the origin along z; the infinity
/// curve is centered on the origin in the local x/y plane.
Trajectory make_trajectory(const TrajectorySpec& spec, const Pose& start, double default_phi = 0.0);

/// Centerline of the arm from the segment-1 root to the tip, connectors included.
Trajectory arm_centerline(const ArmShape& shape, double spacing = 0.001);

struct ArmSample {
    double arc_position;  // from the segment-1 root, m
    Vec3 point;
};

/// Points every `spacing` along the arm (both ends included).
std::vector<ArmSample> sample_arm(const ArmShape& shape, double spacing);

/// Arm fitted to the path window [s0, s0 + arm_length]: the root sits on path(s0) along its
/// tangent (root x-axis carried over from `root_hint` by a minimal rotation) and every segment
/// bends so its tip direction matches the path tangent at the same arc position.
ArmShape fit_arm_to_path(const Trajectory& path, double s0, const ArmShape& tmpl, const RotMat& root_hint);

struct DeviationSample {
    double arc_position;
    double deviation;
};

struct FtlIncrement {
    double tip_arc = 0.0;  // path arc length at the tip target
    bool success = false;
    int iterations = 0;
    double tip_position_error = 0.0;  // m
    double tip_direction_error = 0.0; // rad
    ArmShape shape;
    std::vector<DeviationSample> deviation;
    double mean_deviation = 0.0;
    double max_deviation = 0.0;
};

struct FtlResult {
    Trajectory path;
    std::vector<FtlIncrement> increments;
    double mean_deviation = 0.0;
    double max_deviation = 0.0;
    /// Arc position of the worst sample.
    double max_deviation_at = 0.0;
    int failures = 0;
};

struct FtlOptions {
    double step = 0.005;            // tip advance per increment, m
    double sample_spacing = 0.002;  // deviation sampling along the arm, m
    int max_iterations = 200;       // sweep pairs per increment
};

/// Follow-the-leader plan along the initial centerline extended by `extension`, which must
/// start at the initial tip. The base follows the path start point in free-floating mode or
/// rides the mount axis in prismatic mode; obstacles and bend limits act through
/// update_virtual_joint inside the sweeps. cfg.e_min and cfg.rot_min are the tip tolerances.
FtlResult ftl_plan(const ArmShape& initial, const Trajectory& extension, const Scene& scene, const SolverConfig& cfg,
                   const FtlOptions& opts = {});

}  // namespace tlf
