#pragma once

#include "tlfabrikc/geometry.hpp"

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tlf {

/// Rigid C-disk connector between consecutive segments (17.74 mm on the prototype).
inline constexpr double kDefaultConnectorLength = 0.01774;
inline constexpr double kDefaultHoleRadius = 0.0075;
inline constexpr double kDefaultStrokeLimit = 0.030;
inline constexpr double kDefaultScrewLimit = 0.100;
/// Eight disc groups at 20 degrees per axis: 160 degrees, about 0.89π.
inline constexpr double kDefaultThetaMax = 160.0 * kPi / 180.0;

/// Below this bending angle the arc formulas switch to their Taylor expansions.
inline constexpr double kStraightThreshold = 1e-7;

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class OutOfRangeError : public std::runtime_error {
  public:
    explicit OutOfRangeError(const std::string& what) : std::runtime_error(what) {}
};

enum class BaseMode { Fixed, PrismaticZ, FreeFloating };

/// Mobility of the arm root. The prismatic stroke moves the root along the mount z-axis.
struct BaseModel {
    BaseMode mode = BaseMode::Fixed;
    double stroke_min = -kDefaultScrewLimit;
    double stroke_max = kDefaultScrewLimit;
};

/// Constant-curvature segment: bending angle, bending-plane direction and arc length.
struct SegmentArc {
    double theta = 0.0;   // [0, π)
    double phi = 0.0;     // [0, 2π)
    double length = 0.1;  // m

    /// Copy with phi wrapped to [0, 2π) and phi forced to 0 for a straight segment.
    SegmentArc normalized() const;
};

struct ArmShape {
    std::vector<SegmentArc> segments;
    double connector_length = kDefaultConnectorLength;
    double base_extension = 0.0;
    Pose base_pose;

    std::size_t size() const { return segments.size(); }
    /// Arc length of the whole arm including connectors (base stroke excluded).
    double arm_length() const;
};

/// Per-disc gimbal rotations of one segment, in radians.
struct DiscAngles {
    std::vector<double> alpha;
    std::vector<double> beta;
};

/// Signed tendon length changes, one row per segment, three tendons per segment.
using TendonDeltas = std::vector<std::array<double, 3>>;

/// Bending angle and direction from the summed disc rotations.
/// Throws OutOfRangeError when the resulting bend reaches π.
std::pair<double, double> disc_to_segment(const DiscAngles& discs);

/// Tip frame of one segment relative to its base frame.
Pose segment_transform(const SegmentArc& seg);

/// Rotation part of segment_transform: Rz(φ)·Ry(θ)·Rz(−φ).
RotMat segment_rotation(double theta, double phi);

/// Equal length of the two virtual links replacing an arc: (l/θ)·tan(θ/2), l/2 at θ = 0.
double virtual_link_length(double theta, double length);

/// Frame at the root of segment 1 (base pose followed by the prismatic stroke).
Pose root_frame(const ArmShape& shape);

/// Frames at every segment boundary: element 2j is the base of segment j, 2j+1 its tip
/// (before the connector). The last element is the end-effector frame.
std::vector<Pose> boundary_frames(const ArmShape& shape);

/// End-effector frame in world coordinates.
Pose forward_kinematics(const ArmShape& shape);

/// Point on segment `seg` at arc length `s`, in the segment's base frame.
Vec3 arc_point(const SegmentArc& seg, double s);

TendonDeltas tendon_deltas(const ArmShape& shape, double hole_radius = kDefaultHoleRadius);

bool stroke_feasible(const TendonDeltas& deltas, double stroke_limit = kDefaultStrokeLimit);

}  // namespace tlf
