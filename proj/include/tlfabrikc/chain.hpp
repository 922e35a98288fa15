#pragma once

#include "tlfabrikc/arc.hpp"
#include "tlfabrikc/geometry.hpp"

#include <stdexcept>
#include <vector>

namespace tlf {

class MalformedChainError : public std::runtime_error {
  public:
    explicit MalformedChainError(const std::string& what) : std::runtime_error(what) {}
};

/// One arc replaced by two equal virtual links meeting at a virtual joint:
///   joint = base_node + base_dir·link_length = tip_node − tip_dir·link_length
struct ChainSegment {
    Vec3 base_node = Vec3::Zero();
    Vec3 tip_node = Vec3::Zero();
    Vec3 joint = Vec3::Zero();
    Vec3 base_dir = Vec3::UnitZ();
    Vec3 tip_dir = Vec3::UnitZ();
    double link_length = 0.05;
    double arc_length = 0.1;

    double theta() const { return angle_between(base_dir, tip_dir); }
};

/// Virtual link model of the whole arm. `root` is the frame at the base node of the first
/// segment; the floating base is the straight link of length `base_extension` behind it.
/// Consecutive segments are joined by rigid connectors of `connector_length` along the tip
/// direction of the proximal segment.
struct LinkChain {
    Pose root;
    double base_extension = 0.0;
    double connector_length = kDefaultConnectorLength;
    std::vector<ChainSegment> segments;

    std::size_t size() const { return segments.size(); }

    /// Base mount frame (root moved back along its z-axis by the stroke).
    Pose mount() const;
    /// Virtual joint of the floating-base link (midpoint of the stroke).
    Vec3 base_joint() const;
    /// Midpoint of the connector that follows segment j.
    Vec3 connector_joint(std::size_t j) const;

    Vec3 tip_position() const;
    Vec3 tip_direction() const;
    /// End-effector frame; the orientation is transported from the root frame through the
    /// bending rotation of every segment.
    Pose tip_pose() const;

    /// Largest violation of the virtual link relations (link equality, joint placement,
    /// connector rigidity, direction continuity), in meters or radians.
    double consistency_error() const;

    /// Applies p* = R·(p − pivot) + pivot to every point and R to every direction and to
    /// the root orientation.
    void rotate_about(const RotMat& rotation, const Vec3& pivot);
};

LinkChain arc_to_link(const ArmShape& shape);

/// Inverse of arc_to_link. θ_j is the angle between the two link directions and φ_j the
/// azimuth of the tip direction projected on the x/y axes of the segment base frame, which
/// is carried from the root frame through each segment's bending rotation.
/// Throws MalformedChainError when consistency_error() exceeds 1e-6.
ArmShape link_to_arc(const LinkChain& chain);

}  // namespace tlf
