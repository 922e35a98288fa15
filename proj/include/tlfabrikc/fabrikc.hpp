#pragma once

#include "tlfabrikc/chain.hpp"
#include "tlfabrikc/geometry.hpp"

#include <cstddef>
#include <functional>
#include <optional>

namespace tlf {

/// Result of one parameter update of a segment during a sweep.
struct SegmentUpdate {
    Vec3 joint;          // final virtual joint
    double link_length;  // updated |vl|
    double theta;        // updated bending angle
    Vec3 dir;            // unit direction from the neighbouring joint toward this segment
};

/// One FABRIKc parameter update. With vj* = target_node − target_dir·old_link_len the new
/// bend is θ = acos(target_dir · normalize(vj* − prev_joint)), the link becomes
/// (seg_len/θ)·tan(θ/2) and the joint is re-placed along target_dir with that length.
/// A vanishing vj* − prev_joint yields the straight update (θ = 0, dir = target_dir).
SegmentUpdate update_segment(const Vec3& target_node, const Vec3& target_dir, const Vec3& prev_joint,
                             double seg_len, double old_link_len);

/// Same update when the incoming direction is imposed (fixed base direction).
SegmentUpdate update_segment_with_direction(const Vec3& target_node, const Vec3& target_dir,
                                            const Vec3& incoming_dir, double seg_len);

/// What a sweep knows when it is about to move the neighbouring virtual joint.
/// `anchor` is the node already placed for the current segment and `outward` the direction
/// leaving the segment there (tip direction in a forward sweep, minus the base direction in
/// a backward sweep). `joint` is the provisional virtual joint anchor − outward·old_link.
struct JointQuery {
    std::size_t segment = 0;
    bool forward = true;
    Vec3 anchor;
    Vec3 outward;
    Vec3 joint;
    double arc_length = 0.0;
};

/// Hook that may replace the neighbouring virtual joint before the bend is computed.
using JointAdjuster = std::function<Vec3(const JointQuery&, const Vec3& neighbour_joint)>;

struct SweepOptions {
    /// Bends above this are projected back onto the cone of this half-angle.
    double theta_max = kPi;
    /// Forward sweep: incoming direction imposed on the first segment (fixed base). When
    /// empty the direction comes from the floating-base joint like any other segment.
    std::optional<Vec3> base_direction;
    JointAdjuster adjuster;
};

/// Forward reaching: pins the end-effector to `target` (position and z-axis) and updates the
/// segments from tip to base. The root generally moves.
LinkChain forward_reach(const LinkChain& chain, const Pose& target, const SweepOptions& opts = {});

/// Backward reaching: restores the root frame to `root` and updates segments from base to
/// tip. The last segment's tip direction is held at `tip_dir` (defaults to the current one).
LinkChain backward_reach(const LinkChain& chain, const Pose& root, std::optional<Vec3> tip_dir = std::nullopt,
                         const SweepOptions& opts = {});

}  // namespace tlf
