#include "tlfabrikc/fabrikc.hpp"

#include <cmath>

namespace tlf {

namespace {

constexpr double kDegenerate = 1e-14;

void place_forward(ChainSegment& s, const Vec3& tip_node, const Vec3& tip_dir, const Vec3& incoming) {
    const double theta = angle_between(incoming, tip_dir);
    const double h = virtual_link_length(theta, s.arc_length);
    s.tip_node = tip_node;
    s.tip_dir = tip_dir;
    s.base_dir = incoming;
    s.link_length = h;
    s.joint = tip_node - tip_dir * h;
    s.base_node = s.joint - incoming * h;
}

void place_backward(ChainSegment& s, const Vec3& base_node, const Vec3& base_dir, const Vec3& outgoing) {
    const double theta = angle_between(base_dir, outgoing);
    const double h = virtual_link_length(theta, s.arc_length);
    s.base_node = base_node;
    s.base_dir = base_dir;
    s.tip_dir = outgoing;
    s.link_length = h;
    s.joint = base_node + base_dir * h;
    s.tip_node = s.joint + outgoing * h;
}

// Direction from `from` toward `to`, or `fallback` when the points coincide.
Vec3 direction_or(const Vec3& from, const Vec3& to, const Vec3& fallback) {
    const Vec3 d = to - from;
    const double n = d.norm();
    return (n < kDegenerate) ? fallback : Vec3(d / n);
}

}  // namespace

SegmentUpdate update_segment(const Vec3& target_node, const Vec3& target_dir, const Vec3& prev_joint,
                             double seg_len, double old_link_len) {
    const Vec3 provisional = target_node - target_dir * old_link_len;
    const Vec3 dir = direction_or(prev_joint, provisional, target_dir);
    return update_segment_with_direction(target_node, target_dir, dir, seg_len);
}

SegmentUpdate update_segment_with_direction(const Vec3& target_node, const Vec3& target_dir,
                                            const Vec3& incoming_dir, double seg_len) {
    SegmentUpdate out;
    out.dir = incoming_dir;
    out.theta = angle_between(target_dir, incoming_dir);
    out.link_length = virtual_link_length(out.theta, seg_len);
    out.joint = target_node - target_dir * out.link_length;
    return out;
}

LinkChain forward_reach(const LinkChain& chain, const Pose& target, const SweepOptions& opts) {
    LinkChain out = chain;
    const std::size_t n = out.size();
    if (n == 0) return out;

    Vec3 dir = target.z_axis();
    Vec3 node = target.position - dir * out.connector_length;
    for (std::size_t k = n; k-- > 0;) {
        ChainSegment& s = out.segments[k];
        Vec3 incoming;
        if (k == 0 && opts.base_direction) {
            incoming = *opts.base_direction;
        } else {
            Vec3 neighbour = (k > 0) ? chain.segments[k - 1].joint : chain.base_joint();
            const Vec3 provisional = node - dir * s.link_length;
            if (opts.adjuster) {
                neighbour = opts.adjuster(JointQuery{k, true, node, dir, provisional, s.arc_length}, neighbour);
            }
            incoming = direction_or(neighbour, provisional, dir);
            incoming = project_into_cone(incoming, dir, opts.theta_max);
        }
        place_forward(s, node, dir, incoming);
        node = s.base_node - incoming * out.connector_length;
        dir = incoming;
    }

    const ChainSegment& first = out.segments.front();
    out.root.orientation = minimal_rotation(out.root.z_axis(), first.base_dir) * out.root.orientation;
    out.root.position = first.base_node;
    return out;
}

LinkChain backward_reach(const LinkChain& chain, const Pose& root, std::optional<Vec3> tip_dir,
                         const SweepOptions& opts) {
    LinkChain out = chain;
    const std::size_t n = out.size();
    out.root = root;
    if (n == 0) return out;
    const Vec3 held_tip_dir = tip_dir.value_or(chain.tip_direction());

    Vec3 node = root.position;
    Vec3 dir = root.z_axis();
    for (std::size_t k = 0; k < n; ++k) {
        ChainSegment& s = out.segments[k];
        Vec3 outgoing;
        if (k + 1 == n) {
            outgoing = held_tip_dir;
        } else {
            Vec3 neighbour = chain.segments[k + 1].joint;
            const Vec3 provisional = node + dir * s.link_length;
            if (opts.adjuster) {
                neighbour = opts.adjuster(JointQuery{k, false, node, -dir, provisional, s.arc_length}, neighbour);
            }
            outgoing = direction_or(provisional, neighbour, dir);
            outgoing = project_into_cone(outgoing, dir, opts.theta_max);
        }
        place_backward(s, node, dir, outgoing);
        node = s.tip_node + outgoing * out.connector_length;
        dir = outgoing;
    }
    return out;
}

}  // namespace tlf
