#include "tlfabrikc/chain.hpp"

#include <algorithm>
#include <cmath>

namespace tlf {

namespace {

constexpr double kMalformedTolerance = 1e-6;

}  // namespace

Pose LinkChain::mount() const {
    return {root.position - root.z_axis() * base_extension, root.orientation};
}

Vec3 LinkChain::base_joint() const {
    return root.position - root.z_axis() * (0.5 * base_extension);
}

Vec3 LinkChain::connector_joint(std::size_t j) const {
    const auto& s = segments.at(j);
    return s.tip_node + s.tip_dir * (0.5 * connector_length);
}

Vec3 LinkChain::tip_position() const {
    if (segments.empty()) return root.position;
    const auto& last = segments.back();
    return last.tip_node + last.tip_dir * connector_length;
}

Vec3 LinkChain::tip_direction() const {
    return segments.empty() ? root.z_axis() : segments.back().tip_dir;
}

Pose LinkChain::tip_pose() const {
    RotMat r = root.orientation;
    for (const auto& s : segments) {
        r = minimal_rotation(r.col(2), s.tip_dir) * r;
    }
    return {tip_position(), r};
}

double LinkChain::consistency_error() const {
    double worst = 0.0;
    auto note = [&worst](double v) { worst = std::max(worst, v); };
    Vec3 expected_node = root.position;
    Vec3 expected_dir = root.z_axis();
    for (const auto& s : segments) {
        note((s.base_node - expected_node).norm());
        note((s.base_dir - expected_dir).norm());
        note(std::abs(s.base_dir.norm() - 1.0));
        note(std::abs(s.tip_dir.norm() - 1.0));
        note((s.joint - (s.base_node + s.base_dir * s.link_length)).norm());
        note((s.joint - (s.tip_node - s.tip_dir * s.link_length)).norm());
        note(std::abs(s.link_length - virtual_link_length(s.theta(), s.arc_length)));
        expected_node = s.tip_node + s.tip_dir * connector_length;
        expected_dir = s.tip_dir;
    }
    return worst;
}

void LinkChain::rotate_about(const RotMat& rotation, const Vec3& pivot) {
    auto move = [&](Vec3& p) { p = rotation * (p - pivot) + pivot; };
    move(root.position);
    root.orientation = rotation * root.orientation;
    for (auto& s : segments) {
        move(s.base_node);
        move(s.tip_node);
        move(s.joint);
        s.base_dir = rotation * s.base_dir;
        s.tip_dir = rotation * s.tip_dir;
    }
}

LinkChain arc_to_link(const ArmShape& shape) {
    LinkChain chain;
    chain.base_extension = shape.base_extension;
    chain.connector_length = shape.connector_length;
    chain.root = root_frame(shape);
    chain.segments.reserve(shape.size());

    Pose frame = chain.root;
    for (const auto& arc : shape.segments) {
        ChainSegment s;
        s.arc_length = arc.length;
        s.base_node = frame.position;
        s.base_dir = frame.z_axis();
        frame = frame * segment_transform(arc);
        s.tip_node = frame.position;
        s.tip_dir = frame.z_axis();
        s.link_length = virtual_link_length(arc.theta, arc.length);
        s.joint = s.base_node + s.base_dir * s.link_length;
        chain.segments.push_back(s);
        frame.position += frame.z_axis() * shape.connector_length;
    }
    return chain;
}

ArmShape link_to_arc(const LinkChain& chain) {
    const double err = chain.consistency_error();
    if (!(err <= kMalformedTolerance)) {
        throw MalformedChainError("link chain violates virtual link relations by " +
                                  std::to_string(err));
    }
    ArmShape shape;
    shape.connector_length = chain.connector_length;
    shape.base_extension = chain.base_extension;
    shape.base_pose = chain.mount();
    shape.segments.reserve(chain.size());

    RotMat frame = chain.root.orientation;
    for (const auto& s : chain.segments) {
        SegmentArc arc;
        arc.length = s.arc_length;
        arc.theta = angle_between(frame.col(2), s.tip_dir);
        if (arc.theta < 1e-12) {
            arc.theta = 0.0;
            arc.phi = 0.0;
        } else {
            arc.phi = wrap_two_pi(std::atan2(s.tip_dir.dot(frame.col(1)), s.tip_dir.dot(frame.col(0))));
        }
        frame = frame * segment_rotation(arc.theta, arc.phi);
        shape.segments.push_back(arc);
    }
    return shape;
}

}  // namespace tlf
