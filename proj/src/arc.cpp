#include "tlfabrikc/arc.hpp"

#include <cmath>
#include <numeric>

namespace tlf {

namespace {

constexpr double kDiscAxisLimit = 20.0 * kPi / 180.0;

// Tendon holes of consecutive segments are offset by 40 degrees around the disc.
constexpr double kSegmentHoleOffset = 40.0 * kPi / 180.0;

}  // namespace

SegmentArc SegmentArc::normalized() const {
    SegmentArc out = *this;
    out.phi = (theta == 0.0) ? 0.0 : wrap_two_pi(phi);
    return out;
}

double ArmShape::arm_length() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.length + connector_length;
    return total;
}

std::pair<double, double> disc_to_segment(const DiscAngles& discs) {
    if (discs.alpha.empty() || discs.alpha.size() != discs.beta.size()) {
        throw ConfigError("disc angle lists must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < discs.alpha.size(); ++i) {
        if (std::abs(discs.alpha[i]) > kDiscAxisLimit + 1e-12 ||
            std::abs(discs.beta[i]) > kDiscAxisLimit + 1e-12) {
            throw OutOfRangeError("disc axis rotation exceeds 20 degrees");
        }
    }
    const double sum_alpha = std::accumulate(discs.alpha.begin(), discs.alpha.end(), 0.0);
    const double sum_beta = std::accumulate(discs.beta.begin(), discs.beta.end(), 0.0);
    const double theta = std::hypot(sum_beta, sum_alpha);
    if (theta >= kPi) throw OutOfRangeError("segment bending angle reaches pi");
    if (theta == 0.0) return {0.0, 0.0};
    return {theta, wrap_two_pi(std::atan2(sum_beta, sum_alpha))};
}

RotMat segment_rotation(double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double h = std::sin(0.5 * theta);
    const double k = 2.0 * h * h;  // 1 − cos θ without cancellation
    RotMat r;
    r << ct + k * sp * sp, -k * sp * cp, st * cp,
         -k * sp * cp, ct + k * cp * cp, st * sp,
         -st * cp, -st * sp, ct;
    return r;
}

Pose segment_transform(const SegmentArc& seg) {
    const double t = seg.theta;
    const double l = seg.length;
    const double cp = std::cos(seg.phi), sp = std::sin(seg.phi);
    double radial;  // (l/θ)(1 − cos θ)
    double axial;   // (l/θ) sin θ
    if (t < kStraightThreshold) {
        radial = l * t * 0.5;
        axial = l * (1.0 - t * t / 6.0);
    } else {
        const double h = std::sin(0.5 * t);
        radial = 2.0 * l * h * h / t;
        axial = l * std::sin(t) / t;
    }
    return {Vec3(cp * radial, sp * radial, axial), segment_rotation(t, seg.phi)};
}

Vec3 arc_point(const SegmentArc& seg, double s) {
    SegmentArc partial = seg;
    partial.length = s;
    partial.theta = (seg.length > 0.0) ? seg.theta * s / seg.length : 0.0;
    return segment_transform(partial).position;
}

double virtual_link_length(double theta, double length) {
    if (theta < kStraightThreshold) return length * (0.5 + theta * theta / 24.0);
    return length / theta * std::tan(0.5 * theta);
}

Pose root_frame(const ArmShape& shape) {
    return shape.base_pose * Pose::translation(Vec3(0.0, 0.0, shape.base_extension));
}

std::vector<Pose> boundary_frames(const ArmShape& shape) {
    std::vector<Pose> frames;
    frames.reserve(2 * shape.size() + 1);
    Pose current = root_frame(shape);
    const Pose connector = Pose::translation(Vec3(0.0, 0.0, shape.connector_length));
    for (const auto& seg : shape.segments) {
        frames.push_back(current);
        current = current * segment_transform(seg);
        frames.push_back(current);
        current = current * connector;
    }
    frames.push_back(current);
    return frames;
}

Pose forward_kinematics(const ArmShape& shape) {
    Pose current = root_frame(shape);
    const Pose connector = Pose::translation(Vec3(0.0, 0.0, shape.connector_length));
    for (const auto& seg : shape.segments) {
        current = current * segment_transform(seg) * connector;
    }
    return current;
}

TendonDeltas tendon_deltas(const ArmShape& shape, double hole_radius) {
    TendonDeltas out(shape.size());
    for (std::size_t j = 0; j < shape.size(); ++j) {
        const double hole_offset = kSegmentHoleOffset * static_cast<double>(j);
        for (int m = 0; m < 3; ++m) {
            const double tendon_offset = kTwoPi * m / 3.0;
            double delta = 0.0;
            for (std::size_t jj = 0; jj <= j; ++jj) {
                const auto& s = shape.segments[jj];
                delta += hole_radius * s.theta * std::cos(s.phi + hole_offset + tendon_offset);
            }
            out[j][m] = delta;
        }
    }
    return out;
}

bool stroke_feasible(const TendonDeltas& deltas, double stroke_limit) {
    for (const auto& row : deltas) {
        for (double d : row) {
            if (std::abs(d) > stroke_limit) return false;
        }
    }
    return true;
}

}  // namespace tlf
