#include "tlfabrikc/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlf {

void Scene::validate() const {
    for (const auto& o : obstacles) {
        if (!(o.radius > 0.0)) throw ConfigError("obstacle radius must be positive");
        if (!o.center.allFinite()) throw ConfigError("obstacle center must be finite");
    }
    if (theta_max.empty()) throw ConfigError("scene needs at least one bend limit");
    for (double t : theta_max) {
        if (!(t > 0.0 && t < kPi)) throw ConfigError("bend limits must lie in (0, pi)");
    }
    if (!(arm_radius >= 0.0)) throw ConfigError("arm_radius must be non-negative");
    if (n_lat < 1 || n_lon < 1) throw ConfigError("sphere grid needs n_lat, n_lon >= 1");
    if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
    if (base.stroke_min > base.stroke_max) throw ConfigError("stroke_min exceeds stroke_max");
}

double Scene::theta_max_for(std::size_t segment) const {
    if (theta_max.empty()) return kDefaultThetaMax;
    return theta_max[std::min(segment, theta_max.size() - 1)];
}

Vec3 cone_candidate(const Vec3& axis, double theta_max, double theta_r) {
    const Vec3 a = axis.normalized();
    const Vec3 vc = orthogonal_unit(a);
    const Vec3 vcr = rotate_about_axis(a, theta_r) * vc;
    return vcr * std::sin(theta_max) + a * std::cos(theta_max);
}

namespace {

// Unit incoming direction of the probe (from the neighbour toward the joint).
Vec3 probe_incoming(const ArcProbe& p) {
    const Vec3 d = p.joint - p.neighbour;
    const double n = d.norm();
    return n < 1e-14 ? p.outward : Vec3(d / n);
}

// Unit vector from the anchor toward the center of curvature, in the bending plane.
Vec3 probe_normal(const ArcProbe& p, const Vec3& incoming) {
    // Moving away from the anchor the curve turns from -outward toward -incoming.
    Vec3 n = -incoming - (-incoming).dot(-p.outward) * (-p.outward);
    const double len = n.norm();
    return len < 1e-14 ? Vec3::Zero() : Vec3(n / len);
}

double segment_distance(const Vec3& a, const Vec3& b, const Vec3& q) {
    const Vec3 ab = b - a;
    const double l2 = ab.squaredNorm();
    const double t = l2 > 0.0 ? std::clamp((q - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
    return (a + t * ab - q).norm();
}

}  // namespace

double probe_theta(const ArcProbe& p) {
    return angle_between(p.outward, probe_incoming(p));
}

Vec3 probe_point(const ArcProbe& p, double s) {
    const Vec3 in = probe_incoming(p);
    const double theta = angle_between(p.outward, in);
    const Vec3 t = -p.outward;
    if (theta < kStraightThreshold) return p.anchor + t * s;
    const Vec3 n = probe_normal(p, in);
    const double r = p.arc_length / theta;
    const double a = s / r;
    return p.anchor + t * (r * std::sin(a)) + n * (2.0 * r * std::sin(0.5 * a) * std::sin(0.5 * a));
}

double arc_point_distance(const ArcProbe& p, const Vec3& q) {
    const Vec3 in = probe_incoming(p);
    const double theta = angle_between(p.outward, in);
    const Vec3 t = -p.outward;
    if (theta < kStraightThreshold) return segment_distance(p.anchor, p.anchor + t * p.arc_length, q);

    const Vec3 n = probe_normal(p, in);
    const double r = p.arc_length / theta;
    const Vec3 c = p.anchor + n * r;
    // Plane coordinates with origin at the center: the anchor sits at angle 0 along -n and the
    // arc sweeps toward t.
    const Vec3 e0 = -n;
    const Vec3 e1 = t;
    const Vec3 d = q - c;
    const double u = d.dot(e0);
    const double v = d.dot(e1);
    const double off = d.dot(e0.cross(e1));
    const double rho = std::hypot(u, v);
    double ang = std::atan2(v, u);
    if (ang < 0.0) ang += kTwoPi;
    const Vec3 end = probe_point(p, p.arc_length);
    const double ends = std::min((q - p.anchor).norm(), (q - end).norm());
    if (rho > 0.0 && ang <= theta) return std::min(std::hypot(rho - r, off), ends);
    return ends;
}

bool adcek(const ArcProbe& p, double theta_max, const std::vector<SphereObstacle>& obstacles, double arm_radius) {
    if (probe_theta(p) > theta_max) return false;
    for (const auto& o : obstacles) {
        if (arc_point_distance(p, o.center) < o.radius + arm_radius) return false;
    }
    return true;
}

std::vector<Vec3> sphere_grid(const Vec3& center, double radius, const Vec3& pole, const Vec3& toward_obstacle,
                              int n_lat, int n_lon) {
    const Vec3 u = pole.normalized();
    Vec3 n = u.cross(toward_obstacle);
    n = (n.norm() < 1e-12) ? orthogonal_unit(u) : Vec3(n.normalized());
    const Vec3 m = u.cross(n);

    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n_lat) * n_lon);
    for (int i = 0; i < n_lat; ++i) {
        const double lat = i * (0.5 * kPi) / n_lat;
        for (int k = 0; k < n_lon; ++k) {
            const double lon = k * kTwoPi / n_lon + i * kPi / n_lon;
            const Vec3 dir = std::cos(lat) * (std::cos(lon) * n + std::sin(lon) * m) + std::sin(lat) * u;
            out.push_back(center + radius * dir);
        }
    }
    return out;
}

std::vector<Vec3> sphere_candidates(const Vec3& center, double radius, const Vec3& old_neighbour,
                                    const std::vector<SphereObstacle>& obstacles, int n_lat, int n_lon) {
    Vec3 pole = old_neighbour - center;
    if (pole.norm() < 1e-14) pole = Vec3::UnitZ();
    Vec3 toward = Vec3::Zero();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) {
        const double gap = (o.center - center).norm() - o.radius;
        if (gap < best) {
            best = gap;
            toward = o.center - center;
        }
    }
    return sphere_grid(center, radius, pole, toward, n_lat, n_lon);
}

Vec3 laloli_to_joint(const Vec3& grid_point, const Vec3& joint, const Vec3& outward, double theta_max,
                     const Vec3& cone_point) {
    const Vec3 d = grid_point - joint;
    const double r = d.norm();
    if (r < 1e-14) return grid_point;
    const Vec3 axis = -outward.normalized();
    const Vec3 u = d / r;
    if (angle_between(u, axis) <= theta_max) return grid_point;
    const Vec3 perp = u - u.dot(axis) * axis;
    if (perp.norm() < 1e-12) return cone_point;
    return joint + r * project_into_cone(u, axis, theta_max);
}

JointUpdate update_virtual_joint(const JointQuery& q, const Vec3& neighbour, const Scene& scene) {
    const double tmax = scene.theta_max_for(q.segment);
    const ArcProbe current{q.anchor, q.outward, q.joint, neighbour, q.arc_length};
    if (adcek(current, tmax, scene.obstacles, scene.arm_radius)) return {neighbour, JointOutcome::Unchanged, 0};

    double radius = (neighbour - q.joint).norm();
    if (radius < 1e-9) radius = q.arc_length * 0.5;
    // The bend-limit cone opens around -outward as seen from the joint.
    const Vec3 cone_point = q.joint - radius * cone_candidate(q.outward, tmax, 0.0);
    const auto grid = sphere_candidates(q.joint, radius, neighbour, scene.obstacles, scene.n_lat, scene.n_lon);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 cand = laloli_to_joint(grid[i], q.joint, q.outward, tmax, cone_point);
        const ArcProbe probe{q.anchor, q.outward, q.joint, cand, q.arc_length};
        if (adcek(probe, tmax, scene.obstacles, scene.arm_radius)) return {cand, JointOutcome::Candidate, i};
    }
    return {neighbour, JointOutcome::Fallback, 0};
}

JointAdjuster make_constraint_adjuster(const Scene& scene) {
    return [scene](const JointQuery& q, const Vec3& neighbour) { return update_virtual_joint(q, neighbour, scene).joint; };
}

}  // namespace tlf
