#include "tlfabrikc/geometry.hpp"

#include <cmath>

namespace tlf {

Vec3 normalized_or_throw(const Vec3& v, const char* what) {
    const double n = v.norm();
    if (!(n >= 1e-12)) {
        throw GeometryError(std::string("cannot normalize ") + what + " (norm below 1e-12)");
    }
    return v / n;
}

RotMat rotate_about_axis(const Vec3& axis, double angle) {
    const Vec3 a = normalized_or_throw(axis, "rotation axis");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    RotMat skew;
    skew << 0.0, -a.z(), a.y(),
            a.z(), 0.0, -a.x(),
            -a.y(), a.x(), 0.0;
    return c * RotMat::Identity() + (1.0 - c) * (a * a.transpose()) + s * skew;
}

double rotation_angle(const RotMat& r) {
    const Vec3 vee(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    // |vee| = 2 sin(angle), trace - 1 = 2 cos(angle)
    return std::atan2(0.5 * vee.norm(), 0.5 * (r.trace() - 1.0));
}

PoseError pose_error(const Pose& current, const Pose& target) {
    return {(current.position - target.position).norm(),
            rotation_angle(current.orientation.transpose() * target.orientation)};
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double signed_angle_about(const Vec3& from, const Vec3& to, const Vec3& axis) {
    const Vec3 k = axis.normalized();
    const Vec3 f = from - from.dot(k) * k;
    const Vec3 t = to - to.dot(k) * k;
    if (f.norm() < 1e-15 || t.norm() < 1e-15) return 0.0;
    return std::atan2(k.dot(f.cross(t)), f.dot(t));
}

Vec3 orthogonal_unit(const Vec3& v) {
    const double h = std::hypot(v.x(), v.y());
    if (h == 0.0) return Vec3::UnitX();
    return Vec3(-v.y() / h, v.x() / h, 0.0);
}

Vec3 project_into_cone(const Vec3& v, const Vec3& axis, double half_angle) {
    const Vec3 u = v.normalized();
    if (angle_between(u, axis) <= half_angle) return u;
    Vec3 perp = u - u.dot(axis) * axis;
    const double n = perp.norm();
    perp = (n < 1e-12) ? orthogonal_unit(axis) : Vec3(perp / n);
    return (axis * std::cos(half_angle) + perp * std::sin(half_angle)).normalized();
}

RotMat minimal_rotation(const Vec3& from, const Vec3& to) {
    const Vec3 axis = from.cross(to);
    const double s = axis.norm();
    const double c = from.dot(to);
    if (s < 1e-300) {
        if (c > 0.0) return RotMat::Identity();
        return rotate_about_axis(orthogonal_unit(from), kPi);
    }
    return rotate_about_axis(axis / s, std::atan2(s, c));
}

bool is_rotation(const RotMat& r, double tol) {
    return (r.transpose() * r - RotMat::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(r.determinant() - 1.0) <= tol;
}

RotMat orthonormalize(const RotMat& r) {
    const Vec3 z = r.col(2).normalized();
    Vec3 x = r.col(0) - r.col(0).dot(z) * z;
    x.normalize();
    RotMat out;
    out.col(0) = x;
    out.col(1) = z.cross(x);
    out.col(2) = z;
    return out;
}

double wrap_two_pi(double a) {
    double t = std::fmod(a, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    return t;
}

}  // namespace tlf
