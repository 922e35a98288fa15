#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tlf {

using Vec3 = Eigen::Vector3d;
using RotMat = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Rigid frame: origin plus orthonormal orientation (columns are the x, y, z axes).
struct Pose {
    Vec3 position = Vec3::Zero();
    RotMat orientation = RotMat::Identity();

    Vec3 x_axis() const { return orientation.col(0); }
    Vec3 y_axis() const { return orientation.col(1); }
    Vec3 z_axis() const { return orientation.col(2); }

    /// Composition: `(*this) * other` maps points of `other`'s local frame into this frame's parent.
    Pose operator*(const Pose& other) const {
        return {position + orientation * other.position, orientation * other.orientation};
    }
    Vec3 apply(const Vec3& p) const { return position + orientation * p; }
    Pose inverse() const {
        const RotMat rt = orientation.transpose();
        return {-(rt * position), rt};
    }

    static Pose translation(const Vec3& t) { return {t, RotMat::Identity()}; }
};

struct PoseError {
    double position = 0.0;  // m
    double rotation = 0.0;  // rad
};

/// Rodrigues rotation. The axis is normalized; throws GeometryError when |axis| < 1e-12.
RotMat rotate_about_axis(const Vec3& axis, double angle);

/// Position distance plus the angle of the relative rotation R_currentᵀ·R_target.
PoseError pose_error(const Pose& current, const Pose& target);

/// Angle of a rotation matrix in [0, π], stable near both ends.
double rotation_angle(const RotMat& r);

/// Unsigned angle between two (not necessarily unit) vectors, via atan2 of |a×b| and a·b.
double angle_between(const Vec3& a, const Vec3& b);

/// Signed angle that rotates `from` onto `to` about `axis`, after projecting both onto the
/// plane orthogonal to `axis`. Returns 0 when either projection vanishes.
double signed_angle_about(const Vec3& from, const Vec3& to, const Vec3& axis);

/// Shortest-arc rotation taking unit vector `from` onto unit vector `to`.
RotMat minimal_rotation(const Vec3& from, const Vec3& to);

/// A unit vector orthogonal to `v`. Uses [-v_y, v_x, 0] normalized and falls back to [1,0,0]
/// when v is parallel to z.
Vec3 orthogonal_unit(const Vec3& v);

/// Unit direction within `half_angle` of `axis` closest to `v`; `v` itself (normalized) when
/// already inside the cone.
Vec3 project_into_cone(const Vec3& v, const Vec3& axis, double half_angle);

/// Normalize, throwing GeometryError below 1e-12.
Vec3 normalized_or_throw(const Vec3& v, const char* what);

bool is_rotation(const RotMat& r, double tol = 1e-10);

/// Re-orthonormalize a nearly orthonormal matrix (keeps the z column direction).
RotMat orthonormalize(const RotMat& r);

/// Wrap an angle to [0, 2π).
double wrap_two_pi(double a);

}  // namespace tlf
