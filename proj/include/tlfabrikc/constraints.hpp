#pragma once

#include "tlfabrikc/arc.hpp"
#include "tlfabrikc/fabrikc.hpp"

#include <cstddef>
#include <vector>

namespace tlf {

struct SphereObstacle {
    Vec3 center = Vec3::Zero();
    double radius = 0.01;  // m, > 0
};

struct Scene {
    std::vector<SphereObstacle> obstacles;
    /// Bend limit per segment; a single entry applies to every segment.
    std::vector<double> theta_max{kDefaultThetaMax};
    /// Extra clearance kept between the arm centerline and every obstacle surface.
    double arm_radius = 0.0;
    BaseModel base{BaseMode::FreeFloating};
    /// Sphere grid used by the candidate search.
    int n_lat = 8;
    int n_lon = 16;
    /// Arc-length spacing for sampled distance checks and deviation profiles.
    double resolution = 0.005;

    /// Throws ConfigError on non-positive radii, limits outside (0, π), negative padding or
    /// empty grids.
    void validate() const;
    double theta_max_for(std::size_t segment) const;
};

/// Direction b on the cone of half-angle `theta_max` around unit `axis`:
///   v_c = [-a_y, a_x, 0]/|.| (or [1,0,0] for a vertical axis), v_cr = Rot(axis, θ_r)·v_c,
///   b = v_cr·sin θ_max + axis·cos θ_max.
Vec3 cone_candidate(const Vec3& axis, double theta_max, double theta_r);

/// Segment arc implied by a sweep step: the segment leaves `anchor` along `outward` and its
/// other virtual link points from `neighbour` toward `joint`.
struct ArcProbe {
    Vec3 anchor;
    Vec3 outward;
    Vec3 joint;
    Vec3 neighbour;
    double arc_length = 0.1;
};

/// Bend angle between the two virtual links of the probe.
double probe_theta(const ArcProbe& p);

/// Point at arc length s ∈ [0, arc_length] measured from the anchor.
Vec3 probe_point(const ArcProbe& p, double s);

/// Smallest distance from `point` to the reconstructed arc, computed in closed form.
double arc_point_distance(const ArcProbe& p, const Vec3& point);

/// Feasibility check: bend ≤ theta_max and clearance ≥ radius + arm_radius from every
/// obstacle along the whole reconstructed arc.
bool adcek(const ArcProbe& p, double theta_max, const std::vector<SphereObstacle>& obstacles, double arm_radius);

/// Candidate points on the sphere of `radius` around `center`. The pole is the unit vector
/// `pole` (toward the old neighbouring joint); the first candidate lies on the equator along
/// n = normalize(pole × toward_obstacle), normal of the plane through the center, the pole
/// and the obstacle. Latitude rings run from the equator toward the pole; each ring is
/// traversed in longitude steps of 2π/n_lon, shifted by π/n_lon per ring.
std::vector<Vec3> sphere_grid(const Vec3& center, double radius, const Vec3& pole, const Vec3& toward_obstacle,
                              int n_lat, int n_lon);

/// sphere_grid oriented by the old neighbour joint and the obstacle nearest to the sphere
/// center (surface distance). Without obstacles the reference direction is orthogonal_unit(pole).
std::vector<Vec3> sphere_candidates(const Vec3& center, double radius, const Vec3& old_neighbour,
                                    const std::vector<SphereObstacle>& obstacles, int n_lat, int n_lon);

/// Brings a grid point inside the bend cone: the link direction joint→candidate is projected
/// onto the cone of half-angle theta_max about -outward; a candidate whose direction is
/// exactly opposite the cone axis maps to the cone point `cone_point`.
Vec3 laloli_to_joint(const Vec3& grid_point, const Vec3& joint, const Vec3& outward, double theta_max,
                     const Vec3& cone_point);

enum class JointOutcome { Unchanged, Candidate, Fallback };

struct JointUpdate {
    Vec3 joint;
    JointOutcome outcome = JointOutcome::Unchanged;
    std::size_t candidate_index = 0;  // position in the search order when outcome == Candidate
};

/// Keeps `neighbour` when it passes adcek; otherwise searches the sphere grid (radius
/// |joint − neighbour|) and returns the first cone-projected candidate that passes, or the old
/// neighbour when none does.
JointUpdate update_virtual_joint(const JointQuery& q, const Vec3& neighbour, const Scene& scene);

/// Sweep hook running update_virtual_joint for every segment.
JointAdjuster make_constraint_adjuster(const Scene& scene);

}  // namespace tlf
