#include "tlfabrikc/ftl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlf {

TrajectoryKind parse_trajectory_kind(const std::string& name) {
    if (name == "arc") return TrajectoryKind::Arc;
    if (name == "infinity") return TrajectoryKind::Infinity;
    if (name == "s-curve") return TrajectoryKind::SCurve;
    if (name == "custom") return TrajectoryKind::Custom;
    throw ConfigError("unknown trajectory kind '" + name + "' (expected arc, infinity, s-curve or custom)");
}

std::string to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::Arc: return "arc";
        case TrajectoryKind::Infinity: return "infinity";
        case TrajectoryKind::SCurve: return "s-curve";
        case TrajectoryKind::Custom: return "custom";
    }
    return "custom";
}

namespace {

// Index i with arc[i] <= s <= arc[i+1], plus the interpolation weight.
std::pair<std::size_t, double> locate(const std::vector<double>& arc, double s) {
    if (s <= arc.front()) return {0, 0.0};
    if (s >= arc.back()) return {arc.size() - 2, 1.0};
    const auto it = std::upper_bound(arc.begin(), arc.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - arc.begin()) - 1;
    const double span = arc[i + 1] - arc[i];
    return {i, span > 0.0 ? (s - arc[i]) / span : 0.0};
}

}  // namespace

Vec3 Trajectory::point_at(double s) const {
    const auto [i, t] = locate(arc, s);
    return points[i] + t * (points[i + 1] - points[i]);
}

Vec3 Trajectory::tangent_at(double s) const {
    const auto [i, t] = locate(arc, s);
    const Vec3 v = tangents[i] + t * (tangents[i + 1] - tangents[i]);
    const double n = v.norm();
    return n > 1e-14 ? Vec3(v / n) : tangents[i];
}

double Trajectory::distance_to(const Vec3& q) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Vec3 ab = points[i + 1] - points[i];
        const double l2 = ab.squaredNorm();
        const double t = l2 > 0.0 ? std::clamp((q - points[i]).dot(ab) / l2, 0.0, 1.0) : 0.0;
        best = std::min(best, (points[i] + t * ab - q).squaredNorm());
    }
    return std::sqrt(best);
}

void Trajectory::append(const Trajectory& tail) {
    if (tail.points.empty()) return;
    std::size_t start = 0;
    if (!points.empty() && (tail.points.front() - points.back()).norm() < 1e-12) start = 1;
    for (std::size_t i = start; i < tail.points.size(); ++i) {
        const double ds = points.empty() ? 0.0 : (tail.points[i] - points.back()).norm();
        arc.push_back(arc.empty() ? 0.0 : arc.back() + ds);
        points.push_back(tail.points[i]);
        tangents.push_back(tail.tangents[i]);
    }
}

Trajectory Trajectory::from_points(std::vector<Vec3> pts, std::vector<Vec3> tans, TrajectoryKind kind) {
    if (pts.size() < 2) throw ConfigError("a trajectory needs at least two points");
    if (!tans.empty() && tans.size() != pts.size()) throw ConfigError("tangent count must match point count");
    Trajectory t;
    t.kind = kind;
    t.arc.assign(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) t.arc[i] = t.arc[i - 1] + (pts[i] - pts[i - 1]).norm();
    if (tans.empty()) {
        tans.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::size_t a = (i == 0) ? 0 : i - 1;
            const std::size_t b = (i + 1 == pts.size()) ? i : i + 1;
            tans[i] = normalized_or_throw(pts[b] - pts[a], "trajectory tangent");
        }
    } else {
        for (auto& v : tans) v = normalized_or_throw(v, "trajectory tangent");
    }
    t.points = std::move(pts);
    t.tangents = std::move(tans);
    return t;
}

void TrajectorySpec::validate() const {
    if (!(spacing > 0.0)) throw ConfigError("trajectory spacing must be positive");
    switch (kind) {
        case TrajectoryKind::Arc:
        case TrajectoryKind::SCurve:
            if (!(radius > 0.0)) throw ConfigError("trajectory radius must be positive");
            if (!(length >= 0.0)) throw ConfigError("trajectory length must be non-negative");
            break;
        case TrajectoryKind::Infinity:
            if (!(amp_x > 0.0 && amp_y > 0.0)) throw ConfigError("infinity amplitudes must be positive");
            break;
        case TrajectoryKind::Custom:
            if (points.size() < 2) throw ConfigError("custom trajectory needs at least two points");
            break;
    }
}

namespace {

// Circular arc of length `len` continuing from (p, t) and curving toward the unit normal
// `bend`; p and t are advanced to the arc end.
void add_arc(std::vector<Vec3>& pts, std::vector<Vec3>& tans, Vec3& p, Vec3& t, const Vec3& bend, double radius,
             double len, double spacing) {
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    const Vec3 n0 = bend;  // unit, orthogonal to t
    const Vec3 p0 = p;
    const Vec3 t0 = t;
    for (int i = 1; i <= n; ++i) {
        const double a = (len * i / n) / radius;
        pts.push_back(p0 + radius * std::sin(a) * t0 + radius * (1.0 - std::cos(a)) * n0);
        tans.push_back(std::cos(a) * t0 + std::sin(a) * n0);
    }
    const double a = len / radius;
    p = pts.back();
    t = std::cos(a) * t0 + std::sin(a) * n0;
}

}  // namespace

Trajectory make_trajectory(const TrajectorySpec& spec, const Pose& start, double default_phi) {
    spec.validate();
    std::vector<Vec3> pts;
    std::vector<Vec3> tans;
    const double phi = spec.bend_phi.value_or(default_phi);
    const Vec3 d(std::cos(phi), std::sin(phi), 0.0);

    switch (spec.kind) {
        case TrajectoryKind::Arc:
        case TrajectoryKind::SCurve: {
            Vec3 p = Vec3::Zero();
            Vec3 t = Vec3::UnitZ();
            pts.push_back(p);
            tans.push_back(t);
            if (spec.length > 0.0) {
                if (spec.kind == TrajectoryKind::Arc) {
                    add_arc(pts, tans, p, t, d, spec.radius, spec.length, spec.spacing);
                } else {
                    const double half = 0.5 * spec.length;
                    add_arc(pts, tans, p, t, d, spec.radius, half, spec.spacing);
                    // The second piece bends back: its curvature direction is the first piece's
                    // normal rotated with the tangent, negated.
                    const double a = half / spec.radius;
                    const Vec3 n1 = -(std::cos(a) * d - std::sin(a) * Vec3::UnitZ());
                    add_arc(pts, tans, p, t, n1, spec.radius, half, spec.spacing);
                }
            } else {
                pts.push_back(p);
                tans.push_back(t);
            }
            break;
        }
        case TrajectoryKind::Infinity: {
            const double approx = 4.0 * (spec.amp_x + spec.amp_y) * 1.5;
            const int n = std::max(16, static_cast<int>(std::ceil(approx / spec.spacing)));
            const double c = std::cos(spec.fold);
            const double s = std::sin(spec.fold);
            for (int i = 0; i <= n; ++i) {
                const double t = kTwoPi * i / n;
                const double x = spec.amp_x * std::sin(t);
                const double y = spec.amp_y * std::sin(2.0 * t);
                const double dx = spec.amp_x * std::cos(t);
                const double dy = 2.0 * spec.amp_y * std::cos(2.0 * t);
                // Each half is tilted about the local y-axis toward +z; at x = 0 the right-hand
                // derivative is used.
                const double side = (x > 0.0 || (x == 0.0 && dx >= 0.0)) ? 1.0 : -1.0;
                pts.emplace_back(x * c, y, side * x * s);
                tans.push_back(Vec3(dx * c, dy, side * dx * s).normalized());
            }
            break;
        }
        case TrajectoryKind::Custom:
            return Trajectory::from_points(spec.points, {}, TrajectoryKind::Custom);
    }

    for (auto& p : pts) p = start.apply(p);
    for (auto& t : tans) t = start.orientation * t;
    // Drop repeated points (zero-length arcs) but keep at least two.
    Trajectory out;
    out.kind = spec.kind;
    out.points.push_back(pts.front());
    out.tangents.push_back(tans.front());
    out.arc.push_back(0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double ds = (pts[i] - out.points.back()).norm();
        if (ds < 1e-15 && i + 1 < pts.size()) continue;
        out.points.push_back(pts[i]);
        out.tangents.push_back(tans[i]);
        out.arc.push_back(out.arc.back() + ds);
    }
    return out;
}

std::vector<ArmSample> sample_arm(const ArmShape& shape, double spacing) {
    if (!(spacing > 0.0)) throw ConfigError("sample spacing must be positive");
    const auto frames = boundary_frames(shape);
    const double total = shape.arm_length();
    const int n = std::max(1, static_cast<int>(std::ceil(total / spacing)));
    std::vector<ArmSample> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double s = total * i / n;
        double rem = s;
        Vec3 p = frames.back().position;
        for (std::size_t j = 0; j < shape.size(); ++j) {
            const auto& seg = shape.segments[j];
            if (rem <= seg.length) {
                p = frames[2 * j].apply(arc_point(seg, rem));
                break;
            }
            rem -= seg.length;
            if (rem <= shape.connector_length) {
                p = frames[2 * j + 1].apply(Vec3(0.0, 0.0, rem));
                break;
            }
            rem -= shape.connector_length;
        }
        out.push_back({s, p});
    }
    return out;
}

Trajectory arm_centerline(const ArmShape& shape, double spacing) {
    const auto frames = boundary_frames(shape);
    std::vector<Vec3> pts;
    std::vector<Vec3> tans;
    for (std::size_t j = 0; j < shape.size(); ++j) {
        const auto& seg = shape.segments[j];
        const int n = std::max(1, static_cast<int>(std::ceil(seg.length / spacing)));
        for (int i = (j == 0 ? 0 : 1); i <= n; ++i) {
            SegmentArc part = seg;
            part.length = seg.length * i / n;
            part.theta = seg.theta * i / n;
            const Pose f = frames[2 * j] * segment_transform(part);
            pts.push_back(f.position);
            tans.push_back(f.z_axis());
        }
        if (shape.connector_length > 0.0) {
            const Pose& tip = frames[2 * j + 1];
            const int m = std::max(1, static_cast<int>(std::ceil(shape.connector_length / spacing)));
            for (int i = 1; i <= m; ++i) {
                pts.push_back(tip.apply(Vec3(0.0, 0.0, shape.connector_length * i / m)));
                tans.push_back(tip.z_axis());
            }
        }
    }
    if (pts.size() < 2) {
        const Pose r = root_frame(shape);
        pts = {r.position, r.position + r.z_axis() * 1e-9};
        tans = {r.z_axis(), r.z_axis()};
    }
    return Trajectory::from_points(std::move(pts), std::move(tans), TrajectoryKind::Custom);
}

ArmShape fit_arm_to_path(const Trajectory& path, double s0, const ArmShape& tmpl, const RotMat& root_hint) {
    ArmShape out = tmpl;
    const Vec3 z0 = path.tangent_at(s0);
    const RotMat r0 = minimal_rotation(root_hint.col(2), z0) * root_hint;
    out.base_extension = 0.0;
    out.base_pose = Pose{path.point_at(s0), r0};

    RotMat frame = r0;
    double s = s0;
    for (auto& seg : out.segments) {
        s += seg.length;
        const Vec3 tip_dir = path.tangent_at(s);
        seg.theta = angle_between(frame.col(2), tip_dir);
        seg.phi = (seg.theta < 1e-12) ? 0.0
                                      : wrap_two_pi(std::atan2(tip_dir.dot(frame.col(1)), tip_dir.dot(frame.col(0))));
        if (seg.theta < 1e-12) seg.theta = 0.0;
        frame = frame * segment_rotation(seg.theta, seg.phi);
        s += out.connector_length;
    }
    return out;
}

namespace {

Pose ftl_root(const LinkChain& chain, const Vec3& base_point, const Vec3& base_dir, const Scene& scene,
              const Pose& mount) {
    if (scene.base.mode == BaseMode::PrismaticZ) {
        const Vec3 z = mount.z_axis();
        const double ext =
            std::clamp((base_point - mount.position).dot(z), scene.base.stroke_min, scene.base.stroke_max);
        return {mount.position + z * ext, mount.orientation};
    }
    if (scene.base.mode == BaseMode::Fixed) return mount;
    return {base_point, minimal_rotation(chain.root.z_axis(), base_dir) * chain.root.orientation};
}

}  // namespace

FtlResult ftl_plan(const ArmShape& initial, const Trajectory& extension, const Scene& scene, const SolverConfig& cfg,
                   const FtlOptions& opts) {
    scene.validate();
    if (!(opts.step > 0.0)) throw ConfigError("FTL step must be positive");
    if (opts.max_iterations < 1) throw ConfigError("FTL iteration budget must be at least 1");
    const Pose tip0 = forward_kinematics(initial);
    if (extension.points.empty() || (extension.points.front() - tip0.position).norm() > 1e-6) {
        throw ConfigError("trajectory must start at the initial tip");
    }

    FtlResult result;
    result.path = arm_centerline(initial, 0.001);
    const double arm_len = result.path.length();
    result.path.append(extension);

    SweepOptions sweep;
    sweep.theta_max = kPi;
    const bool constrained = !scene.obstacles.empty() || std::any_of(scene.theta_max.begin(), scene.theta_max.end(),
                                                                     [](double t) { return t < kPi; });
    if (constrained) sweep.adjuster = make_constraint_adjuster(scene);

    const Pose mount = root_frame(initial);
    ArmShape current = initial;
    RotMat root_hint = mount.orientation;
    const int n_steps = static_cast<int>(std::floor(extension.length() / opts.step + 1e-9));
    double sum = 0.0;
    std::size_t count = 0;

    for (int k = 1; k <= n_steps + (extension.length() > n_steps * opts.step + 1e-12 ? 1 : 0); ++k) {
        const double s_tip = std::min(arm_len + k * opts.step, result.path.length());
        const double s_base = s_tip - arm_len;
        const Vec3 base_point = result.path.point_at(s_base);
        const Vec3 base_dir = result.path.tangent_at(s_base);
        const Pose target{result.path.point_at(s_tip),
                          minimal_rotation(Vec3::UnitZ(), result.path.tangent_at(s_tip))};

        ArmShape seed = fit_arm_to_path(result.path, s_base, current, root_hint);
        if (scene.base.mode != BaseMode::FreeFloating) {
            seed.base_pose = initial.base_pose;
            seed.base_extension = initial.base_extension;
        }
        LinkChain chain = arc_to_link(seed);
        sweep.base_direction = (scene.base.mode == BaseMode::FreeFloating) ? base_dir : mount.z_axis();

        FtlIncrement inc;
        inc.tip_arc = s_tip;
        auto tip_errors = [&](const LinkChain& c) {
            inc.tip_position_error = (c.tip_position() - target.position).norm();
            inc.tip_direction_error = angle_between(c.tip_direction(), target.z_axis());
            return inc.tip_position_error <= cfg.e_min && inc.tip_direction_error <= cfg.rot_min;
        };
        bool ok = tip_errors(chain);
        while (!ok && inc.iterations < opts.max_iterations) {
            chain = forward_reach(chain, target, sweep);
            chain = backward_reach(chain, ftl_root(chain, base_point, base_dir, scene, mount), target.z_axis(), sweep);
            ++inc.iterations;
            ok = tip_errors(chain);
        }
        inc.success = ok;
        if (!ok) ++result.failures;

        ArmShape shape = link_to_arc(chain);
        if (scene.base.mode == BaseMode::PrismaticZ) {
            shape.base_pose = initial.base_pose;
            shape.base_extension = (chain.root.position - mount.position).dot(mount.z_axis()) + initial.base_extension;
        } else if (scene.base.mode == BaseMode::Fixed) {
            shape.base_pose = initial.base_pose;
            shape.base_extension = initial.base_extension;
        }
        if (ok) {
            current = shape;
            root_hint = chain.root.orientation;
        }
        inc.shape = shape;

        for (const auto& smp : sample_arm(shape, opts.sample_spacing)) {
            const double dev = result.path.distance_to(smp.point);
            inc.deviation.push_back({smp.arc_position, dev});
            inc.mean_deviation += dev;
            inc.max_deviation = std::max(inc.max_deviation, dev);
            if (dev > result.max_deviation) {
                result.max_deviation = dev;
                result.max_deviation_at = smp.arc_position;
            }
            sum += dev;
            ++count;
        }
        if (!inc.deviation.empty()) inc.mean_deviation /= static_cast<double>(inc.deviation.size());
        result.increments.push_back(std::move(inc));
    }
    result.mean_deviation = count ? sum / static_cast<double>(count) : 0.0;
    return result;
}

}  // namespace tlf
