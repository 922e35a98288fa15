#include "tlfabrikc/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#ifndef TLF_GIT_REVISION
#define TLF_GIT_REVISION "unknown"
#endif

namespace tlf {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw InputError(what + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "schema_version" && !allowed.count(key)) throw InputError("unknown key '" + key + "' in " + what);
    }
}

template <class T>
void read_opt(const Json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

std::vector<double> double_list(const Json& j, const char* what) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) throw InputError(std::string(what) + " must be a number or an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError(std::string(what) + " must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v;
    return ss.str();
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

void check_schema(const Json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("schema_version")) throw InputError(what + ": missing schema_version");
    if (!j.at("schema_version").is_number_integer()) throw InputError(what + ": schema_version must be an integer");
    const int v = j.at("schema_version").get<int>();
    if (v < 1 || v > kSchemaVersion) throw InputError(what + ": unsupported schema_version " + std::to_string(v));
}

Json to_json(const Vec3& v) {
    return Json::array({v.x(), v.y(), v.z()});
}

Vec3 vec3_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw InputError("expected a 3-element array");
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError("vector entries must be numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json to_json(const Pose& p) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(Json::array({p.orientation(r, 0), p.orientation(r, 1), p.orientation(r, 2)}));
    return {{"position", to_json(p.position)}, {"orientation", rows}};
}

Pose pose_from_json(const Json& j) {
    check_keys(j, {"position", "orientation"}, "pose");
    Pose p;
    if (j.contains("position")) p.position = vec3_from_json(j.at("position"));
    if (j.contains("orientation")) {
        const Json& rows = j.at("orientation");
        if (!rows.is_array() || rows.size() != 3) throw InputError("orientation must be a 3x3 array of rows");
        for (int r = 0; r < 3; ++r) p.orientation.row(r) = vec3_from_json(rows[r]).transpose();
        if (!is_rotation(p.orientation, 1e-6)) throw InputError("orientation is not a rotation matrix");
        p.orientation = orthonormalize(p.orientation);
    }
    return p;
}

std::string to_string(BaseMode m) {
    switch (m) {
        case BaseMode::Fixed: return "fixed";
        case BaseMode::PrismaticZ: return "prismatic-z";
        case BaseMode::FreeFloating: return "free-floating";
    }
    return "fixed";
}

BaseMode parse_base_mode(const std::string& s) {
    if (s == "fixed") return BaseMode::Fixed;
    if (s == "prismatic-z") return BaseMode::PrismaticZ;
    if (s == "free-floating") return BaseMode::FreeFloating;
    throw InputError("unknown base mode '" + s + "' (expected fixed, prismatic-z or free-floating)");
}

Json to_json(const BaseModel& b) {
    return {{"mode", to_string(b.mode)}, {"stroke_min", b.stroke_min}, {"stroke_max", b.stroke_max}};
}

BaseModel base_model_from_json(const Json& j) {
    check_keys(j, {"mode", "stroke_min", "stroke_max"}, "base");
    BaseModel b;
    std::string mode = to_string(b.mode);
    read_opt(j, "mode", mode);
    b.mode = parse_base_mode(mode);
    read_opt(j, "stroke_min", b.stroke_min);
    read_opt(j, "stroke_max", b.stroke_max);
    if (b.stroke_min > b.stroke_max) throw InputError("base stroke_min exceeds stroke_max");
    return b;
}

Json to_json(const ArmShape& s) {
    Json segs = Json::array();
    for (const auto& seg : s.segments) segs.push_back({{"theta", seg.theta}, {"phi", seg.phi}, {"length", seg.length}});
    return {{"segments", segs},
            {"connector_length", s.connector_length},
            {"base_extension", s.base_extension},
            {"base_pose", to_json(s.base_pose)}};
}

ArmShape arm_shape_from_json(const Json& j) {
    check_keys(j, {"segments", "connector_length", "base_extension", "base_pose"}, "shape");
    ArmShape s;
    if (!j.contains("segments") || !j.at("segments").is_array() || j.at("segments").empty()) {
        throw InputError("shape needs a non-empty 'segments' array");
    }
    for (const auto& js : j.at("segments")) {
        check_keys(js, {"theta", "phi", "length"}, "segment");
        SegmentArc a;
        read_opt(js, "theta", a.theta);
        read_opt(js, "phi", a.phi);
        read_opt(js, "length", a.length);
        if (!(a.length > 0.0)) throw InputError("segment length must be positive");
        if (!(a.theta >= 0.0 && a.theta < kPi)) throw InputError("segment theta must lie in [0, pi)");
        s.segments.push_back(a.normalized());
    }
    read_opt(j, "connector_length", s.connector_length);
    read_opt(j, "base_extension", s.base_extension);
    if (j.contains("base_pose")) s.base_pose = pose_from_json(j.at("base_pose"));
    if (!(s.connector_length >= 0.0)) throw InputError("connector_length must be non-negative");
    return s;
}

Json to_json(const Robot& r) {
    return {{"schema_version", kSchemaVersion},
            {"name", r.name},
            {"shape", to_json(r.shape)},
            {"hole_radius", r.hole_radius},
            {"stroke_limit", r.stroke_limit},
            {"theta_max", r.theta_max},
            {"base", to_json(r.base)}};
}

Robot robot_from_json(const Json& j) {
    check_schema(j, "robot");
    check_keys(j, {"name", "shape", "hole_radius", "stroke_limit", "theta_max", "base"}, "robot");
    Robot r;
    read_opt(j, "name", r.name);
    if (!j.contains("shape")) throw InputError("robot needs a 'shape'");
    r.shape = arm_shape_from_json(j.at("shape"));
    read_opt(j, "hole_radius", r.hole_radius);
    read_opt(j, "stroke_limit", r.stroke_limit);
    if (j.contains("theta_max")) r.theta_max = double_list(j.at("theta_max"), "theta_max");
    if (j.contains("base")) r.base = base_model_from_json(j.at("base"));
    if (!(r.hole_radius > 0.0) || !(r.stroke_limit > 0.0)) throw InputError("hole_radius and stroke_limit must be positive");
    for (double t : r.theta_max) {
        if (!(t > 0.0 && t < kPi)) throw InputError("theta_max entries must lie in (0, pi)");
    }
    if (r.theta_max.size() != 1 && r.theta_max.size() != r.shape.size()) {
        throw InputError("theta_max needs one entry or one per segment");
    }
    return r;
}

Robot default_robot(int segments) {
    Robot r;
    r.name = std::to_string(segments) + "-segment";
    r.shape.segments.assign(static_cast<std::size_t>(segments), SegmentArc{});
    return r;
}

Json to_json(const SolverConfig& c) {
    return {{"schema_version", kSchemaVersion},
            {"k_max1", c.k_max1},
            {"k_max2", c.k_max2},
            {"k_max1_w4", c.k_max1_w4},
            {"p_wm", c.p_wm},
            {"e_min", c.e_min},
            {"rot_min", c.rot_min},
            {"epsilon_ca", c.epsilon_ca},
            {"w_c", c.w_c},
            {"rng_seed", c.rng_seed},
            {"use_wm4", c.use_wm4},
            {"use_cb", c.use_cb},
            {"restart_theta_max", c.restart_theta_max},
            {"theta_max", c.theta_max},
            {"base", to_json(c.base)}};
}

SolverConfig solver_config_from_json(const Json& j) {
    check_schema(j, "solver config");
    check_keys(j,
               {"k_max1", "k_max2", "k_max1_w4", "p_wm", "e_min", "rot_min", "epsilon_ca", "w_c", "rng_seed", "use_wm4",
                "use_cb", "restart_theta_max", "theta_max", "base", "ablation"},
               "solver config");
    SolverConfig c;
    read_opt(j, "k_max1", c.k_max1);
    read_opt(j, "k_max2", c.k_max2);
    read_opt(j, "k_max1_w4", c.k_max1_w4);
    if (j.contains("p_wm")) {
        const auto p = double_list(j.at("p_wm"), "p_wm");
        if (p.size() != 4) throw InputError("p_wm needs four entries");
        std::copy(p.begin(), p.end(), c.p_wm.begin());
    }
    read_opt(j, "e_min", c.e_min);
    read_opt(j, "rot_min", c.rot_min);
    read_opt(j, "epsilon_ca", c.epsilon_ca);
    read_opt(j, "w_c", c.w_c);
    read_opt(j, "rng_seed", c.rng_seed);
    read_opt(j, "use_wm4", c.use_wm4);
    read_opt(j, "use_cb", c.use_cb);
    read_opt(j, "restart_theta_max", c.restart_theta_max);
    read_opt(j, "theta_max", c.theta_max);
    if (j.contains("base")) c.base = base_model_from_json(j.at("base"));
    if (j.contains("ablation")) c = c.with_ablation(parse_ablation(j.at("ablation").get<std::string>()));
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw InputError(std::string("solver config: ") + e.what());
    }
    return c;
}

Json to_json(const TrajectorySpec& t) {
    Json j = {{"kind", to_string(t.kind)},
              {"radius", t.radius},
              {"length", t.length},
              {"amp_x", t.amp_x},
              {"amp_y", t.amp_y},
              {"fold", t.fold},
              {"spacing", t.spacing}};
    if (t.bend_phi) j["bend_phi"] = *t.bend_phi;
    if (!t.points.empty()) {
        Json pts = Json::array();
        for (const auto& p : t.points) pts.push_back(to_json(p));
        j["points"] = pts;
    }
    return j;
}

TrajectorySpec trajectory_spec_from_json(const Json& j) {
    check_keys(j, {"kind", "radius", "length", "bend_phi", "amp_x", "amp_y", "fold", "points", "spacing"}, "trajectory");
    TrajectorySpec t;
    std::string kind = to_string(t.kind);
    read_opt(j, "kind", kind);
    try {
        t.kind = parse_trajectory_kind(kind);
    } catch (const ConfigError& e) {
        throw InputError(e.what());
    }
    read_opt(j, "radius", t.radius);
    read_opt(j, "length", t.length);
    if (j.contains("bend_phi")) t.bend_phi = j.at("bend_phi").get<double>();
    read_opt(j, "amp_x", t.amp_x);
    read_opt(j, "amp_y", t.amp_y);
    read_opt(j, "fold", t.fold);
    read_opt(j, "spacing", t.spacing);
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) t.points.push_back(vec3_from_json(p));
    }
    try {
        t.validate();
    } catch (const ConfigError& e) {
        throw InputError(std::string("trajectory: ") + e.what());
    }
    return t;
}

Json to_json(const SceneFile& s) {
    Json obs = Json::array();
    for (const auto& o : s.scene.obstacles) obs.push_back({{"center", to_json(o.center)}, {"radius", o.radius}});
    Json j = {{"schema_version", kSchemaVersion},
              {"obstacles", obs},
              {"theta_max", s.scene.theta_max},
              {"arm_radius", s.scene.arm_radius},
              {"base", to_json(s.scene.base)},
              {"n_lat", s.scene.n_lat},
              {"n_lon", s.scene.n_lon},
              {"resolution", s.scene.resolution},
              {"step", s.ftl.step},
              {"sample_spacing", s.ftl.sample_spacing},
              {"max_iterations", s.ftl.max_iterations}};
    if (s.trajectory) j["trajectory"] = to_json(*s.trajectory);
    if (s.initial_theta) j["initial_theta"] = *s.initial_theta;
    if (s.initial_phi) j["initial_phi"] = *s.initial_phi;
    return j;
}

SceneFile scene_from_json(const Json& j) {
    check_schema(j, "scene");
    check_keys(j,
               {"obstacles", "theta_max", "arm_radius", "base", "n_lat", "n_lon", "resolution", "step", "sample_spacing",
                "max_iterations", "trajectory", "initial_theta", "initial_phi"},
               "scene");
    SceneFile s;
    if (j.contains("obstacles")) {
        for (const auto& o : j.at("obstacles")) {
            check_keys(o, {"center", "radius"}, "obstacle");
            SphereObstacle ob;
            ob.center = vec3_from_json(o.at("center"));
            read_opt(o, "radius", ob.radius);
            s.scene.obstacles.push_back(ob);
        }
    }
    if (j.contains("theta_max")) s.scene.theta_max = double_list(j.at("theta_max"), "theta_max");
    read_opt(j, "arm_radius", s.scene.arm_radius);
    if (j.contains("base")) s.scene.base = base_model_from_json(j.at("base"));
    read_opt(j, "n_lat", s.scene.n_lat);
    read_opt(j, "n_lon", s.scene.n_lon);
    read_opt(j, "resolution", s.scene.resolution);
    read_opt(j, "step", s.ftl.step);
    read_opt(j, "sample_spacing", s.ftl.sample_spacing);
    read_opt(j, "max_iterations", s.ftl.max_iterations);
    if (j.contains("trajectory")) s.trajectory = trajectory_spec_from_json(j.at("trajectory"));
    if (j.contains("initial_theta")) s.initial_theta = double_list(j.at("initial_theta"), "initial_theta");
    if (j.contains("initial_phi")) s.initial_phi = double_list(j.at("initial_phi"), "initial_phi");
    if (s.initial_theta.has_value() != s.initial_phi.has_value() ||
        (s.initial_theta && s.initial_theta->size() != s.initial_phi->size())) {
        throw InputError("initial_theta and initial_phi must be given together with equal lengths");
    }
    try {
        s.scene.validate();
    } catch (const ConfigError& e) {
        throw InputError(std::string("scene: ") + e.what());
    }
    if (!(s.ftl.step > 0.0) || !(s.ftl.sample_spacing > 0.0) || s.ftl.max_iterations < 1) {
        throw InputError("scene: step and sample_spacing must be positive, max_iterations at least 1");
    }
    return s;
}

SceneFile follow_arc_scene() {
    SceneFile s;
    s.scene.base.mode = BaseMode::FreeFloating;
    TrajectorySpec t;
    t.kind = TrajectoryKind::Arc;
    t.radius = 0.2;
    t.length = 0.4;
    s.trajectory = t;
    s.initial_theta = std::vector<double>{0.29, 0.77, 0.70, 1.01};
    s.initial_phi = std::vector<double>{2.75, 0.40, 4.81, 4.99};
    return s;
}

Pose target_from_json(const Json& j, const Robot& robot) {
    check_schema(j, "target");
    if (j.contains("shape")) {
        check_keys(j, {"shape"}, "target");
        const Json& s = j.at("shape");
        check_keys(s, {"theta", "phi"}, "target shape");
        if (!s.contains("theta") || !s.contains("phi")) throw InputError("target shape needs theta and phi");
        const auto th = double_list(s.at("theta"), "theta");
        const auto ph = double_list(s.at("phi"), "phi");
        if (th.size() != robot.shape.size() || ph.size() != robot.shape.size()) {
            throw InputError("target shape needs one theta and phi per robot segment");
        }
        ArmShape a = robot.shape;
        for (std::size_t i = 0; i < th.size(); ++i) {
            if (!(th[i] >= 0.0 && th[i] < kPi)) throw InputError("target theta must lie in [0, pi)");
            a.segments[i].theta = th[i];
            a.segments[i].phi = ph[i];
        }
        return forward_kinematics(a);
    }
    Json pose = j;
    pose.erase("schema_version");
    if (!pose.contains("position")) throw InputError("target needs 'position' (and optional 'orientation') or 'shape'");
    return pose_from_json(pose);
}

Json to_json(const LinkChain& c) {
    Json segs = Json::array();
    for (const auto& s : c.segments) {
        segs.push_back({{"base_node", to_json(s.base_node)},
                        {"joint", to_json(s.joint)},
                        {"tip_node", to_json(s.tip_node)},
                        {"base_dir", to_json(s.base_dir)},
                        {"tip_dir", to_json(s.tip_dir)},
                        {"link_length", s.link_length},
                        {"arc_length", s.arc_length}});
    }
    Json conn = Json::array();
    for (std::size_t j = 0; j < c.size(); ++j) conn.push_back(to_json(c.connector_joint(j)));
    return {{"root", to_json(c.root)},
            {"base_extension", c.base_extension},
            {"base_joint", to_json(c.base_joint())},
            {"connector_length", c.connector_length},
            {"connector_joints", conn},
            {"segments", segs}};
}

Json solve_report_json(const SolveReport& r, const Pose& target, const Robot& robot,
                       const std::optional<LinkChain>& chain) {
    const PoseError e = pose_error(forward_kinematics(r.shape), target);
    Json hist = Json::array();
    for (const auto& h : r.history) hist.push_back(Json::array({h.position, h.rotation}));
    Json tendons = Json::array();
    for (const auto& row : tendon_deltas(r.shape, robot.hole_radius)) tendons.push_back(Json::array({row[0], row[1], row[2]}));
    Json j = {{"schema_version", kSchemaVersion},
              {"kind", "solve_report"},
              {"success", r.success},
              {"iterations", r.iterations},
              {"mode_iterations", r.mode_iterations},
              {"restarts", r.restarts},
              {"wall_time_s", r.wall_time},
              {"final_error", {{"position_m", e.position}, {"rotation_rad", e.rotation}}},
              {"target", to_json(target)},
              {"shape", to_json(r.shape)},
              {"tendon_deltas_m", tendons},
              {"stroke_feasible", stroke_feasible(tendon_deltas(r.shape, robot.hole_radius), robot.stroke_limit)},
              {"history", hist}};
    if (chain) j["chain"] = to_json(*chain);
    return j;
}

Json ftl_result_json(const FtlResult& r, bool include_profiles) {
    Json incs = Json::array();
    for (const auto& inc : r.increments) {
        Json ji = {{"tip_arc_m", inc.tip_arc},
                   {"success", inc.success},
                   {"iterations", inc.iterations},
                   {"tip_position_error_m", inc.tip_position_error},
                   {"tip_direction_error_rad", inc.tip_direction_error},
                   {"mean_deviation_m", inc.mean_deviation},
                   {"max_deviation_m", inc.max_deviation},
                   {"shape", to_json(inc.shape)}};
        if (include_profiles) {
            Json prof = Json::array();
            for (const auto& d : inc.deviation) prof.push_back(Json::array({d.arc_position, d.deviation}));
            ji["deviation"] = prof;
        }
        incs.push_back(ji);
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "ftl_result"},
            {"path_length_m", r.path.length()},
            {"mean_deviation_m", r.mean_deviation},
            {"max_deviation_m", r.max_deviation},
            {"max_deviation_at_m", r.max_deviation_at},
            {"failures", r.failures},
            {"increments", incs}};
}

void write_bench_csv(std::ostream& os, const std::vector<BenchStats>& runs) {
    os << "# schema_version=" << kSchemaVersion << '\n';
    os << "segments,method,tasks,success_rate,false_successes,iter_top20,iter_top60,iter_top100,time_ms_top20,"
          "time_ms_top60,time_ms_top100\n";
    for (const auto& run : runs) {
        for (const auto& m : run.methods) {
            os << run.segments << ',' << to_string(m.method) << ',' << m.tasks << ',' << fmt(m.success_rate) << ','
               << m.false_successes << ',' << fmt(m.iterations[0]) << ',' << fmt(m.iterations[1]) << ','
               << fmt(m.iterations[2]) << ',' << fmt(m.time_ms[0]) << ',' << fmt(m.time_ms[1]) << ','
               << fmt(m.time_ms[2]) << '\n';
        }
    }
}

void write_points_csv(std::ostream& os, const std::vector<WorkspacePoint>& points) {
    os << "# schema_version=" << kSchemaVersion << '\n';
    os << "x,y,z,zx,zy,zz\n";
    for (const auto& p : points) {
        os << fmt(p.position.x()) << ',' << fmt(p.position.y()) << ',' << fmt(p.position.z()) << ','
           << fmt(p.direction.x()) << ',' << fmt(p.direction.y()) << ',' << fmt(p.direction.z()) << '\n';
    }
}

void write_cells_csv(std::ostream& os, const std::vector<WorkspaceCell>& cells) {
    os << "# schema_version=" << kSchemaVersion << '\n';
    os << "i,j,k,N,D,S\n";
    for (const auto& c : cells) {
        os << c.index[0] << ',' << c.index[1] << ',' << c.index[2] << ',' << c.count << ',' << fmt(c.dispersion) << ','
           << fmt(c.score) << '\n';
    }
}

void write_profile_csv(std::ostream& os, const FtlResult& r) {
    os << "# schema_version=" << kSchemaVersion << '\n';
    os << "arc_position_m,deviation_m\n";
    for (const auto& inc : r.increments) {
        for (const auto& d : inc.deviation) os << fmt(d.arc_position) << ',' << fmt(d.deviation) << '\n';
    }
}

std::string git_revision() {
    return TLF_GIT_REVISION;
}

Json make_manifest(const std::string& command, const std::vector<std::string>& argv, std::uint64_t seed, int jobs,
                   const Json& effective_config, const std::vector<std::string>& outputs) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "manifest"},
            {"command", command},
            {"argv", argv},
            {"seed", seed},
            {"jobs", jobs},
            {"git_revision", git_revision()},
            {"config", effective_config},
            {"outputs", outputs}};
}

}  // namespace tlf
