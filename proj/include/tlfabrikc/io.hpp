#pragma once

#include "tlfabrikc/bench.hpp"
#include "tlfabrikc/constraints.hpp"
#include "tlfabrikc/ftl.hpp"
#include "tlfabrikc/solver.hpp"
#include "tlfabrikc/workspace.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlf {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Robot description: geometry, actuation limits and base mobility. The shape's angles are the
/// initial configuration (straight unless given).
struct Robot {
    std::string name = "robot";
    ArmShape shape;
    double hole_radius = kDefaultHoleRadius;
    double stroke_limit = kDefaultStrokeLimit;
    std::vector<double> theta_max{kDefaultThetaMax};
    BaseModel base;
};

/// Scene file: constraints, trajectory and optionally the initial arm angles.
struct SceneFile {
    Scene scene;
    std::optional<TrajectorySpec> trajectory;
    std::optional<std::vector<double>> initial_theta;
    std::optional<std::vector<double>> initial_phi;
    FtlOptions ftl;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
/// Throws InputError when schema_version is missing or newer than kSchemaVersion.
void check_schema(const Json& j, const std::string& what);

Json to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);
Json to_json(const Pose& p);
/// {"position": [x,y,z], "orientation": [[row0],[row1],[row2]]}; orientation defaults to I.
Pose pose_from_json(const Json& j);

std::string to_string(BaseMode m);
BaseMode parse_base_mode(const std::string& s);
Json to_json(const BaseModel& b);
BaseModel base_model_from_json(const Json& j);

Json to_json(const ArmShape& s);
ArmShape arm_shape_from_json(const Json& j);

Json to_json(const Robot& r);
Robot robot_from_json(const Json& j);
/// Three 0.1 m segments, prototype connector, fixed base.
Robot default_robot(int segments = 3);

Json to_json(const SolverConfig& c);
/// Unknown keys are rejected; missing keys keep their defaults.
SolverConfig solver_config_from_json(const Json& j);

Json to_json(const TrajectorySpec& t);
TrajectorySpec trajectory_spec_from_json(const Json& j);

Json to_json(const SceneFile& s);
SceneFile scene_from_json(const Json& j);
/// Four 0.1 m segments with a fixed bent initial shape, free-floating base and a 0.2 m radius,
/// 0.4 m long arc extension.
SceneFile follow_arc_scene();

/// {"position", "orientation"} or {"shape": {"theta": [...], "phi": [...]}} evaluated on
/// `robot` by forward kinematics.
Pose target_from_json(const Json& j, const Robot& robot);

Json to_json(const LinkChain& c);
Json solve_report_json(const SolveReport& r, const Pose& target, const Robot& robot,
                       const std::optional<LinkChain>& chain = std::nullopt);
Json ftl_result_json(const FtlResult& r, bool include_profiles = false);

void write_bench_csv(std::ostream& os, const std::vector<BenchStats>& runs);
void write_points_csv(std::ostream& os, const std::vector<WorkspacePoint>& points);
void write_cells_csv(std::ostream& os, const std::vector<WorkspaceCell>& cells);
void write_profile_csv(std::ostream& os, const FtlResult& r);

/// Source revision recorded at configure time ("unknown" outside a git checkout).
std::string git_revision();

Json make_manifest(const std::string& command, const std::vector<std::string>& argv, std::uint64_t seed, int jobs,
                   const Json& effective_config, const std::vector<std::string>& outputs);

}  // namespace tlf
