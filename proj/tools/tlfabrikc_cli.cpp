// Command-line front end: solve, ftl, workspace, bench.

#include "tlfabrikc/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tlf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolverFailure = 2;

struct Common {
    std::string robot_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string ablation;
    bool no_wm4 = false;
    bool no_cb = false;
};

void add_solver_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--robot", c.robot_path, "Robot description JSON")->check(CLI::ExistingFile);
    cmd->add_option("--config", c.config_path, "Solver configuration JSON")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--ablation", c.ablation, "Method variant")
        ->check(CLI::IsMember({"tlgi", "tlgi-star", "tlf-star", "full"}));
    cmd->add_flag("--no-wm4", c.no_wm4, "Disable random restarts (workmode 4)");
    cmd->add_flag("--no-cb", c.no_cb, "Disable the per-workmode budget condition");
}

Robot load_robot(const Common& c, int default_segments = 3) {
    return c.robot_path.empty() ? default_robot(default_segments) : robot_from_json(read_json_file(c.robot_path));
}

SolverConfig load_config(const Common& c, const Robot& robot) {
    SolverConfig cfg;
    cfg.base = robot.base;
    if (!c.config_path.empty()) {
        const Json j = read_json_file(c.config_path);
        cfg = solver_config_from_json(j);
        if (!j.contains("base")) cfg.base = robot.base;
    }
    if (c.seed) cfg.rng_seed = *c.seed;
    if (!c.ablation.empty()) cfg = cfg.with_ablation(parse_ablation(c.ablation));
    if (c.no_wm4) cfg.use_wm4 = false;
    if (c.no_cb) cfg.use_cb = false;
    return cfg;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

int run_solve(const Common& c, const std::string& target_path, const std::string& output, bool dump_chain) {
    const Robot robot = load_robot(c);
    const SolverConfig cfg = load_config(c, robot);
    const Pose target = target_from_json(read_json_file(target_path), robot);
    const SolveReport r = solve(robot.shape, target, cfg);
    std::optional<LinkChain> chain;
    if (dump_chain) chain = arc_to_link(r.shape);
    Json j = solve_report_json(r, target, robot, chain);
    j["config"] = to_json(cfg);
    if (output.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        write_json_file(output, j);
    }
    return r.success ? kExitOk : kExitSolverFailure;
}

int run_ftl(const Common& c, const std::string& scene_path, const std::string& scenario, const std::string& out_dir,
            std::optional<double> step, const std::vector<std::string>& argv) {
    SceneFile sf;
    if (!scene_path.empty()) {
        sf = scene_from_json(read_json_file(scene_path));
    } else if (scenario == "follow-arc") {
        sf = follow_arc_scene();
    } else {
        throw InputError("ftl needs --scene or --scenario follow-arc");
    }
    if (step) sf.ftl.step = *step;
    if (!(sf.ftl.step > 0.0)) throw InputError("--step must be positive");

    Robot robot = load_robot(c, sf.initial_theta ? static_cast<int>(sf.initial_theta->size()) : 3);
    if (sf.initial_theta) {
        if (sf.initial_theta->size() != robot.shape.size()) {
            throw InputError("scene initial angles do not match the robot segment count");
        }
        for (std::size_t i = 0; i < robot.shape.size(); ++i) {
            robot.shape.segments[i].theta = (*sf.initial_theta)[i];
            robot.shape.segments[i].phi = (*sf.initial_phi)[i];
        }
    }
    if (!sf.trajectory) throw InputError("scene has no trajectory");
    SolverConfig cfg = load_config(c, robot);

    const Pose tip = forward_kinematics(robot.shape);
    const Trajectory ext = make_trajectory(*sf.trajectory, tip, robot.shape.segments.back().phi);
    const FtlResult r = ftl_plan(robot.shape, ext, sf.scene, cfg, sf.ftl);

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_json_file((dir / "ftl_result.json").string(), ftl_result_json(r));
    {
        auto out = open_out(dir / "ftl_profile.csv");
        write_profile_csv(out, r);
    }
    Json effective = {{"robot", to_json(robot)}, {"scene", to_json(sf)}, {"solver", to_json(cfg)}};
    write_json_file((dir / "manifest.json").string(),
                    make_manifest("ftl", argv, cfg.rng_seed, 1, effective,
                                  {"ftl_result.json", "ftl_profile.csv"}));
    std::cout << Json{{"mean_deviation_m", r.mean_deviation},
                      {"max_deviation_m", r.max_deviation},
                      {"max_deviation_at_m", r.max_deviation_at},
                      {"increments", r.increments.size()},
                      {"failures", r.failures}}
                     .dump()
              << '\n';
    return r.failures == 0 ? kExitOk : kExitSolverFailure;
}

int run_workspace(const Common& c, WorkspaceSpec spec, const std::string& out_dir, bool layers,
                  const std::vector<std::string>& argv) {
    const Robot robot = load_robot(c);
    spec.hole_radius = robot.hole_radius;
    spec.stroke_limit = robot.stroke_limit;
    const std::uint64_t seed = c.seed.value_or(0);
    const WorkspaceResult r = sample_workspace(robot.shape, spec, seed, c.jobs);

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    std::vector<std::string> outputs{"workspace_points.csv", "workspace_cells.csv"};
    {
        auto out = open_out(dir / outputs[0]);
        write_points_csv(out, r.points);
    }
    {
        auto out = open_out(dir / outputs[1]);
        write_cells_csv(out, r.cells);
    }
    if (layers) {
        for (const auto& layer : x_layers(r.cells)) {
            const std::string name = "workspace_layer_x" + std::to_string(layer.front().index[0]) + ".csv";
            auto out = open_out(dir / name);
            write_cells_csv(out, layer);
            outputs.push_back(name);
        }
    }
    Json effective = {{"robot", to_json(robot)},
                      {"samples", spec.samples},
                      {"theta_max", spec.theta_max},
                      {"phi_max", spec.phi_max},
                      {"cell_size", spec.cell_size},
                      {"stroke_filter", spec.stroke_filter},
                      {"hole_radius", spec.hole_radius},
                      {"stroke_limit", spec.stroke_limit}};
    write_json_file((dir / "manifest.json").string(), make_manifest("workspace", argv, seed, c.jobs, effective, outputs));
    std::cout << Json{{"samples", r.points.size()},
                      {"cells", r.cells.size()},
                      {"infeasible_fraction", r.infeasible_fraction()}}
                     .dump()
              << '\n';
    return kExitOk;
}

int run_bench(const Common& c, const std::vector<int>& segments, int tasks, const std::string& out_dir,
              const std::vector<std::string>& argv) {
    const Robot robot = load_robot(c);
    Common base = c;
    base.ablation.clear();
    base.no_cb = false;
    base.no_wm4 = false;
    SolverConfig cfg = load_config(base, robot);
    cfg.base = BaseModel{};

    BenchSpec spec;
    spec.tasks = tasks;
    spec.seed = c.seed.value_or(0);
    spec.jobs = c.jobs;
    spec.solver = cfg;
    spec.segment_length = robot.shape.segments.front().length;
    spec.connector_length = robot.shape.connector_length;
    if (!c.ablation.empty()) {
        spec.methods = {parse_ablation(c.ablation)};
    } else if (c.no_wm4 || c.no_cb) {
        const bool wm4 = !c.no_wm4;
        const bool cb = !c.no_cb;
        spec.methods = {wm4 ? (cb ? Ablation::Full : Ablation::TlfStar) : (cb ? Ablation::TlgiStar : Ablation::Tlgi)};
    }

    std::vector<BenchStats> runs;
    for (int n : segments) {
        spec.segments = n;
        runs.push_back(run_benchmark(spec));
    }

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    {
        auto out = open_out(dir / "bench.csv");
        write_bench_csv(out, runs);
    }
    Json methods = Json::array();
    for (auto m : spec.methods) methods.push_back(to_string(m));
    Json effective = {{"segments", segments},
                      {"tasks", tasks},
                      {"theta_range", spec.theta_range},
                      {"phi_range", spec.phi_range},
                      {"segment_length", spec.segment_length},
                      {"connector_length", spec.connector_length},
                      {"methods", methods},
                      {"solver", to_json(cfg)}};
    write_json_file((dir / "manifest.json").string(),
                    make_manifest("bench", argv, spec.seed, c.jobs, effective, {"bench.csv"}));
    write_bench_csv(std::cout, runs);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuum robot inverse kinematics and follow-the-leader planning"};
    app.require_subcommand(1);
    const std::vector<std::string> args(argv, argv + argc);

    Common common;

    auto* solve_cmd = app.add_subcommand("solve", "Solve one inverse kinematics task");
    add_solver_flags(solve_cmd, common);
    std::string target_path;
    std::string solve_output;
    bool dump_chain = false;
    solve_cmd->add_option("--target", target_path, "Target pose JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--output,-o", solve_output, "Write the report here instead of stdout");
    solve_cmd->add_flag("--dump-chain", dump_chain, "Include the final virtual link chain");

    auto* ftl_cmd = app.add_subcommand("ftl", "Follow-the-leader plan along a trajectory");
    add_solver_flags(ftl_cmd, common);
    std::string scene_path;
    std::string scenario;
    std::string ftl_out = "ftl_out";
    std::optional<double> ftl_step;
    ftl_cmd->add_option("--scene", scene_path, "Scene JSON")->check(CLI::ExistingFile);
    ftl_cmd->add_option("--scenario", scenario, "Built-in scenario")->check(CLI::IsMember({"follow-arc"}));
    ftl_cmd->add_option("--step", ftl_step, "Tip advance per increment (m)");
    ftl_cmd->add_option("--out-dir", ftl_out, "Output directory");
    ftl_cmd->add_option("--jobs", common.jobs, "Ignored (planning is sequential)");

    auto* ws_cmd = app.add_subcommand("workspace", "Monte Carlo workspace sampling");
    WorkspaceSpec ws;
    std::string ws_out = "workspace_out";
    bool ws_layers = false;
    ws_cmd->add_option("--robot", common.robot_path, "Robot description JSON")->check(CLI::ExistingFile);
    ws_cmd->add_option("--seed", common.seed, "Random seed");
    ws_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    ws_cmd->add_option("--samples", ws.samples, "Number of sampled shapes")->check(CLI::PositiveNumber);
    ws_cmd->add_option("--theta-max", ws.theta_max, "Upper bound of sampled bending angles (rad)");
    ws_cmd->add_option("--phi-max", ws.phi_max, "Upper bound of sampled bending directions (rad)");
    ws_cmd->add_option("--cell-size", ws.cell_size, "Cell edge (m)");
    ws_cmd->add_flag("--stroke-filter", ws.stroke_filter, "Bin only stroke-feasible shapes");
    ws_cmd->add_flag("--x-layers", ws_layers, "Also write one cell CSV per x layer");
    ws_cmd->add_option("--out-dir", ws_out, "Output directory");

    auto* bench_cmd = app.add_subcommand("bench", "Benchmark the solver and its ablations");
    add_solver_flags(bench_cmd, common);
    std::vector<int> bench_segments{3};
    int bench_tasks = 1000;
    std::string bench_out = "bench_out";
    bench_cmd->add_option("--segments", bench_segments, "Segment counts")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--tasks", bench_tasks, "Tasks per segment count")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out-dir", bench_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_cmd) return run_solve(common, target_path, solve_output, dump_chain);
        if (*ftl_cmd) return run_ftl(common, scene_path, scenario, ftl_out, ftl_step, args);
        if (*ws_cmd) return run_workspace(common, ws, ws_out, ws_layers, args);
        if (*bench_cmd) return run_bench(common, bench_segments, bench_tasks, bench_out, args);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
