#include "tlfabrikc/bench.hpp"
#include "tlfabrikc/chain.hpp"
#include "tlfabrikc/io.hpp"
#include "tlfabrikc/workspace.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace tlf;

namespace {

Robot robot_or_default(const std::string& robot_json, int segments) {
    return robot_json.empty() ? default_robot(segments) : robot_from_json(Json::parse(robot_json));
}

SolverConfig config_for(const std::string& config_json, const Robot& robot, std::uint64_t seed) {
    SolverConfig cfg;
    if (!config_json.empty()) cfg = solver_config_from_json(Json::parse(config_json));
    cfg.base = robot.base;
    cfg.rng_seed = seed;
    return cfg;
}

ArmShape shape_from(const std::vector<double>& theta, const std::vector<double>& phi, double length,
                    double connector) {
    if (theta.size() != phi.size() || theta.empty()) throw InputError("theta and phi need equal, non-zero lengths");
    ArmShape s;
    s.connector_length = connector;
    for (std::size_t i = 0; i < theta.size(); ++i) s.segments.push_back({theta[i], phi[i], length});
    return s;
}

std::string solve_json(const std::string& robot_json, const std::string& target_json, const std::string& config_json,
                       std::uint64_t seed, const std::string& ablation, bool dump_chain) {
    const Robot robot = robot_or_default(robot_json, 3);
    SolverConfig cfg = config_for(config_json, robot, seed);
    if (!ablation.empty()) cfg = cfg.with_ablation(parse_ablation(ablation));
    const Pose target = target_from_json(Json::parse(target_json), robot);
    SolveReport r;
    {
        py::gil_scoped_release release;
        r = solve(robot.shape, target, cfg);
    }
    Json j = solve_report_json(r, target, robot, dump_chain ? std::optional(arc_to_link(r.shape)) : std::nullopt);
    j["config"] = to_json(cfg);
    return j.dump();
}

std::string ftl_json(const std::string& scene_json, const std::string& robot_json, std::uint64_t seed) {
    const SceneFile sf = scene_json.empty() ? follow_arc_scene() : scene_from_json(Json::parse(scene_json));
    if (!sf.trajectory) throw InputError("scene has no trajectory");
    Robot robot = robot_or_default(robot_json, sf.initial_theta ? static_cast<int>(sf.initial_theta->size()) : 3);
    if (sf.initial_theta) {
        if (sf.initial_theta->size() != robot.shape.size()) throw InputError("scene and robot segment counts differ");
        for (std::size_t i = 0; i < robot.shape.size(); ++i) {
            robot.shape.segments[i].theta = (*sf.initial_theta)[i];
            robot.shape.segments[i].phi = (*sf.initial_phi)[i];
        }
    }
    SolverConfig cfg;
    cfg.base = sf.scene.base;
    cfg.rng_seed = seed;
    FtlResult r;
    {
        py::gil_scoped_release release;
        const Trajectory ext =
            make_trajectory(*sf.trajectory, forward_kinematics(robot.shape), robot.shape.segments.back().phi);
        r = ftl_plan(robot.shape, ext, sf.scene, cfg, sf.ftl);
    }
    return ftl_result_json(r, true).dump();
}

std::string bench_csv(const std::vector<int>& segments, int tasks, std::uint64_t seed, int jobs,
                      const std::vector<std::string>& methods) {
    std::vector<BenchStats> runs;
    {
        py::gil_scoped_release release;
        for (int n : segments) {
            BenchSpec spec;
            spec.segments = n;
            spec.tasks = tasks;
            spec.seed = seed;
            spec.jobs = jobs;
            if (!methods.empty()) {
                spec.methods.clear();
                for (const auto& m : methods) spec.methods.push_back(parse_ablation(m));
            }
            runs.push_back(run_benchmark(spec));
        }
    }
    std::ostringstream os;
    write_bench_csv(os, runs);
    return os.str();
}

py::dict workspace(int segments, int samples, double theta_max, double phi_max, double cell_size,
                   bool stroke_filter, std::uint64_t seed, int jobs) {
    WorkspaceSpec spec;
    spec.samples = samples;
    spec.theta_max = theta_max;
    spec.phi_max = phi_max;
    spec.cell_size = cell_size;
    spec.stroke_filter = stroke_filter;
    WorkspaceResult r;
    {
        py::gil_scoped_release release;
        r = sample_workspace(default_robot(segments).shape, spec, seed, jobs);
    }
    py::array_t<double> points({static_cast<py::ssize_t>(r.points.size()), py::ssize_t{6}});
    py::array_t<bool> feasible(static_cast<py::ssize_t>(r.points.size()));
    auto p = points.mutable_unchecked<2>();
    auto f = feasible.mutable_unchecked<1>();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& w = r.points[i];
        const auto k = static_cast<py::ssize_t>(i);
        for (int c = 0; c < 3; ++c) {
            p(k, c) = w.position[c];
            p(k, c + 3) = w.direction[c];
        }
        f(k) = w.stroke_ok;
    }
    py::array_t<double> cells({static_cast<py::ssize_t>(r.cells.size()), py::ssize_t{6}});
    auto c = cells.mutable_unchecked<2>();
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
        const auto& w = r.cells[i];
        const auto k = static_cast<py::ssize_t>(i);
        c(k, 0) = w.index[0];
        c(k, 1) = w.index[1];
        c(k, 2) = w.index[2];
        c(k, 3) = w.count;
        c(k, 4) = w.dispersion;
        c(k, 5) = w.score;
    }
    py::dict out;
    out["points"] = points;
    out["stroke_ok"] = feasible;
    out["cells"] = cells;
    out["infeasible_fraction"] = r.infeasible_fraction();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-layer FABRIK solver for continuum arms";
    m.attr("SCHEMA_VERSION") = kSchemaVersion;
    m.attr("DEFAULT_CONNECTOR_LENGTH") = kDefaultConnectorLength;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const nlohmann::json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("virtual_link_length", &virtual_link_length, py::arg("theta"), py::arg("length"));
    m.def(
        "forward_kinematics",
        [](const std::vector<double>& theta, const std::vector<double>& phi, double length, double connector) {
            const Pose p = forward_kinematics(shape_from(theta, phi, length, connector));
            return py::make_tuple(Vec3(p.position), RotMat(p.orientation));
        },
        py::arg("theta"), py::arg("phi"), py::arg("length") = 0.1, py::arg("connector") = kDefaultConnectorLength,
        "Tip position and orientation of equal-length segments.");
    m.def(
        "round_trip",
        [](const std::vector<double>& theta, const std::vector<double>& phi, double length, double connector) {
            const ArmShape back = link_to_arc(arc_to_link(shape_from(theta, phi, length, connector)));
            std::vector<double> t, f;
            for (const auto& s : back.segments) {
                t.push_back(s.theta);
                f.push_back(s.phi);
            }
            return py::make_tuple(t, f);
        },
        py::arg("theta"), py::arg("phi"), py::arg("length") = 0.1, py::arg("connector") = kDefaultConnectorLength,
        "Angles recovered after converting to the virtual link chain and back.");
    m.def("dispersion", &dispersion, py::arg("directions"));
    m.def("cell_score", &cell_score, py::arg("count"), py::arg("dispersion"));

    m.def("_solve", &solve_json, py::arg("robot"), py::arg("target"), py::arg("config"), py::arg("seed"),
          py::arg("ablation"), py::arg("dump_chain"));
    m.def("_ftl", &ftl_json, py::arg("scene"), py::arg("robot"), py::arg("seed"));
    m.def("_bench_csv", &bench_csv, py::arg("segments"), py::arg("tasks"), py::arg("seed"), py::arg("jobs"),
          py::arg("methods"));
    m.def("sample_workspace", &workspace, py::arg("segments") = 3, py::arg("samples") = 5000,
          py::arg("theta_max") = kDefaultThetaMax, py::arg("phi_max") = kTwoPi, py::arg("cell_size") = 0.1,
          py::arg("stroke_filter") = false, py::arg("seed") = 0, py::arg("jobs") = 1,
          "Samples random shapes; returns points (x,y,z,zx,zy,zz), stroke flags and cells (i,j,k,N,D,S).");
}
