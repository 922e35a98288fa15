#include "tlfabrikc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tlf {

Ablation parse_ablation(const std::string& name) {
    if (name == "full") return Ablation::Full;
    if (name == "tlgi") return Ablation::Tlgi;
    if (name == "tlgi-star") return Ablation::TlgiStar;
    if (name == "tlf-star") return Ablation::TlfStar;
    throw ConfigError("unknown ablation '" + name + "' (expected tlgi, tlgi-star, tlf-star or full)");
}

std::string to_string(Ablation a) {
    switch (a) {
        case Ablation::Full: return "full";
        case Ablation::Tlgi: return "tlgi";
        case Ablation::TlgiStar: return "tlgi-star";
        case Ablation::TlfStar: return "tlf-star";
    }
    return "full";
}

void SolverConfig::validate() const {
    if (k_max1 < 1 || k_max2 < 1 || k_max1_w4 < 1) throw ConfigError("iteration budgets must be at least 1");
    double sum = 0.0;
    for (double p : p_wm) {
        if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p_wm fractions must lie in (0, 1]");
        sum += p;
    }
    if (sum > 1.0 + 1e-12) throw ConfigError("p_wm fractions must sum to at most 1");
    if (!(e_min > 0.0) || !(rot_min > 0.0) || !(epsilon_ca > 0.0)) throw ConfigError("tolerances must be positive");
    if (w_c < 2 || w_c > 5) throw ConfigError("w_c must be between 2 and 5");
    if (!(restart_theta_max >= 0.0 && restart_theta_max < kPi)) throw ConfigError("restart_theta_max must lie in [0, pi)");
    if (!(theta_max > 0.0 && theta_max <= kPi)) throw ConfigError("theta_max must lie in (0, pi]");
    if (base.stroke_min > base.stroke_max) throw ConfigError("stroke_min exceeds stroke_max");
}

SolverConfig SolverConfig::with_ablation(Ablation a) const {
    SolverConfig c = *this;
    c.use_wm4 = (a == Ablation::Full || a == Ablation::TlfStar);
    c.use_cb = (a == Ablation::Full || a == Ablation::TlgiStar);
    return c;
}

bool convergence_judge(std::span<const double> errors, double epsilon) {
    if (errors.size() < 3) return false;
    const double e2 = errors[errors.size() - 3];
    const double e1 = errors[errors.size() - 2];
    const double e0 = errors[errors.size() - 1];
    const bool stagnant = std::abs(e1 - e0) <= epsilon && std::abs(e2 - e1) <= epsilon;
    const bool worsening = e0 >= e1 && e1 >= e2;
    return stagnant || worsening;
}

WorkmodeContext make_workmode_context(const ArmShape& initial, const SolverConfig& cfg) {
    WorkmodeContext ctx;
    ctx.root = root_frame(initial);
    ctx.mount = initial.base_pose;
    ctx.base = cfg.base;
    ctx.sweep.theta_max = cfg.theta_max;
    if (cfg.base.mode == BaseMode::Fixed) ctx.sweep.base_direction = ctx.root.z_axis();
    if (cfg.base.mode == BaseMode::PrismaticZ) ctx.sweep.base_direction = ctx.mount.z_axis();
    return ctx;
}

Pose restore_root(const LinkChain& chain, const WorkmodeContext& ctx) {
    switch (ctx.base.mode) {
        case BaseMode::Fixed:
            return ctx.root;
        case BaseMode::PrismaticZ: {
            const Vec3 z = ctx.mount.z_axis();
            const double ext = std::clamp((chain.root.position - ctx.mount.position).dot(z), ctx.base.stroke_min,
                                          ctx.base.stroke_max);
            return {ctx.mount.position + z * ext, ctx.mount.orientation};
        }
        case BaseMode::FreeFloating:
            return chain.root;
    }
    return ctx.root;
}

double residual_twist(const LinkChain& chain, const Pose& target) {
    return signed_angle_about(chain.tip_pose().x_axis(), target.x_axis(), target.z_axis());
}

void rotate_for_workmode(LinkChain& chain, const Pose& target, int mode, double twist) {
    if (twist == 0.0) return;
    const Vec3 tip_axis = target.z_axis();
    switch (mode) {
        case 1:
            chain.rotate_about(rotate_about_axis(tip_axis, twist), chain.tip_position());
            break;
        case 2: {
            // Swing the arm about the root axis; the root frame itself keeps its orientation.
            const RotMat keep = chain.root.orientation;
            chain.rotate_about(rotate_about_axis(chain.root.z_axis(), -twist), chain.root.position);
            chain.root.orientation = keep;
            break;
        }
        case 3:
            rotate_for_workmode(chain, target, 1, 0.5 * twist);
            rotate_for_workmode(chain, target, 2, 0.5 * twist);
            break;
        default:
            throw ConfigError("workmode must be 1, 2 or 3");
    }
}

LinkChain sweep_pair(const LinkChain& chain, const Pose& target, const WorkmodeContext& ctx) {
    const LinkChain c = forward_reach(chain, target, ctx.sweep);
    return backward_reach(c, restore_root(c, ctx), target.z_axis(), ctx.sweep);
}

LinkChain apply_workmode(const LinkChain& chain, const Pose& target, int mode, const WorkmodeContext& ctx) {
    if (mode < 1 || mode > 3) throw ConfigError("workmode must be 1, 2 or 3");
    LinkChain c = sweep_pair(chain, target, ctx);
    rotate_for_workmode(c, target, mode, residual_twist(c, target));
    return sweep_pair(c, target, ctx);
}

ArmShape randomize_shape(const ArmShape& tmpl, std::span<const double> theta_max, Rng& rng) {
    if (theta_max.empty()) throw ConfigError("randomize_shape needs at least one bend limit");
    if (theta_max.size() != 1 && theta_max.size() != tmpl.size()) {
        throw ConfigError("randomize_shape: one bend limit or one per segment expected");
    }
    ArmShape out = tmpl;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double lim = theta_max[theta_max.size() == 1 ? 0 : j];
        if (lim < 0.0) throw ConfigError("bend limits must be non-negative");
        out.segments[j].theta = rng.uniform(0.0, lim);
        out.segments[j].phi = rng.uniform(0.0, kTwoPi);
    }
    return out;
}

namespace {

struct Tracker {
    const Pose& target;
    const SolverConfig& cfg;
    double best_score = INFINITY;
    ArmShape best;

    bool solved(const PoseError& e) const { return e.position <= cfg.e_min && e.rotation <= cfg.rot_min; }

    void offer(const ArmShape& s, const PoseError& e) {
        const double score = e.position / cfg.e_min + e.rotation / cfg.rot_min;
        if (score < best_score) {
            best_score = score;
            best = s;
        }
    }
};

ArmShape with_base(ArmShape s, const ArmShape& initial, const LinkChain& chain, const SolverConfig& cfg) {
    s.base_pose = initial.base_pose;
    s.base_extension = initial.base_extension;
    if (cfg.base.mode == BaseMode::PrismaticZ) {
        s.base_extension = (chain.root.position - initial.base_pose.position).dot(initial.base_pose.z_axis());
    } else if (cfg.base.mode == BaseMode::FreeFloating) {
        s.base_pose = chain.mount();
    }
    return s;
}

SolveReport solve_impl(const ArmShape& initial, const Pose& target, const SolverConfig& cfg, Rng& rng) {
    SolveReport report;
    const WorkmodeContext ctx = make_workmode_context(initial, cfg);
    Tracker track{target, cfg, INFINITY, initial};

    LinkChain chain = arc_to_link(initial);
    ArmShape shape = initial;
    PoseError err = pose_error(forward_kinematics(shape), target);
    report.history.push_back(err);
    track.offer(shape, err);

    std::vector<double> pos_hist{err.position};
    std::array<int, 4> kwm{0, 0, 0, 0};
    int w = 1;
    const int budget = cfg.k_max1;

    while (!track.solved(err) && report.iterations < budget) {
        if (w == 4 && (!cfg.use_wm4 || report.restarts >= cfg.k_max2)) {
            w = 1;
            kwm = {0, 0, 0, 0};
        }
        if (w <= 3) {
            // One workmode pass is two counted sweep pairs with the twist correction between them.
            for (int half = 0; half < 2 && !track.solved(err) && report.iterations < budget; ++half) {
                if (half == 1) rotate_for_workmode(chain, target, w, residual_twist(chain, target));
                chain = sweep_pair(chain, target, ctx);
                shape = with_base(link_to_arc(chain), initial, chain, cfg);
                err = pose_error(forward_kinematics(shape), target);
                report.history.push_back(err);
                ++kwm[w - 1];
                ++report.mode_iterations[w - 1];
                ++report.iterations;
                track.offer(shape, err);
            }
            pos_hist.push_back(err.position);
        } else {
            ++kwm[3];
            ++report.restarts;
            SolverConfig sub = cfg;
            sub.k_max1 = std::min(cfg.k_max1_w4, budget - report.iterations);
            sub.w_c = 4;
            const ArmShape start = randomize_shape(initial, std::span<const double>(&cfg.restart_theta_max, 1), rng);
            SolveReport inner = solve_impl(start, target, sub, rng);
            const int used = std::max(1, inner.iterations);
            report.iterations += used;
            report.mode_iterations[3] += used;
            for (std::size_t i = 1; i < inner.history.size(); ++i) report.history.push_back(inner.history[i]);
            while (static_cast<int>(report.history.size()) < report.iterations + 1) {
                report.history.push_back(inner.history.back());
            }
            shape = inner.shape;
            chain = arc_to_link(shape);
            err = inner.history.back();
            track.offer(shape, err);
            pos_hist.push_back(err.position);
        }

        const bool ca = convergence_judge(pos_hist, cfg.epsilon_ca);
        const bool cb = cfg.use_cb && kwm[w - 1] >= cfg.p_wm[w - 1] * cfg.k_max1;
        if (ca) ++w;
        if (!ca && cb) ++w;
        if (w >= cfg.w_c) {
            w = 1;
            kwm = {0, 0, 0, 0};
        }
    }

    report.success = track.solved(err);
    report.shape = report.success ? shape : track.best;
    return report;
}

}  // namespace

SolveReport solve(const ArmShape& initial, const Pose& target, const SolverConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report = solve_impl(initial, target, cfg, rng);
    if (report.success) {
        // Independent confirmation from the arc parameters.
        const PoseError e = pose_error(forward_kinematics(report.shape), target);
        report.success = e.position <= cfg.e_min && e.rotation <= cfg.rot_min;
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SolveReport solve(const ArmShape& initial, const Pose& target, const SolverConfig& cfg) {
    Rng rng(cfg.rng_seed);
    return solve(initial, target, cfg, rng);
}

}  // namespace tlf
