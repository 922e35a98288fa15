#pragma once

#include "tlfabrikc/arc.hpp"
#include "tlfabrikc/chain.hpp"
#include "tlfabrikc/fabrikc.hpp"
#include "tlfabrikc/random.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tlf {

/// Method variants compared in the benchmark. `Full` is the two-layer solver with random
/// restarts (workmode 4) and the per-mode budget condition Cb.
enum class Ablation {
    Full,      // workmode 4 + Cb
    Tlgi,      // neither
    TlgiStar,  // Cb only
    TlfStar,   // workmode 4 only
};

Ablation parse_ablation(const std::string& name);
std::string to_string(Ablation a);

struct SolverConfig {
    int k_max1 = 2000;      // total iteration budget
    int k_max2 = 20;        // random restarts allowed per solve
    int k_max1_w4 = 50;     // budget of each restarted solve
    std::array<double, 4> p_wm{0.25, 0.25, 0.25, 0.25};
    double e_min = 1e-5;                   // m
    double rot_min = 0.2 * kPi / 180.0;    // rad
    double epsilon_ca = 1e-6;              // m
    int w_c = 5;                           // workmode index that wraps back to 1
    std::uint64_t rng_seed = 0;
    bool use_wm4 = true;
    bool use_cb = true;
    /// Upper bound of the bending angles drawn by a restart (defaults to the joint limit).
    double restart_theta_max = kDefaultThetaMax;
    /// Bend limit enforced inside the sweeps.
    double theta_max = kDefaultThetaMax;
    BaseModel base;

    /// Throws ConfigError on a budget below 1, a fraction outside (0,1] or a non-positive
    /// tolerance.
    void validate() const;
    SolverConfig with_ablation(Ablation a) const;
};

struct SolveReport {
    bool success = false;
    ArmShape shape;
    int iterations = 0;
    /// Iterations spent in each workmode; restarts count the iterations of the restarted solve.
    std::array<int, 4> mode_iterations{0, 0, 0, 0};
    int restarts = 0;
    /// Error after the initial conversion and after every iteration.
    std::vector<PoseError> history;
    double wall_time = 0.0;  // s
};

/// Condition Ca over the last three recorded errors (oldest first): stagnation within
/// epsilon over two steps, or two consecutive non-improving steps. False with fewer than
/// three entries.
bool convergence_judge(std::span<const double> errors, double epsilon);

/// Context shared by the workmodes: how to re-root the chain and how to sweep.
struct WorkmodeContext {
    Pose root;                // fixed root frame (segment-1 base)
    BaseModel base;
    Pose mount;               // used by the prismatic base
    SweepOptions sweep;       // forward-sweep options (fixed base direction set here)
};

WorkmodeContext make_workmode_context(const ArmShape& initial, const SolverConfig& cfg);

/// Root frame the backward sweep restores for the current chain (fixed, prismatic or free).
Pose restore_root(const LinkChain& chain, const WorkmodeContext& ctx);

/// Signed residual rotation about the target z-axis from the chain tip x-axis to the target
/// x-axis.
double residual_twist(const LinkChain& chain, const Pose& target);

/// Forward sweep to `target` followed by a backward sweep to the restored root. The solver
/// counts one of these as one iteration.
LinkChain sweep_pair(const LinkChain& chain, const Pose& target, const WorkmodeContext& ctx);

/// One pass of workmode 1, 2 or 3: sweep pair, rotation by the residual twist about the tip
/// axis (1), about the root axis (2) or half of each (3), then a second sweep pair.
LinkChain apply_workmode(const LinkChain& chain, const Pose& target, int mode, const WorkmodeContext& ctx);

/// Rotation step of apply_workmode. Mode 1 pivots on the tip, mode 2 on the root (root frame
/// orientation kept), mode 3 applies both with half the angle.
void rotate_for_workmode(LinkChain& chain, const Pose& target, int mode, double twist);

/// θ_j ~ U[0, θmax_j], φ_j ~ U[0, 2π); lengths, connector and base are copied from `tmpl`.
/// A single limit is broadcast to every segment.
ArmShape randomize_shape(const ArmShape& tmpl, std::span<const double> theta_max, Rng& rng);

SolveReport solve(const ArmShape& initial, const Pose& target, const SolverConfig& cfg);

/// Same, drawing restarts from `rng` (the caller owns the stream).
SolveReport solve(const ArmShape& initial, const Pose& target, const SolverConfig& cfg, Rng& rng);

}  // namespace tlf
