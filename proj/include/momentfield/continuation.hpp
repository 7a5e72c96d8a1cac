// One-parameter equilibrium sweeps: pseudo-arclength continuation with
// saddle-node/Hopf detection, bisection refinement on the branch, and the
// bifurcation atlas they assemble into.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "momentfield/fixed_points.hpp"
#include "momentfield/model.hpp"

namespace mf {

// Scalar parameter of a sweep: one input current, the continuous size n, one
// relaxation rate, one weight entry, or the activation homotopy p.
struct Param {
    enum class Target { Input, SizeN, Alpha, Weight, HomotopyP };
    Target target = Target::Input;
    int i = 0, j = 0;

    void apply(NetworkConfig& net, double value) const;
    double get(const NetworkConfig& net) const;
    std::string name() const;

    static Param input(int i) { return {Target::Input, i, 0}; }
    static Param size_n() { return {Target::SizeN, 0, 0}; }
    static Param alpha(int i) { return {Target::Alpha, i, 0}; }
    static Param weight(int i, int j) { return {Target::Weight, i, j}; }
    static Param homotopy_p() { return {Target::HomotopyP, 0, 0}; }
};

enum class BifKind {
    SaddleNode,
    Hopf,
    FoldOfCycles,
    NeimarkSacker,
    PeriodDoubling,
    Cusp,
    BogdanovTakensCandidate,
    HomoclinicSuspect
};

std::string bif_kind_name(BifKind k);

struct BifurcationPoint {
    BifKind kind;
    double param = 0.0;   // swept parameter value
    double param2 = 0.0;  // second parameter (codim-2 curves), else unused
    Eigen::VectorXd state;
    double residual = 0.0;    // test-function residual after refinement
    double omega = 0.0;       // |Im lambda| for Hopf, |arg mu| for NS
    bool low_confidence = false;
};

struct EquilibriumBranch {
    std::vector<double> params;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXcd> eigenvalues;
    bool truncated = false;  // left the search box
};

struct SweepOptions {
    double ds0 = 1e-2;           // initial arclength step
    double ds_max = 5e-2;
    double ds_min = 1e-9;
    int max_steps = 6000;
    int newton_grow = 8, newton_shrink = 3;  // step control thresholds
    double newton_tol = 3e-9;
    double state_box = 60.0;     // |state|_inf bound before truncation
    double param_pad = 0.0;      // allow overshoot beyond the range ends
    double detect_param_tol = 1e-6;
    double hopf_min_omega = 1e-4;
    int seed_points = 3;         // find_fixed_points at this many path points
    FixedPointSearch fp_search{};
};

struct SweepResult {
    std::vector<EquilibriumBranch> branches;
    std::vector<BifurcationPoint> detections;
};

// Continue every seed fixed point over param in [p_min, p_max]; detect and
// refine saddle-nodes and Hopf points along each branch.
SweepResult sweep_equilibria(ModelVariant v, const NetworkConfig& net, const Param& param,
                             double p_min, double p_max, const SweepOptions& opts = {},
                             int workers = 0);

// Atlas of everything a sweep or codim-2 run produced.
struct BifurcationAtlas {
    std::string param_name;
    double p_min = 0, p_max = 0;
    std::vector<EquilibriumBranch> branches;
    std::vector<BifurcationPoint> points;
    // codim-2 polylines in (param, n)
    struct Curve {
        std::string kind;
        std::vector<std::array<double, 2>> polyline;
        std::vector<bool> admissible;
    };
    std::vector<Curve> curves;

    std::string to_json() const;
    void write_branch_csv(const std::string& dir) const;  // gnuplot-ready columns
};

}  // namespace mf
