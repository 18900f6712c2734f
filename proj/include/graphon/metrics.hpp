#ifndef GRAPHON_METRICS_HPP
#define GRAPHON_METRICS_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "graphon/kernels.hpp"
#include "graphon/sim.hpp"

namespace graphon {

/// Equilibrium utility from Y_0 with xi = 0: V = -exp(Y_0 / eta).
double equilibrium_utility(double eta_u, double y0);

/// A named union of label intervals [lo, hi).
struct LabelGroup {
    std::string name;
    std::vector<std::pair<double, double>> intervals;

    bool contains(double u) const;
};

/// The graphon's natural blocks (halves, major/minor, center/edges).
std::vector<LabelGroup> default_groups(const GraphonKernel& kernel);

/// Group-averaged wealth, benchmarked wealth and control per grid node, with
/// Monte Carlo standard errors. x-series have steps+1 entries, z has steps.
struct GroupCurve {
    std::string group;
    bool present = false;  // false when no particle fell in the group
    int count = 0;
    Eigen::VectorXd mean_x, se_x;
    Eigen::VectorXd mean_bench, se_bench;
    Eigen::VectorXd mean_z, se_z;
};

std::vector<GroupCurve> wealth_curves(const Trajectory& traj, const GraphonKernel& kernel,
                                      const std::vector<LabelGroup>& groups);

/// Statistical check that group means of X (and Z) coincide: flags every grid
/// node where |mean difference| exceeds 3 combined standard errors. Z's first
/// node is skipped: with constant initial wealth Z_{t_0} is a deterministic
/// function of the label, so there is no Monte Carlo noise there and the
/// two-sample comparison is degenerate.
struct IndependenceFlag {
    int node = 0;
    std::string quantity;  // "X" or "Z"
    double diff = 0.0;
    double combined_se = 0.0;
};

struct IndependenceReport {
    int count_a = 0;
    int count_b = 0;
    bool underpowered = false;  // fewer than 30 particles in a group
    std::vector<IndependenceFlag> flags;
};

IndependenceReport index_independence_test(const Trajectory& traj, const LabelGroup& group_a,
                                           const LabelGroup& group_b);

}  // namespace graphon

#endif
