#ifndef LRWPAN_FIXED_POINT_HPP
#define LRWPAN_FIXED_POINT_HPP

#include "lrwpan/analytic.hpp"
#include "lrwpan/mac_timing.hpp"
#include "lrwpan/topology.hpp"

#include <vector>

namespace lrwpan {

enum class Regime { no_hidden, hidden };

struct SolverOptions
{
    double tolerance = 1e-8;   // max relative change of (alpha, gamma, nu)
    int max_iterations = 10000;
    double damping = 0.5;      // relaxation factor in (0, 1]

    void validate() const;
};

struct SolverResult
{
    std::vector<NodeState> states;  // indexed like the network; sink stays zero
    int iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
    Regime regime = Regime::no_hidden;
};

// Max-relative change over the tracked unknowns (alpha, gamma, nu).
double residual(const std::vector<NodeState>& prev, const std::vector<NodeState>& next);

// Sweeps every node through the closed-form updates, starting from
// (alpha, gamma, nu) = (0, 0, lambda), until the tracked unknowns settle.
// Non-convergence is reported in the result; a non-finite update throws with
// the offending node and quantity.
SolverResult solve(const NetworkSpec& net, const MacParams& params, const SolverOptions& opts);

}  // namespace lrwpan

#endif
