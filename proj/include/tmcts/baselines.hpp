#pragma once

#include <span>
#include <vector>

#include "tmcts/glr.hpp"
#include "tmcts/sampling.hpp"

namespace tmcts {

struct NodeInterval {
    double lcb = 0.0;
    double ucb = 0.0;
};

// Confidence intervals: leaf radius sqrt(beta(N_l, delta) / (2 N_l)) with the
// run's threshold function evaluated at the leaf's own count; internal nodes
// combine children by min/max per label. Indexed by node id.
std::vector<NodeInterval> propagate_intervals(const GameTree& tree, const EmpiricalState& state,
                                              const ThresholdParams& params);

// Adapted UGapE-style baseline: best-vs-challenger among the root's children
// on the propagated intervals, optimistic descent to a leaf, and a stop rule
// on the depth-1 intervals against the threshold. Root must be MAX.
RunResult run_ugape(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng);

// Adapted LUCB-style baseline: samples the representative leaves of the
// empirically best child and the strongest challenger each round.
RunResult run_lucb_micro(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng);

}  // namespace tmcts
