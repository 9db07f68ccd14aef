#pragma once

#include <span>
#include <vector>

#include "tmcts/reward_model.hpp"
#include "tmcts/tree.hpp"

namespace tmcts {

// Per-node characteristic values d_s and the optimal leaf proportions for a
// (sub)tree. `w` is indexed by global leaf_index; entries outside the
// evaluated subtree stay zero. `d` is indexed by node id and is only filled
// inside the subtree.
struct Allocation {
    std::vector<double> d;
    std::vector<double> w;
    Answer answer = Answer::Win;
    double d_root = 0.0;
};

enum class AssumptionCheck { Enforce, Skip };

// Optimal sampling proportions via the characteristic recursion. With
// Enforce, a root value within 1e-9 of theta raises AssumptionViolated; with
// Skip the degenerate d = 0 branches fall back to uniform weights over the
// affected subtree (a deterministic stand-in for the formula's free choice).
Allocation optimal_allocation(const GameTree& tree, std::span<const double> means, double theta,
                              const RewardModel& model, AssumptionCheck check = AssumptionCheck::Enforce);

// Same computation for the subtree rooted at `node`, treated as a standalone
// instance (the mode comes from the subtree's own answer).
Allocation subtree_allocation(const GameTree& tree, int node, std::span<const double> means, double theta,
                              const RewardModel& model, AssumptionCheck check = AssumptionCheck::Skip);

// Reference value of the inner problem: the cheapest way, under leaf costs
// w_l * d(mu_l, theta), to move a set of leaves to the threshold so the root
// answer flips. Exact for any simplex vector w.
double alt_infimum(const GameTree& tree, std::span<const double> means, double theta,
                   const RewardModel& model, std::span<const double> w);

// ln(1/delta) / d_root; the asymptotic floor on the expected stopping time.
double lower_bound_time(double d_root, double delta);

}  // namespace tmcts
