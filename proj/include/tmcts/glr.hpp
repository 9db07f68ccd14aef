#pragma once

#include <span>
#include <vector>

#include "tmcts/reward_model.hpp"
#include "tmcts/tree.hpp"

namespace tmcts {

// Per-leaf counts and running means of one run. Counts are >= 1 once the
// initialization pass has drawn every leaf.
struct EmpiricalState {
    std::vector<long long> counts;
    std::vector<double> means;
    long long t = 0;
    // Sum over leaves of ln(1 + ln N_l), maintained incrementally so the
    // stopping threshold costs O(1) per round.
    double log_count_sum = 0.0;

    explicit EmpiricalState(int num_leaves)
        : counts(static_cast<size_t>(num_leaves), 0), means(static_cast<size_t>(num_leaves), 0.0) {}

    int num_leaves() const { return static_cast<int>(counts.size()); }

    void record(int leaf_index, double reward);
    // Scripted states: overwrite one leaf's statistics outright.
    void set(int leaf_index, long long n, double mean);
};

struct ThresholdParams {
    double delta = 0.1;
    int num_leaves = 1;
};

// GLR statistic at the root for the current empirical answer.
double glr(const GameTree& tree, const EmpiricalState& state, double theta, const RewardModel& model);
// GLR of the subtree rooted at `node`, evaluated for the given answer mode
// (the evidence that a_node = mode cannot be flipped cheaply).
double glr_subtree(const GameTree& tree, int node, const EmpiricalState& state, double theta,
                   const RewardModel& model, Answer mode);

// h(x) = x - ln x for x >= 1.
double h_fn(double x);
// Inverse of h on the branch x >= 1, for y >= 1; safeguarded Newton.
double h_inverse(double y);
// Threshold calibration function; x >= 0.
double c_exp(double x);

// 3 * sum_l ln(1 + ln N_l) + |L| * c_exp(ln(1/delta)/|L|); all logs natural.
double beta_threshold(const EmpiricalState& state, const ThresholdParams& params);
double beta_from_log_sum(double log_count_sum, const ThresholdParams& params);

bool should_stop(const GameTree& tree, const EmpiricalState& state, double theta,
                 const RewardModel& model, const ThresholdParams& params);

}  // namespace tmcts
