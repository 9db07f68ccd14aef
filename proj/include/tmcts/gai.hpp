#pragma once

#include <span>

#include "tmcts/glr.hpp"
#include "tmcts/sampling.hpp"

namespace tmcts {

// Good-action result at a MAX root: a child whose value reaches the
// threshold, or the assertion that none does.
struct GaiAnswer {
    int child = -1;  // root-child node id; -1 means "no good action"
    bool no_good_action() const { return child < 0; }
};

// Good-action statistic: max over root children of the per-child GLR when
// the empirical answer is Win, the plain root GLR otherwise. Root must be
// MAX-labeled.
double glr_gai(const GameTree& tree, const EmpiricalState& state, double theta, const RewardModel& model);

// Recommended child: the empirically-good child with the largest per-child
// GLR, ties to document order; "no good action" if no child looks good.
GaiAnswer recommend_gai(const GameTree& tree, const EmpiricalState& state, double theta,
                        const RewardModel& model);

// Ratio-tracking run with the good-action stopping statistic and
// recommendation. Fills RunResult::gai_child.
RunResult run_gai(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng);

// Whether a good-action answer is correct for the true means.
bool gai_answer_correct(const GameTree& tree, const GaiAnswer& answer, std::span<const double> means,
                        double theta);

}  // namespace tmcts
