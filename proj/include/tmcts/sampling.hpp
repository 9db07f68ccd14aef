#pragma once

#include <span>
#include <vector>

#include "tmcts/allocation.hpp"
#include "tmcts/glr.hpp"
#include "tmcts/reward_model.hpp"
#include "tmcts/rng.hpp"
#include "tmcts/tree.hpp"

namespace tmcts {

enum class SamplerKind { Rd, D, C, RoundRobin };
enum class EngineKind { Naive, Fast };

struct RunConfig {
    double theta = 0.5;
    double delta = 0.1;
    RewardModel model = RewardModel::bernoulli();
    SamplerKind sampler = SamplerKind::Rd;
    EngineKind engine = EngineKind::Naive;
    long long round_cap = 1'000'000'000LL;
    long long refresh_interval = 1LL << 20;
    bool paranoid = false;
};

struct RunResult {
    long long stopping_time = 0;
    Answer recommendation = Answer::Lose;
    bool correct = false;
    std::vector<long long> counts;
    double wall_seconds = 0.0;
    // -2: not a good-action run; -1: "no good action"; otherwise the
    // recommended root child's node id.
    int gai_child = -2;
};

// Forced-exploration clause: the least-sampled leaf when its count is below
// sqrt(t) - |L|/2 at the round about to be played, -1 otherwise. Ties go to
// the lowest leaf index, here and in every selector below.
int select_forced(const EmpiricalState& state);
// Ratio rule: argmax w_l / N_l.
int select_rd(const EmpiricalState& state, std::span<const double> w);
// Difference rule: argmax t*w_l - N_l.
int select_d(const EmpiricalState& state, std::span<const double> w);
// Cumulative rule: argmax cumulative_w_l - N_l.
int select_c(const EmpiricalState& state, std::span<const double> cumulative_w);

// Pushes every weight up to at least `eps`, rescaling the rest; used by the
// C-Tracking accumulator.
std::vector<double> project_floor(std::span<const double> w, double eps);

// One full run of the track-and-stop loop (or the cyclic baseline for
// RoundRobin). Draws every leaf once, then alternates select / observe /
// update / stop-check. Deterministic given the rng stream.
RunResult run(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng);
RunResult run_roundrobin(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng);

}  // namespace tmcts
