#include "tmcts/gai.hpp"

#include <chrono>
#include <cmath>

#include "tmcts/allocation.hpp"

namespace tmcts {

namespace {

void require_max_root(const GameTree& tree) {
    const TreeNode& root = tree.node(tree.root());
    if (root.children.empty() || *root.label != NodeLabel::Max)
        throw DomainError("good-action identification needs a MAX-labeled root");
}

}  // namespace

double glr_gai(const GameTree& tree, const EmpiricalState& state, double theta, const RewardModel& model) {
    require_max_root(tree);
    if (node_answer(tree, tree.root(), state.means, theta) == Answer::Lose)
        return glr_subtree(tree, tree.root(), state, theta, model, Answer::Lose);
    double best = 0.0;
    for (int c : tree.node(tree.root()).children)
        best = std::max(best, glr_subtree(tree, c, state, theta, model, Answer::Win));
    return best;
}

GaiAnswer recommend_gai(const GameTree& tree, const EmpiricalState& state, double theta,
                        const RewardModel& model) {
    require_max_root(tree);
    GaiAnswer out;
    double best = 0.0;
    for (int c : tree.node(tree.root()).children) {
        if (node_answer(tree, c, state.means, theta) != Answer::Win) continue;
        const double z = glr_subtree(tree, c, state, theta, model, Answer::Win);
        if (out.child < 0 || z > best) {
            out.child = c;
            best = z;
        }
    }
    return out;
}

RunResult run_gai(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng) {
    const auto started = std::chrono::steady_clock::now();
    require_max_root(tree);
    config.model.require_interior(config.theta);
    const double v_root = node_value(tree, tree.root(), means);
    if (std::abs(v_root - config.theta) <= 1e-9)
        throw AssumptionViolated("instance root value sits at the threshold");

    const int leaves = tree.num_leaves();
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) state.record(i, config.model.sample(means[static_cast<size_t>(i)], rng));

    const double beta_const = static_cast<double>(leaves) *
                              c_exp(std::log(1.0 / config.delta) / static_cast<double>(leaves));
    for (;;) {
        const long long t = state.t + 1;
        if (t > config.round_cap) throw Error("round cap exceeded without stopping");
        int leaf = select_forced(state);
        if (leaf < 0) {
            const auto w = optimal_allocation(tree, state.means, config.theta, config.model,
                                              AssumptionCheck::Skip)
                               .w;
            leaf = select_rd(state, w);
        }
        state.record(leaf, config.model.sample(means[static_cast<size_t>(leaf)], rng));
        const double beta = 3.0 * state.log_count_sum + beta_const;
        if (glr_gai(tree, state, config.theta, config.model) >= beta) break;
    }

    const GaiAnswer rec = recommend_gai(tree, state, config.theta, config.model);
    RunResult r;
    r.stopping_time = state.t;
    r.recommendation = rec.no_good_action() ? Answer::Lose : Answer::Win;
    r.correct = gai_answer_correct(tree, rec, means, config.theta);
    r.counts = state.counts;
    r.gai_child = rec.child;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

bool gai_answer_correct(const GameTree& tree, const GaiAnswer& answer, std::span<const double> means,
                        double theta) {
    if (answer.no_good_action())
        return node_answer(tree, tree.root(), means, theta) == Answer::Lose;
    return node_answer(tree, answer.child, means, theta) == Answer::Win;
}

}  // namespace tmcts
