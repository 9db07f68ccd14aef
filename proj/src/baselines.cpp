#include "tmcts/baselines.hpp"

#include <chrono>
#include <cmath>

namespace tmcts {

namespace {

double leaf_radius(long long n, const ThresholdParams& params) {
    const double leaves = static_cast<double>(params.num_leaves);
    const double b = 3.0 * std::log(1.0 + std::log(static_cast<double>(n))) +
                     leaves * c_exp(std::log(1.0 / params.delta) / leaves);
    return std::sqrt(b / (2.0 * static_cast<double>(n)));
}

// Representative leaf: optimistic descent (MAX by upper bound, MIN by lower
// bound), ties to document order.
int descend(const GameTree& tree, int node, const std::vector<NodeInterval>& iv) {
    int cur = node;
    while (!tree.is_leaf(cur)) {
        const TreeNode& n = tree.node(cur);
        int best = n.children.front();
        for (int c : n.children) {
            if (*n.label == NodeLabel::Max) {
                if (iv[static_cast<size_t>(c)].ucb > iv[static_cast<size_t>(best)].ucb) best = c;
            } else {
                if (iv[static_cast<size_t>(c)].lcb < iv[static_cast<size_t>(best)].lcb) best = c;
            }
        }
        cur = best;
    }
    return tree.node(cur).leaf_index;
}

struct StopCheck {
    bool stop = false;
    Answer answer = Answer::Lose;
};

StopCheck depth1_stop(const GameTree& tree, const std::vector<NodeInterval>& iv, double theta) {
    const TreeNode& root = tree.node(tree.root());
    double best_lcb = -std::numeric_limits<double>::infinity();
    double best_ucb = -std::numeric_limits<double>::infinity();
    for (int c : root.children) {
        best_lcb = std::max(best_lcb, iv[static_cast<size_t>(c)].lcb);
        best_ucb = std::max(best_ucb, iv[static_cast<size_t>(c)].ucb);
    }
    if (best_lcb >= theta) return {true, Answer::Win};
    if (best_ucb < theta) return {true, Answer::Lose};
    return {false, Answer::Lose};
}

void require_max_root(const GameTree& tree) {
    const TreeNode& root = tree.node(tree.root());
    if (root.children.empty() || *root.label != NodeLabel::Max)
        throw DomainError("this baseline needs a MAX-labeled root");
}

RunResult finish(const GameTree& tree, std::span<const double> means, const RunConfig& config,
                 const EmpiricalState& state, Answer rec, std::chrono::steady_clock::time_point started) {
    RunResult r;
    r.stopping_time = state.t;
    r.recommendation = rec;
    r.correct = rec == node_answer(tree, tree.root(), means, config.theta);
    r.counts = state.counts;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

}  // namespace

std::vector<NodeInterval> propagate_intervals(const GameTree& tree, const EmpiricalState& state,
                                              const ThresholdParams& params) {
    std::vector<NodeInterval> iv(static_cast<size_t>(tree.num_nodes()));
    for (int id : tree.postorder()) {
        const TreeNode& n = tree.node(id);
        if (n.children.empty()) {
            const long long nl = state.counts[static_cast<size_t>(n.leaf_index)];
            if (nl < 1) throw Error("intervals need every leaf drawn at least once");
            const double mu = state.means[static_cast<size_t>(n.leaf_index)];
            const double rad = leaf_radius(nl, params);
            iv[static_cast<size_t>(id)] = {mu - rad, mu + rad};
            continue;
        }
        NodeInterval agg = iv[static_cast<size_t>(n.children.front())];
        for (size_t k = 1; k < n.children.size(); ++k) {
            const NodeInterval& c = iv[static_cast<size_t>(n.children[k])];
            if (*n.label == NodeLabel::Max) {
                agg.lcb = std::max(agg.lcb, c.lcb);
                agg.ucb = std::max(agg.ucb, c.ucb);
            } else {
                agg.lcb = std::min(agg.lcb, c.lcb);
                agg.ucb = std::min(agg.ucb, c.ucb);
            }
        }
        iv[static_cast<size_t>(id)] = agg;
    }
    return iv;
}

RunResult run_ugape(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng) {
    const auto started = std::chrono::steady_clock::now();
    require_max_root(tree);
    config.model.require_interior(config.theta);

    const int leaves = tree.num_leaves();
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) state.record(i, config.model.sample(means[static_cast<size_t>(i)], rng));

    const ThresholdParams params{config.delta, leaves};
    const TreeNode& root = tree.node(tree.root());
    for (;;) {
        if (state.t >= config.round_cap) throw Error("round cap exceeded without stopping");
        const auto iv = propagate_intervals(tree, state, params);
        const auto check = depth1_stop(tree, iv, config.theta);
        if (check.stop) return finish(tree, means, config, state, check.answer, started);

        // Gap index with zero tolerance: candidate minimizing the best rival
        // ucb minus its own lcb, challenger with the largest rival ucb.
        int best = -1;
        double best_gap = 0.0;
        for (int c : root.children) {
            double rival = -std::numeric_limits<double>::infinity();
            for (int o : root.children)
                if (o != c) rival = std::max(rival, iv[static_cast<size_t>(o)].ucb);
            const double gap = rival - iv[static_cast<size_t>(c)].lcb;
            if (best < 0 || gap < best_gap) {
                best = c;
                best_gap = gap;
            }
        }
        int challenger = -1;
        for (int c : root.children) {
            if (c == best) continue;
            if (challenger < 0 || iv[static_cast<size_t>(c)].ucb > iv[static_cast<size_t>(challenger)].ucb)
                challenger = c;
        }
        int target = best;
        if (challenger >= 0) {
            const double wb = iv[static_cast<size_t>(best)].ucb - iv[static_cast<size_t>(best)].lcb;
            const double wc = iv[static_cast<size_t>(challenger)].ucb - iv[static_cast<size_t>(challenger)].lcb;
            if (wc > wb) target = challenger;
        }
        const int leaf = descend(tree, target, iv);
        state.record(leaf, config.model.sample(means[static_cast<size_t>(leaf)], rng));
    }
}

RunResult run_lucb_micro(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng) {
    const auto started = std::chrono::steady_clock::now();
    require_max_root(tree);
    config.model.require_interior(config.theta);

    const int leaves = tree.num_leaves();
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) state.record(i, config.model.sample(means[static_cast<size_t>(i)], rng));

    const ThresholdParams params{config.delta, leaves};
    const TreeNode& root = tree.node(tree.root());
    for (;;) {
        if (state.t >= config.round_cap) throw Error("round cap exceeded without stopping");
        const auto iv = propagate_intervals(tree, state, params);
        const auto check = depth1_stop(tree, iv, config.theta);
        if (check.stop) return finish(tree, means, config, state, check.answer, started);

        // Empirically best child and the challenger with the largest ucb.
        int best = root.children.front();
        for (int c : root.children)
            if (node_value(tree, c, state.means) > node_value(tree, best, state.means)) best = c;
        int challenger = -1;
        for (int c : root.children) {
            if (c == best) continue;
            if (challenger < 0 || iv[static_cast<size_t>(c)].ucb > iv[static_cast<size_t>(challenger)].ucb)
                challenger = c;
        }
        const int l1 = descend(tree, best, iv);
        state.record(l1, config.model.sample(means[static_cast<size_t>(l1)], rng));
        if (challenger >= 0) {
            const auto iv2 = propagate_intervals(tree, state, params);
            const int l2 = descend(tree, challenger, iv2);
            state.record(l2, config.model.sample(means[static_cast<size_t>(l2)], rng));
        }
    }
}

}  // namespace tmcts
