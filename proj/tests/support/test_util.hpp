#pragma once

// Shared helpers for the test suites: random instances, random simplex
// vectors, and a subset-enumeration oracle for the alternative-infimum that
// shares no code with the library recursions.

#include <cmath>
#include <vector>

#include "tmcts/allocation.hpp"
#include "tmcts/glr.hpp"
#include "tmcts/reward_model.hpp"
#include "tmcts/rng.hpp"
#include "tmcts/tree.hpp"

namespace tmcts::test {

// Random tree of depth <= max_depth with 1..max_arity children per internal
// node and random labels. Guaranteed at least one internal level when
// max_depth >= 1.
inline GameTree random_tree(Rng& rng, int max_depth, int max_arity) {
    std::vector<TreeNode> nodes;
    int leaf_counter = 0;
    auto build = [&](auto&& self, int parent, int level) -> void {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.back().id = id;
        nodes.back().parent = parent;
        if (parent >= 0) nodes[static_cast<size_t>(parent)].children.push_back(id);
        const bool leaf = level >= max_depth || (level > 0 && rng.uniform() < 0.25);
        if (leaf) {
            nodes[static_cast<size_t>(id)].name = "L" + std::to_string(leaf_counter++);
            return;
        }
        nodes[static_cast<size_t>(id)].label = rng.uniform() < 0.5 ? NodeLabel::Max : NodeLabel::Min;
        const int kids = 1 + static_cast<int>(rng.uniform() * max_arity);
        for (int k = 0; k < kids; ++k) self(self, id, level + 1);
    };
    build(build, -1, 0);
    return GameTree::from_nodes(std::move(nodes), 0);
}

inline std::vector<double> random_means(Rng& rng, const RewardModel& model, int n, double theta) {
    std::vector<double> means(static_cast<size_t>(n));
    for (double& m : means) {
        if (model.family() == Family::Bernoulli)
            m = 0.02 + 0.96 * rng.uniform();
        else
            m = theta + 2.0 * rng.normal();
    }
    return means;
}

inline std::vector<double> random_simplex(Rng& rng, int n) {
    std::vector<double> w(static_cast<size_t>(n));
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (double& x : w) x /= total;
    return w;
}

// Exact alternative-infimum by enumerating subsets of the leaves that sit on
// the current answer's side: each subset is moved to the threshold and the
// answer re-evaluated through the plain minimax machinery.
inline double enumeration_alt_infimum(const GameTree& tree, std::span<const double> means, double theta,
                                      const RewardModel& model, std::span<const double> w) {
    const Answer ans = node_answer(tree, tree.root(), means, theta);
    std::vector<int> movable;  // leaf indices on the answer's side
    for (int i = 0; i < tree.num_leaves(); ++i) {
        const double mu = means[static_cast<size_t>(i)];
        if (ans == Answer::Win ? (mu >= theta) : (mu < theta)) movable.push_back(i);
    }
    const double target = ans == Answer::Win ? theta - 1e-7 : theta;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> scratch(means.begin(), means.end());
    const size_t subsets = size_t{1} << movable.size();
    for (size_t mask = 0; mask < subsets; ++mask) {
        double cost = 0.0;
        for (size_t b = 0; b < movable.size(); ++b) {
            const int leaf = movable[b];
            if (mask & (size_t{1} << b)) {
                scratch[static_cast<size_t>(leaf)] = target;
                cost += w[static_cast<size_t>(leaf)] * model.kl(means[static_cast<size_t>(leaf)], theta);
            } else {
                scratch[static_cast<size_t>(leaf)] = means[static_cast<size_t>(leaf)];
            }
        }
        if (cost < best && node_answer(tree, tree.root(), scratch, theta) != ans) best = cost;
    }
    return best;
}

// Scripted empirical state with the given counts and means.
inline EmpiricalState scripted_state(std::span<const long long> counts, std::span<const double> means) {
    EmpiricalState state(static_cast<int>(counts.size()));
    for (size_t i = 0; i < counts.size(); ++i) state.set(static_cast<int>(i), counts[i], means[i]);
    return state;
}

inline EmpiricalState random_state(Rng& rng, const RewardModel& model, int leaves, double theta,
                                   long long max_count = 200) {
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) {
        const long long n = 1 + static_cast<long long>(rng.uniform() * static_cast<double>(max_count));
        double mu;
        if (model.family() == Family::Bernoulli) {
            // A reachable empirical mean: k successes out of n.
            const long long k = static_cast<long long>(rng.uniform() * static_cast<double>(n + 1));
            mu = static_cast<double>(k) / static_cast<double>(n);
        } else {
            mu = theta + 2.0 * rng.normal();
        }
        state.set(i, n, mu);
    }
    return state;
}

}  // namespace tmcts::test
