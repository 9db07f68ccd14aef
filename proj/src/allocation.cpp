#include "tmcts/allocation.hpp"

#include <cmath>
#include <limits>

namespace tmcts {

namespace {

constexpr double kAssumptionTol = 1e-9;

// Keeps the harmonic combination's sign when 1/sum underflows.
double harmonic(double recip_sum) {
    const double d = 1.0 / recip_sum;
    if (d == 0.0) return std::copysign(std::numeric_limits<double>::min(), recip_sum);
    return d;
}

// A node combines its children with max (picking one) or harmonically
// (spreading), depending on its label and the instance answer.
bool picks_one(NodeLabel label, Answer mode) {
    return (mode == Answer::Win) == (label == NodeLabel::Max);
}

}  // namespace

static Allocation allocation_at(const GameTree& tree, int start, std::span<const double> means,
                                double theta, const RewardModel& model, AssumptionCheck check) {
    Allocation out;
    out.d.assign(static_cast<size_t>(tree.num_nodes()), 0.0);
    out.w.assign(static_cast<size_t>(tree.num_leaves()), 0.0);

    const double v_root = node_value(tree, start, means);
    if (check == AssumptionCheck::Enforce && std::abs(v_root - theta) <= kAssumptionTol)
        throw AssumptionViolated("root value " + std::to_string(v_root) + " sits at the threshold");
    out.answer = v_root >= theta ? Answer::Win : Answer::Lose;

    // Bottom-up d_s over the subtree.
    std::vector<char> in_subtree(static_cast<size_t>(tree.num_nodes()), 0);
    {
        std::vector<int> dfs{start};
        while (!dfs.empty()) {
            const int id = dfs.back();
            dfs.pop_back();
            in_subtree[static_cast<size_t>(id)] = 1;
            for (int c : tree.node(id).children) dfs.push_back(c);
        }
    }
    for (int id : tree.postorder()) {
        const TreeNode& n = tree.node(id);
        if (!in_subtree[static_cast<size_t>(id)]) continue;
        if (n.children.empty()) {
            const double mu = means[static_cast<size_t>(n.leaf_index)];
            const bool on_side = out.answer == Answer::Win ? (mu >= theta) : (mu < theta);
            out.d[static_cast<size_t>(id)] = on_side ? model.kl(mu, theta) : 0.0;
            continue;
        }
        if (picks_one(*n.label, out.answer)) {
            double best = 0.0;
            for (int c : n.children) best = std::max(best, out.d[static_cast<size_t>(c)]);
            out.d[static_cast<size_t>(id)] = best;
        } else {
            double recip_sum = 0.0;
            bool any_zero = false;
            for (int c : n.children) {
                const double dc = out.d[static_cast<size_t>(c)];
                if (dc == 0.0) {
                    any_zero = true;
                    break;
                }
                recip_sum += 1.0 / dc;
            }
            out.d[static_cast<size_t>(id)] = any_zero ? 0.0 : harmonic(recip_sum);
        }
    }
    out.d_root = out.d[static_cast<size_t>(start)];

    // Top-down mass propagation.
    struct Item { int id; double mass; };
    std::vector<Item> stack{{start, 1.0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const TreeNode& n = tree.node(it.id);
        if (n.children.empty()) {
            out.w[static_cast<size_t>(n.leaf_index)] += it.mass;
            continue;
        }
        const double ds = out.d[static_cast<size_t>(it.id)];
        if (ds == 0.0) {
            // Free-choice branch of the recursion; spread uniformly so runs
            // are reproducible.
            const double share = it.mass / n.leaf_count;
            for (int k = 0; k < n.leaf_count; ++k)
                out.w[static_cast<size_t>(n.leaf_begin + k)] += share;
            continue;
        }
        if (picks_one(*n.label, out.answer)) {
            int best = n.children.front();
            for (int c : n.children)
                if (out.d[static_cast<size_t>(c)] > out.d[static_cast<size_t>(best)]) best = c;
            stack.push_back({best, it.mass});
        } else {
            double recip_sum = 0.0;
            for (int c : n.children) recip_sum += 1.0 / out.d[static_cast<size_t>(c)];
            for (int c : n.children) {
                const double share = (1.0 / out.d[static_cast<size_t>(c)]) / recip_sum;
                if (it.mass * share > 0.0) stack.push_back({c, it.mass * share});
            }
        }
    }
    return out;
}

Allocation optimal_allocation(const GameTree& tree, std::span<const double> means, double theta,
                              const RewardModel& model, AssumptionCheck check) {
    return allocation_at(tree, tree.root(), means, theta, model, check);
}

Allocation subtree_allocation(const GameTree& tree, int node, std::span<const double> means, double theta,
                              const RewardModel& model, AssumptionCheck check) {
    return allocation_at(tree, node, means, theta, model, check);
}

double alt_infimum(const GameTree& tree, std::span<const double> means, double theta,
                   const RewardModel& model, std::span<const double> w) {
    const Answer ans = node_answer(tree, tree.root(), means, theta);
    // cost[s]: cheapest way to force the opposite answer on the subtree of s
    // by moving leaves to the threshold.
    std::vector<double> cost(static_cast<size_t>(tree.num_nodes()), 0.0);
    for (int id : tree.postorder()) {
        const TreeNode& n = tree.node(id);
        if (n.children.empty()) {
            const double mu = means[static_cast<size_t>(n.leaf_index)];
            const bool must_move = ans == Answer::Win ? (mu >= theta) : (mu < theta);
            cost[static_cast<size_t>(id)] =
                must_move ? w[static_cast<size_t>(n.leaf_index)] * model.kl(mu, theta) : 0.0;
            continue;
        }
        // Flipping a Win instance to Lose needs every child of a MAX node
        // flipped but only one child of a MIN node; the Lose case mirrors it.
        const bool need_all = ans == Answer::Win ? (*n.label == NodeLabel::Max) : (*n.label == NodeLabel::Min);
        if (need_all) {
            double total = 0.0;
            for (int c : n.children) total += cost[static_cast<size_t>(c)];
            cost[static_cast<size_t>(id)] = total;
        } else {
            double best = cost[static_cast<size_t>(n.children.front())];
            for (int c : n.children) best = std::min(best, cost[static_cast<size_t>(c)]);
            cost[static_cast<size_t>(id)] = best;
        }
    }
    return cost[static_cast<size_t>(tree.root())];
}

double lower_bound_time(double d_root, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (!(d_root > 0.0)) throw AssumptionViolated("zero characteristic value has no finite lower bound");
    return std::log(1.0 / delta) / d_root;
}

}  // namespace tmcts
