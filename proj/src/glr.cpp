#include "tmcts/glr.hpp"

#include <cmath>
#include <string>

namespace tmcts {

namespace {

double log_count_term(long long n) { return n >= 1 ? std::log(1.0 + std::log(static_cast<double>(n))) : 0.0; }

}  // namespace

void EmpiricalState::record(int leaf_index, double reward) {
    auto i = static_cast<size_t>(leaf_index);
    const long long n_old = counts[i];
    means[i] = (means[i] * static_cast<double>(n_old) + reward) / static_cast<double>(n_old + 1);
    counts[i] = n_old + 1;
    t += 1;
    log_count_sum += log_count_term(n_old + 1) - log_count_term(n_old);
}

void EmpiricalState::set(int leaf_index, long long n, double mean) {
    auto i = static_cast<size_t>(leaf_index);
    t += n - counts[i];
    log_count_sum += log_count_term(n) - log_count_term(counts[i]);
    counts[i] = n;
    means[i] = mean;
}

double glr_subtree(const GameTree& tree, int node, const EmpiricalState& state, double theta,
                   const RewardModel& model, Answer mode) {
    std::vector<char> in_subtree(static_cast<size_t>(tree.num_nodes()), 0);
    {
        std::vector<int> dfs{node};
        while (!dfs.empty()) {
            const int id = dfs.back();
            dfs.pop_back();
            in_subtree[static_cast<size_t>(id)] = 1;
            for (int c : tree.node(id).children) dfs.push_back(c);
        }
    }
    std::vector<double> z(static_cast<size_t>(tree.num_nodes()), 0.0);
    for (int id : tree.postorder()) {
        if (!in_subtree[static_cast<size_t>(id)]) continue;
        const TreeNode& n = tree.node(id);
        if (n.children.empty()) {
            const double mu = state.means[static_cast<size_t>(n.leaf_index)];
            const bool on_side = mode == Answer::Win ? (mu >= theta) : (mu < theta);
            z[static_cast<size_t>(id)] =
                on_side ? static_cast<double>(state.counts[static_cast<size_t>(n.leaf_index)]) * model.kl(mu, theta)
                        : 0.0;
            continue;
        }
        const bool sums = mode == Answer::Win ? (*n.label == NodeLabel::Max) : (*n.label == NodeLabel::Min);
        if (sums) {
            double total = 0.0;
            for (int c : n.children) total += z[static_cast<size_t>(c)];
            z[static_cast<size_t>(id)] = total;
        } else {
            double best = z[static_cast<size_t>(n.children.front())];
            for (int c : n.children) best = std::min(best, z[static_cast<size_t>(c)]);
            z[static_cast<size_t>(id)] = best;
        }
    }
    return z[static_cast<size_t>(node)];
}

double glr(const GameTree& tree, const EmpiricalState& state, double theta, const RewardModel& model) {
    const Answer mode = node_answer(tree, tree.root(), state.means, theta);
    return glr_subtree(tree, tree.root(), state, theta, model, mode);
}

double h_fn(double x) {
    if (!(x >= 1.0)) throw DomainError("h is only used on x >= 1");
    return x - std::log(x);
}

double h_inverse(double y) {
    if (!(y >= 1.0)) throw DomainError("h_inverse needs y >= 1");
    if (y == 1.0) return 1.0;
    double lo = y;
    double hi = y + std::log(y + std::sqrt(2.0 * (y - 1.0))) + 1.0;
    double x = y + std::log(y);
    for (int iter = 0; iter < 80; ++iter) {
        const double g = x - std::log(x) - y;
        if (g > 0.0)
            hi = x;
        else
            lo = x;
        const double step = g / (1.0 - 1.0 / x);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double c_exp(double x) {
    if (!(x >= 0.0)) throw DomainError("c_exp needs x >= 0");
    static const double kLnPi2Over3 = std::log(9.869604401089358618834490999876 / 3.0);
    static const double kLnLn32 = std::log(std::log(1.5));
    static const double kBranch = h_fn(1.0 / std::log(1.5));
    const double arg = 0.5 * (h_inverse(1.0 + x) + kLnPi2Over3);
    double htilde;
    if (arg >= kBranch) {
        const double hi = h_inverse(arg);
        htilde = std::exp(1.0 / hi) * hi;
    } else {
        htilde = 1.5 * (arg - kLnLn32);
    }
    return 2.0 * htilde;
}

double beta_from_log_sum(double log_count_sum, const ThresholdParams& params) {
    if (!(params.delta > 0.0 && params.delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    const double leaves = static_cast<double>(params.num_leaves);
    return 3.0 * log_count_sum + leaves * c_exp(std::log(1.0 / params.delta) / leaves);
}

double beta_threshold(const EmpiricalState& state, const ThresholdParams& params) {
    double sum = 0.0;
    for (long long n : state.counts) {
        if (n < 1) throw Error("beta threshold needs every leaf drawn at least once");
        sum += log_count_term(n);
    }
    return beta_from_log_sum(sum, params);
}

bool should_stop(const GameTree& tree, const EmpiricalState& state, double theta,
                 const RewardModel& model, const ThresholdParams& params) {
    return glr(tree, state, theta, model) >= beta_threshold(state, params);
}

}  // namespace tmcts
