#include "tmcts/sampling.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "tmcts/engine.hpp"

namespace tmcts {

int select_forced(const EmpiricalState& state) {
    const long long t = state.t + 1;
    const double bar = std::sqrt(static_cast<double>(t)) - static_cast<double>(state.num_leaves()) / 2.0;
    int best = 0;
    for (int i = 1; i < state.num_leaves(); ++i)
        if (state.counts[static_cast<size_t>(i)] < state.counts[static_cast<size_t>(best)]) best = i;
    if (static_cast<double>(state.counts[static_cast<size_t>(best)]) < bar) return best;
    return -1;
}

int select_rd(const EmpiricalState& state, std::span<const double> w) {
    int best = 0;
    double best_ratio = -1.0;
    for (int i = 0; i < state.num_leaves(); ++i) {
        const double wi = w[static_cast<size_t>(i)];
        const double ratio = wi > 0.0 ? wi / static_cast<double>(state.counts[static_cast<size_t>(i)]) : 0.0;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = i;
        }
    }
    return best;
}

int select_d(const EmpiricalState& state, std::span<const double> w) {
    const double t = static_cast<double>(state.t + 1);
    int best = 0;
    double best_score = 0.0;
    for (int i = 0; i < state.num_leaves(); ++i) {
        const double score = t * w[static_cast<size_t>(i)] - static_cast<double>(state.counts[static_cast<size_t>(i)]);
        if (i == 0 || score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

int select_c(const EmpiricalState& state, std::span<const double> cumulative_w) {
    int best = 0;
    double best_score = 0.0;
    for (int i = 0; i < state.num_leaves(); ++i) {
        const double score =
            cumulative_w[static_cast<size_t>(i)] - static_cast<double>(state.counts[static_cast<size_t>(i)]);
        if (i == 0 || score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

std::vector<double> project_floor(std::span<const double> w, double eps) {
    const size_t n = w.size();
    std::vector<double> out(w.begin(), w.end());
    std::vector<char> low(n, 0);
    for (;;) {
        double low_mass = 0.0;
        double high_mass = 0.0;
        size_t low_count = 0;
        for (size_t i = 0; i < n; ++i) {
            if (low[i] || out[i] <= eps) {
                low[i] = 1;
                ++low_count;
            } else {
                high_mass += out[i];
            }
        }
        low_mass = eps * static_cast<double>(low_count);
        bool changed = false;
        const double scale = high_mass > 0.0 ? (1.0 - low_mass) / high_mass : 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (low[i]) {
                out[i] = eps;
            } else {
                out[i] = w[i] * scale;
                if (out[i] < eps) changed = true;
            }
        }
        if (!changed) break;
    }
    return out;
}

namespace {

struct LoopOutcome {
    long long tau = 0;
    Answer recommendation = Answer::Lose;
};

// select() is called with the state as of round t-1 and the round number t;
// mutation happens only through update().
template <typename SelectFn, typename UpdateFn, typename StopFn>
LoopOutcome drive_loop(const GameTree& tree, std::span<const double> means, const RunConfig& config,
                       Rng& rng, const EmpiricalState& state, SelectFn&& select, UpdateFn&& update,
                       StopFn&& stop_stat) {
    const ThresholdParams params{config.delta, tree.num_leaves()};
    const double beta_const =
        static_cast<double>(params.num_leaves) *
        c_exp(std::log(1.0 / config.delta) / static_cast<double>(params.num_leaves));
    for (;;) {
        const long long t = state.t + 1;
        if (t > config.round_cap) throw Error("round cap exceeded without stopping");
        const int leaf = select(t);
        const double reward = config.model.sample(means[static_cast<size_t>(leaf)], rng);
        update(leaf, reward);
        const double beta = 3.0 * state.log_count_sum + beta_const;
        const double z = stop_stat();
        if (std::abs(z) >= beta) {
            LoopOutcome out;
            out.tau = state.t;
            out.recommendation = z >= 0.0 ? Answer::Win : Answer::Lose;
            return out;
        }
    }
}

RunResult finish(const GameTree& tree, std::span<const double> means, const RunConfig& config,
                 const EmpiricalState& state, long long tau, Answer rec,
                 std::chrono::steady_clock::time_point started) {
    RunResult r;
    r.stopping_time = tau;
    r.recommendation = rec;
    r.correct = rec == node_answer(tree, tree.root(), means, config.theta);
    r.counts = state.counts;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

}  // namespace

RunResult run(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng) {
    if (config.sampler == SamplerKind::RoundRobin) return run_roundrobin(tree, means, config, rng);
    const auto started = std::chrono::steady_clock::now();
    config.model.require_interior(config.theta);
    const double v_root = node_value(tree, tree.root(), means);
    if (std::abs(v_root - config.theta) <= 1e-9)
        throw AssumptionViolated("instance root value sits at the threshold");

    const int leaves = tree.num_leaves();
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) state.record(i, config.model.sample(means[static_cast<size_t>(i)], rng));

    if (config.engine == EngineKind::Fast) {
        if (config.sampler != SamplerKind::Rd)
            throw DomainError("the fast engine implements the rd sampler only");
        IncrementalEngine engine(tree, state, config.theta, config.model, config.refresh_interval);
        auto outcome = drive_loop(
            tree, means, config, rng, engine.state(),
            [&](long long t) { return engine.select(t); },
            [&](int leaf, double reward) {
                engine.update(leaf, reward);
                if (config.paranoid) engine.check();
            },
            [&]() { return engine.stop_stat(); });
        return finish(tree, means, config, engine.state(), outcome.tau, outcome.recommendation, started);
    }

    // Naive engine: full allocation recomputation every round.
    std::vector<double> cumulative(static_cast<size_t>(leaves), 0.0);
    auto plugin_w = [&]() {
        return optimal_allocation(tree, state.means, config.theta, config.model, AssumptionCheck::Skip).w;
    };
    auto outcome = drive_loop(
        tree, means, config, rng, state,
        [&](long long t) {
            const int forced = select_forced(state);
            if (config.sampler == SamplerKind::C) {
                const double eps =
                    0.5 / std::sqrt(static_cast<double>(leaves) * leaves + static_cast<double>(t));
                const auto projected = project_floor(plugin_w(), eps);
                for (int i = 0; i < leaves; ++i) cumulative[static_cast<size_t>(i)] += projected[static_cast<size_t>(i)];
                if (forced >= 0) return forced;
                return select_c(state, cumulative);
            }
            if (forced >= 0) return forced;
            const auto w = plugin_w();
            return config.sampler == SamplerKind::Rd ? select_rd(state, w) : select_d(state, w);
        },
        [&](int leaf, double reward) { state.record(leaf, reward); },
        [&]() {
            const double z = glr(tree, state, config.theta, config.model);
            return node_answer(tree, tree.root(), state.means, config.theta) == Answer::Win ? z : -z;
        });
    return finish(tree, means, config, state, outcome.tau, outcome.recommendation, started);
}

RunResult run_roundrobin(const GameTree& tree, std::span<const double> means, const RunConfig& config, Rng& rng) {
    const auto started = std::chrono::steady_clock::now();
    config.model.require_interior(config.theta);
    const double v_root = node_value(tree, tree.root(), means);
    if (std::abs(v_root - config.theta) <= 1e-9)
        throw AssumptionViolated("instance root value sits at the threshold");

    const int leaves = tree.num_leaves();
    EmpiricalState state(leaves);
    for (int i = 0; i < leaves; ++i) state.record(i, config.model.sample(means[static_cast<size_t>(i)], rng));

    auto outcome = drive_loop(
        tree, means, config, rng, state,
        [&](long long t) { return static_cast<int>((t - 1) % leaves); },
        [&](int leaf, double reward) { state.record(leaf, reward); },
        [&]() {
            const double z = glr(tree, state, config.theta, config.model);
            return node_answer(tree, tree.root(), state.means, config.theta) == Answer::Win ? z : -z;
        });
    return finish(tree, means, config, state, outcome.tau, outcome.recommendation, started);
}

}  // namespace tmcts
