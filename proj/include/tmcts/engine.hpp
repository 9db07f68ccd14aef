#pragma once

#include <vector>

#include "tmcts/glr.hpp"
#include "tmcts/indexed_heap.hpp"
#include "tmcts/reward_model.hpp"
#include "tmcts/tree.hpp"

namespace tmcts {

// Ratio key and the leaf a subtree proposes for the ratio-based draw.
// Winning leaves carry 1/(d~ * N) > 0, losing leaves a negative key, and
// exactly-at-threshold leaves the +inf sentinel.
struct RdKey {
    double key = 0.0;
    int leaf = -1;
};

struct OrientedDoubleBefore {
    bool max_first = false;
    bool operator()(double ka, int ia, double kb, int ib) const {
        if (ka != kb) return max_first ? ka > kb : ka < kb;
        return ia < ib;
    }
};

struct OrientedRdBefore {
    bool max_first = false;
    bool operator()(const RdKey& a, int, const RdKey& b, int) const {
        if (a.key != b.key) return max_first ? a.key > b.key : a.key < b.key;
        return a.leaf < b.leaf;
    }
};

struct CountBefore {
    bool operator()(long long ka, int ia, long long kb, int ib) const {
        if (ka != kb) return ka < kb;
        return ia < ib;
    }
};

// Signed-statistic engine: per-node d~ / Z~ / RD with child heaps and
// aggregate sums, updated along the single leaf-to-root path after each
// reward, so selection and the stopping statistic cost O(depth * log arity)
// per round instead of a full-tree sweep.
class IncrementalEngine {
public:
    // Requires every leaf drawn at least once in `state`.
    IncrementalEngine(const GameTree& tree, EmpiricalState state, double theta, const RewardModel& model,
                      long long refresh_interval = 1LL << 20);

    // Records the reward and backpropagates the changed statistics.
    void update(int leaf_index, double reward);

    // Forced-exploration check, then the ratio rule at the root. `t` is the
    // round about to be played.
    int select(long long t) const;

    // Signed root statistic; |value| is the GLR, the sign the recommendation.
    double stop_stat() const { return stats_[static_cast<size_t>(tree_->root())].z_tilde; }
    double root_d_tilde() const { return stats_[static_cast<size_t>(tree_->root())].d_tilde; }
    RdKey root_rd() const { return stats_[static_cast<size_t>(tree_->root())].rd; }

    const EmpiricalState& state() const { return state_; }

    double node_d_tilde(int id) const { return stats_[static_cast<size_t>(id)].d_tilde; }
    double node_z_tilde(int id) const { return stats_[static_cast<size_t>(id)].z_tilde; }
    RdKey node_rd(int id) const { return stats_[static_cast<size_t>(id)].rd; }

    // Full re-initialization from the current state; bounds drift.
    void rebuild();
    // Audit: heap invariants plus agreement with a from-scratch rebuild.
    void check(double tol = 1e-9) const;

private:
    struct Stats {
        double d_tilde = 0.0;
        double z_tilde = 0.0;
        RdKey rd{0.0, -1};
    };
    struct Aux {
        double recip_sum = 0.0;  // sum of 1/d~_c over the harmonically combined sign class
        double sz = 0.0;         // sum of Z~_c over the same-sign class
        IndexedHeap<double, OrientedDoubleBefore> d_heap;
        IndexedHeap<double, OrientedDoubleBefore> z_heap;
        IndexedHeap<RdKey, OrientedRdBefore> rd_heap;
    };

    Stats leaf_stats(int leaf_index) const;
    void recompute_node(int id);
    static bool in_harmonic_class(NodeLabel label, double d_tilde) {
        return label == NodeLabel::Max ? d_tilde < 0.0 : d_tilde > 0.0;
    }

    const GameTree* tree_;
    RewardModel model_;
    double theta_;
    EmpiricalState state_;
    std::vector<Stats> stats_;
    std::vector<int> aux_index_;
    std::vector<Aux> aux_;
    IndexedHeap<long long, CountBefore> count_heap_;
    long long refresh_interval_;
    long long updates_since_rebuild_ = 0;
};

}  // namespace tmcts
