#include "tmcts/engine.hpp"

#include <cmath>
#include <limits>

namespace tmcts {

namespace {

double harmonic(double recip_sum) {
    const double d = 1.0 / recip_sum;
    if (d == 0.0) return std::copysign(std::numeric_limits<double>::min(), recip_sum);
    return d;
}

}  // namespace

IncrementalEngine::IncrementalEngine(const GameTree& tree, EmpiricalState state, double theta,
                                     const RewardModel& model, long long refresh_interval)
    : tree_(&tree), model_(model), theta_(theta), state_(std::move(state)), refresh_interval_(refresh_interval) {
    if (state_.num_leaves() != tree.num_leaves()) throw Error("state size does not match the tree");
    for (long long n : state_.counts)
        if (n < 1) throw Error("engine needs every leaf drawn at least once");
    stats_.assign(static_cast<size_t>(tree.num_nodes()), Stats{});
    aux_index_.assign(static_cast<size_t>(tree.num_nodes()), -1);
    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (!tree.is_leaf(id)) {
            aux_index_[static_cast<size_t>(id)] = static_cast<int>(aux_.size());
            aux_.emplace_back();
        }
    }
    rebuild();
}

IncrementalEngine::Stats IncrementalEngine::leaf_stats(int leaf_index) const {
    const auto i = static_cast<size_t>(leaf_index);
    const double mu = state_.means[i];
    const double n = static_cast<double>(state_.counts[i]);
    const double div = model_.kl(mu, theta_);
    Stats s;
    s.d_tilde = (mu >= theta_) ? div : -div;
    if (s.d_tilde == 0.0) s.d_tilde = 0.0;  // normalize any -0
    s.z_tilde = n * s.d_tilde;
    if (s.d_tilde == 0.0)
        s.rd = RdKey{std::numeric_limits<double>::infinity(), leaf_index};
    else
        s.rd = RdKey{1.0 / (s.d_tilde * n), leaf_index};
    return s;
}

void IncrementalEngine::recompute_node(int id) {
    const TreeNode& n = tree_->node(id);
    Aux& a = aux_[static_cast<size_t>(aux_index_[static_cast<size_t>(id)])];
    Stats& s = stats_[static_cast<size_t>(id)];
    const bool is_max = *n.label == NodeLabel::Max;
    const auto& dpeek = a.d_heap.peek();
    // MAX resolves to one child when some d~_c >= 0, MIN when some d~_c <= 0;
    // otherwise the children combine harmonically.
    const bool resolves = is_max ? (dpeek.first >= 0.0) : (dpeek.first <= 0.0);
    if (resolves) {
        s.d_tilde = dpeek.first;
        s.z_tilde = a.sz;
        s.rd = stats_[static_cast<size_t>(n.children[static_cast<size_t>(dpeek.second)])].rd;
    } else {
        s.d_tilde = harmonic(a.recip_sum);
        s.z_tilde = a.z_heap.peek().first;
        s.rd = a.rd_heap.peek().first;
    }
}

void IncrementalEngine::rebuild() {
    for (int id : tree_->postorder()) {
        const TreeNode& n = tree_->node(id);
        if (n.children.empty()) {
            stats_[static_cast<size_t>(id)] = leaf_stats(n.leaf_index);
            continue;
        }
        Aux& a = aux_[static_cast<size_t>(aux_index_[static_cast<size_t>(id)])];
        const bool is_max = *n.label == NodeLabel::Max;
        a.d_heap = IndexedHeap<double, OrientedDoubleBefore>(OrientedDoubleBefore{is_max});
        a.z_heap = IndexedHeap<double, OrientedDoubleBefore>(OrientedDoubleBefore{is_max});
        a.rd_heap = IndexedHeap<RdKey, OrientedRdBefore>(OrientedRdBefore{!is_max});
        std::vector<std::pair<double, int>> dk, zk;
        std::vector<std::pair<RdKey, int>> rk;
        a.recip_sum = 0.0;
        a.sz = 0.0;
        for (size_t k = 0; k < n.children.size(); ++k) {
            const Stats& cs = stats_[static_cast<size_t>(n.children[k])];
            dk.emplace_back(cs.d_tilde, static_cast<int>(k));
            zk.emplace_back(cs.z_tilde, static_cast<int>(k));
            rk.emplace_back(cs.rd, static_cast<int>(k));
            if (in_harmonic_class(*n.label, cs.d_tilde))
                a.recip_sum += 1.0 / cs.d_tilde;
            else
                a.sz += cs.z_tilde;
        }
        a.d_heap.heapify(std::move(dk));
        a.z_heap.heapify(std::move(zk));
        a.rd_heap.heapify(std::move(rk));
        recompute_node(id);
    }
    std::vector<std::pair<long long, int>> ck;
    ck.reserve(static_cast<size_t>(tree_->num_leaves()));
    for (int i = 0; i < tree_->num_leaves(); ++i) ck.emplace_back(state_.counts[static_cast<size_t>(i)], i);
    count_heap_.heapify(std::move(ck));
    updates_since_rebuild_ = 0;
}

void IncrementalEngine::update(int leaf_index, double reward) {
    state_.record(leaf_index, reward);
    count_heap_.rewrite(state_.counts[static_cast<size_t>(leaf_index)], leaf_index);

    int child = tree_->leaf_node(leaf_index);
    Stats prev_child = stats_[static_cast<size_t>(child)];
    stats_[static_cast<size_t>(child)] = leaf_stats(leaf_index);

    int parent = tree_->node(child).parent;
    while (parent != -1) {
        const TreeNode& pn = tree_->node(parent);
        Aux& a = aux_[static_cast<size_t>(aux_index_[static_cast<size_t>(parent)])];
        const Stats& cur = stats_[static_cast<size_t>(child)];
        // Retire the child's previous contribution, then add the new one.
        if (in_harmonic_class(*pn.label, prev_child.d_tilde))
            a.recip_sum -= 1.0 / prev_child.d_tilde;
        else
            a.sz -= prev_child.z_tilde;
        if (in_harmonic_class(*pn.label, cur.d_tilde))
            a.recip_sum += 1.0 / cur.d_tilde;
        else
            a.sz += cur.z_tilde;
        const int pos = tree_->node(child).child_pos;
        a.d_heap.rewrite(cur.d_tilde, pos);
        a.z_heap.rewrite(cur.z_tilde, pos);
        a.rd_heap.rewrite(cur.rd, pos);

        prev_child = stats_[static_cast<size_t>(parent)];
        recompute_node(parent);
        child = parent;
        parent = pn.parent;
    }

    if (++updates_since_rebuild_ >= refresh_interval_) rebuild();
}

int IncrementalEngine::select(long long t) const {
    const auto& cpeek = count_heap_.peek();
    const double bar = std::sqrt(static_cast<double>(t)) - static_cast<double>(tree_->num_leaves()) / 2.0;
    if (static_cast<double>(cpeek.first) < bar) return cpeek.second;
    return stats_[static_cast<size_t>(tree_->root())].rd.leaf;
}

void IncrementalEngine::check(double tol) const {
    IncrementalEngine fresh(*tree_, state_, theta_, model_, refresh_interval_);
    for (int id = 0; id < tree_->num_nodes(); ++id) {
        const Stats& got = stats_[static_cast<size_t>(id)];
        const Stats& want = fresh.stats_[static_cast<size_t>(id)];
        const double dscale = std::max(1.0, std::abs(want.d_tilde));
        const double zscale = std::max(1.0, std::abs(want.z_tilde));
        if (std::abs(got.d_tilde - want.d_tilde) > tol * dscale) throw Error("engine drift on d~");
        if (std::abs(got.z_tilde - want.z_tilde) > tol * zscale) throw Error("engine drift on Z~");
        if (!tree_->is_leaf(id)) {
            const Aux& a = aux_[static_cast<size_t>(aux_index_[static_cast<size_t>(id)])];
            a.d_heap.check();
            a.z_heap.check();
            a.rd_heap.check();
        }
    }
    count_heap_.check();
}

}  // namespace tmcts
