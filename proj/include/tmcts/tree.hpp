#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmcts/errors.hpp"

namespace tmcts {

enum class NodeLabel { Max, Min };
enum class Answer { Win, Lose };

inline const char* to_string(Answer a) { return a == Answer::Win ? "win" : "lose"; }
inline const char* to_string(NodeLabel l) { return l == NodeLabel::Max ? "MAX" : "MIN"; }

struct TreeNode {
    int id = -1;
    int parent = -1;                 // -1 at the root
    std::optional<NodeLabel> label;  // internal nodes only; leaves carry none
    std::vector<int> children;       // document order
    int leaf_index = -1;             // dense 0..num_leaves-1 for leaves, -1 otherwise
    std::string name;                // leaf name; empty for internal nodes
    int leaf_begin = 0;              // leaf_index range covered by the subtree
    int leaf_count = 0;
    int child_pos = 0;               // position within parent's child list
};

// Immutable rooted minimax tree. Node ids are dense integers in document
// (pre-)order; leaf_index follows depth-first document order, so every
// subtree's leaves form a contiguous leaf_index range.
class GameTree {
public:
    // Builds from explicit node records; runs full structural validation.
    static GameTree from_nodes(std::vector<TreeNode> nodes, int root);

    // Tree document (UTF-8 JSON): {"root": {"label":"MAX","children":[...]}},
    // leaves written as {"leaf":"name"}.
    static GameTree parse(const std::string& text);
    std::string serialize() const;

    // Complete arity-ary tree of the given depth with labels alternating from
    // the root's label. Leaves are named L0, L1, ... in document order.
    static GameTree complete(int depth, int arity, NodeLabel root_label = NodeLabel::Max);

    // Re-checks every structural invariant; throws MalformedTree.
    void validate() const;

    int root() const { return root_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_leaves() const { return static_cast<int>(leaf_ids_.size()); }
    int depth() const { return depth_; }
    const TreeNode& node(int id) const;
    bool is_leaf(int id) const { return node(id).children.empty(); }

    // Node ids ordered by leaf_index.
    const std::vector<int>& leaves() const { return leaf_ids_; }
    // Children-before-parents order for bottom-up sweeps.
    const std::vector<int>& postorder() const { return postorder_; }
    int leaf_node(int leaf_index) const;

private:
    GameTree() = default;
    void finalize();  // leaf_index, postorder, subtree ranges, depth

    std::vector<TreeNode> nodes_;
    std::vector<int> leaf_ids_;
    std::vector<int> postorder_;
    int root_ = 0;
    int depth_ = 0;
};

// Minimax value of node s under the given leaf means (indexed by leaf_index).
double node_value(const GameTree& tree, int s, std::span<const double> means);
// Values for all nodes, indexed by node id.
std::vector<double> all_values(const GameTree& tree, std::span<const double> means);
// Win iff node_value(s) >= theta.
Answer node_answer(const GameTree& tree, int s, std::span<const double> means, double theta);
// Children of s whose value is >= theta; s must be internal.
std::vector<int> good_children(const GameTree& tree, int s, std::span<const double> means, double theta);

// Means / counts documents: JSON object keyed by leaf name.
std::vector<double> parse_means(const GameTree& tree, const std::string& text);
std::string serialize_means(const GameTree& tree, std::span<const double> means);
std::vector<long long> parse_counts(const GameTree& tree, const std::string& text);

}  // namespace tmcts
