#include "tmcts/tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace tmcts {

using nlohmann::json;

const TreeNode& GameTree::node(int id) const {
    if (id < 0 || id >= num_nodes()) throw Error("unknown node id " + std::to_string(id));
    return nodes_[static_cast<size_t>(id)];
}

int GameTree::leaf_node(int leaf_index) const {
    if (leaf_index < 0 || leaf_index >= num_leaves())
        throw Error("unknown leaf index " + std::to_string(leaf_index));
    return leaf_ids_[static_cast<size_t>(leaf_index)];
}

GameTree GameTree::from_nodes(std::vector<TreeNode> nodes, int root) {
    GameTree t;
    t.nodes_ = std::move(nodes);
    t.root_ = root;
    t.finalize();
    return t;
}

void GameTree::finalize() {
    validate();
    leaf_ids_.clear();
    postorder_.clear();
    depth_ = 0;

    // Iterative DFS in document order; assigns leaf_index and subtree ranges.
    struct Frame { int id; size_t next_child; int depth; };
    std::vector<Frame> stack;
    stack.push_back({root_, 0, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        TreeNode& n = nodes_[static_cast<size_t>(f.id)];
        if (f.next_child == 0) {
            depth_ = std::max(depth_, f.depth);
            n.leaf_begin = static_cast<int>(leaf_ids_.size());
            if (n.children.empty()) {
                n.leaf_index = static_cast<int>(leaf_ids_.size());
                leaf_ids_.push_back(f.id);
            }
        }
        if (f.next_child < n.children.size()) {
            int c = n.children[f.next_child];
            nodes_[static_cast<size_t>(c)].child_pos = static_cast<int>(f.next_child);
            ++f.next_child;
            stack.push_back({c, 0, f.depth + 1});
        } else {
            n.leaf_count = static_cast<int>(leaf_ids_.size()) - n.leaf_begin;
            postorder_.push_back(f.id);
            stack.pop_back();
        }
    }
}

void GameTree::validate() const {
    const int n = num_nodes();
    if (n == 0) throw MalformedTree("no nodes");
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const TreeNode& nd = nodes_[static_cast<size_t>(i)];
        if (nd.id != i) throw MalformedTree("node ids are not dense document-order integers");
        if (nd.parent == -1) ++roots;
        const bool leaf = nd.children.empty();
        if (leaf && nd.label) throw MalformedTree("leaf node " + std::to_string(i) + " carries a label");
        if (!leaf && !nd.label) throw MalformedTree("internal node " + std::to_string(i) + " has no label");
        for (int c : nd.children) {
            if (c < 0 || c >= n) throw MalformedTree("child id out of range");
            if (nodes_[static_cast<size_t>(c)].parent != i)
                throw MalformedTree("child " + std::to_string(c) + " does not point back to its parent");
        }
    }
    if (roots != 1) throw MalformedTree(std::to_string(roots) + " roots");
    if (root_ < 0 || root_ >= n || nodes_[static_cast<size_t>(root_)].parent != -1)
        throw MalformedTree("root pointer does not name the parentless node");

    // Reachability from the root; also rejects duplicate child listings.
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{root_};
    int reached = 0;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        if (seen[static_cast<size_t>(id)]) throw MalformedTree("node " + std::to_string(id) + " reached twice");
        seen[static_cast<size_t>(id)] = 1;
        ++reached;
        const TreeNode& nd = nodes_[static_cast<size_t>(id)];
        for (int c : nd.children) stack.push_back(c);
    }
    if (reached != n) throw MalformedTree("orphan nodes not reachable from the root");
}

namespace {

void parse_node(const json& j, std::vector<TreeNode>& nodes, int parent) {
    if (!j.is_object()) throw ParseError("tree node must be a JSON object");
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes.back().id = id;
    nodes.back().parent = parent;
    if (parent >= 0) nodes[static_cast<size_t>(parent)].children.push_back(id);

    if (j.contains("leaf")) {
        if (!j.at("leaf").is_string()) throw ParseError("leaf name must be a string");
        nodes[static_cast<size_t>(id)].name = j.at("leaf").get<std::string>();
        return;
    }
    if (j.contains("label")) {
        const std::string lab = j.at("label").get<std::string>();
        if (lab == "MAX")
            nodes[static_cast<size_t>(id)].label = NodeLabel::Max;
        else if (lab == "MIN")
            nodes[static_cast<size_t>(id)].label = NodeLabel::Min;
        else
            throw ParseError("unknown label \"" + lab + "\" (expected MAX or MIN)");
    }
    if (j.contains("children")) {
        const json& kids = j.at("children");
        if (!kids.is_array()) throw ParseError("children must be an array");
        for (const json& k : kids) parse_node(k, nodes, id);
    }
}

json node_to_json(const GameTree& t, int id) {
    const TreeNode& n = t.node(id);
    json j;
    if (n.children.empty()) {
        j["leaf"] = n.name;
    } else {
        j["label"] = to_string(*n.label);
        json kids = json::array();
        for (int c : n.children) kids.push_back(node_to_json(t, c));
        j["children"] = std::move(kids);
    }
    return j;
}

}  // namespace

GameTree GameTree::parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object() || !doc.contains("root")) throw ParseError("document has no \"root\" object");
    std::vector<TreeNode> nodes;
    try {
        parse_node(doc.at("root"), nodes, -1);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    return from_nodes(std::move(nodes), 0);
}

std::string GameTree::serialize() const {
    json doc;
    doc["root"] = node_to_json(*this, root_);
    return doc.dump();
}

GameTree GameTree::complete(int depth, int arity, NodeLabel root_label) {
    if (depth < 0 || arity < 1) throw Error("complete tree needs depth >= 0 and arity >= 1");
    std::vector<TreeNode> nodes;
    int leaf_counter = 0;
    std::function<void(int, int)> build = [&](int parent, int level) {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.back().id = id;
        nodes.back().parent = parent;
        if (parent >= 0) nodes[static_cast<size_t>(parent)].children.push_back(id);
        if (level == depth) {
            nodes[static_cast<size_t>(id)].name = "L" + std::to_string(leaf_counter++);
            return;
        }
        const bool even = (level % 2) == 0;
        NodeLabel lab = root_label;
        if (!even) lab = (root_label == NodeLabel::Max) ? NodeLabel::Min : NodeLabel::Max;
        nodes[static_cast<size_t>(id)].label = lab;
        for (int k = 0; k < arity; ++k) build(id, level + 1);
    };
    build(-1, 0);
    return from_nodes(std::move(nodes), 0);
}

double node_value(const GameTree& tree, int s, std::span<const double> means) {
    const TreeNode& n = tree.node(s);
    if (n.children.empty()) return means[static_cast<size_t>(n.leaf_index)];
    double best = 0;
    bool first = true;
    for (int c : n.children) {
        const double v = node_value(tree, c, means);
        if (first) {
            best = v;
            first = false;
        } else if (*n.label == NodeLabel::Max) {
            best = std::max(best, v);
        } else {
            best = std::min(best, v);
        }
    }
    return best;
}

std::vector<double> all_values(const GameTree& tree, std::span<const double> means) {
    std::vector<double> v(static_cast<size_t>(tree.num_nodes()), 0.0);
    for (int id : tree.postorder()) {
        const TreeNode& n = tree.node(id);
        if (n.children.empty()) {
            v[static_cast<size_t>(id)] = means[static_cast<size_t>(n.leaf_index)];
            continue;
        }
        double best = v[static_cast<size_t>(n.children.front())];
        for (size_t k = 1; k < n.children.size(); ++k) {
            const double x = v[static_cast<size_t>(n.children[k])];
            best = (*n.label == NodeLabel::Max) ? std::max(best, x) : std::min(best, x);
        }
        v[static_cast<size_t>(id)] = best;
    }
    return v;
}

Answer node_answer(const GameTree& tree, int s, std::span<const double> means, double theta) {
    return node_value(tree, s, means) >= theta ? Answer::Win : Answer::Lose;
}

std::vector<int> good_children(const GameTree& tree, int s, std::span<const double> means, double theta) {
    const TreeNode& n = tree.node(s);
    if (n.children.empty()) throw Error("good_children called on leaf " + std::to_string(s));
    std::vector<int> out;
    for (int c : n.children)
        if (node_value(tree, c, means) >= theta) out.push_back(c);
    return out;
}

std::vector<double> parse_means(const GameTree& tree, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("means document must be a JSON object");
    std::vector<double> means(static_cast<size_t>(tree.num_leaves()), 0.0);
    std::vector<char> found(static_cast<size_t>(tree.num_leaves()), 0);
    for (int id : tree.leaves()) {
        const TreeNode& n = tree.node(id);
        if (!doc.contains(n.name)) throw ParseError("means document is missing leaf \"" + n.name + "\"");
        means[static_cast<size_t>(n.leaf_index)] = doc.at(n.name).get<double>();
        found[static_cast<size_t>(n.leaf_index)] = 1;
    }
    return means;
}

std::string serialize_means(const GameTree& tree, std::span<const double> means) {
    json doc = json::object();
    for (int id : tree.leaves()) {
        const TreeNode& n = tree.node(id);
        doc[n.name] = means[static_cast<size_t>(n.leaf_index)];
    }
    return doc.dump();
}

std::vector<long long> parse_counts(const GameTree& tree, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("counts document must be a JSON object");
    std::vector<long long> counts(static_cast<size_t>(tree.num_leaves()), 0);
    for (int id : tree.leaves()) {
        const TreeNode& n = tree.node(id);
        if (!doc.contains(n.name)) throw ParseError("counts document is missing leaf \"" + n.name + "\"");
        counts[static_cast<size_t>(n.leaf_index)] = doc.at(n.name).get<long long>();
    }
    return counts;
}

}  // namespace tmcts
