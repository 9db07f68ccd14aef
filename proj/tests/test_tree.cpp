#include <doctest.h>

#include "support/test_util.hpp"
#include "tmcts/tree.hpp"

using namespace tmcts;

namespace {

const char* kSampleDoc =
    R"({"root": {"label":"MAX","children":[{"label":"MIN","children":[{"leaf":"a"},{"leaf":"b"}]}, {"leaf":"c"}]}})";

GameTree depth2_tree() {
    // MAX over two MIN nodes with two leaves each.
    return GameTree::parse(
        R"({"root":{"label":"MAX","children":[
              {"label":"MIN","children":[{"leaf":"a"},{"leaf":"b"}]},
              {"label":"MIN","children":[{"leaf":"c"},{"leaf":"d"}]}]}})");
}

}  // namespace

TEST_CASE("single-leaf tree is legal") {
    std::vector<TreeNode> nodes(1);
    nodes[0].id = 0;
    nodes[0].name = "only";
    const GameTree t = GameTree::from_nodes(std::move(nodes), 0);
    CHECK(t.num_leaves() == 1);
    CHECK(t.depth() == 0);
    t.validate();
}

TEST_CASE("unlabeled internal node is rejected") {
    std::vector<TreeNode> nodes(2);
    nodes[0].id = 0;
    nodes[0].children = {1};
    nodes[1].id = 1;
    nodes[1].parent = 0;
    nodes[1].name = "x";
    CHECK_THROWS_AS(GameTree::from_nodes(std::move(nodes), 0), MalformedTree);
}

TEST_CASE("two roots are rejected") {
    std::vector<TreeNode> nodes(3);
    nodes[0].id = 0;
    nodes[0].label = NodeLabel::Max;
    nodes[0].children = {1};
    nodes[1].id = 1;
    nodes[1].parent = 0;
    nodes[1].name = "x";
    nodes[2].id = 2;  // second parentless node
    nodes[2].name = "stray";
    CHECK_THROWS_AS(GameTree::from_nodes(std::move(nodes), 0), MalformedTree);
}

TEST_CASE("duplicate child listing is rejected") {
    std::vector<TreeNode> nodes(2);
    nodes[0].id = 0;
    nodes[0].label = NodeLabel::Max;
    nodes[0].children = {1, 1};
    nodes[1].id = 1;
    nodes[1].parent = 0;
    nodes[1].name = "x";
    CHECK_THROWS_AS(GameTree::from_nodes(std::move(nodes), 0), MalformedTree);
}

TEST_CASE("leaf value and shallow minimax") {
    GameTree t = GameTree::parse(R"({"root":{"label":"MAX","children":[{"leaf":"a"},{"leaf":"b"}]}})");
    const std::vector<double> means{0.3, 0.7};
    CHECK(node_value(t, t.leaf_node(0), means) == doctest::Approx(0.3));
    CHECK(node_value(t, t.root(), means) == doctest::Approx(0.7));
}

TEST_CASE("two-level minimax value") {
    GameTree t = depth2_tree();
    const std::vector<double> means{0.2, 0.9, 0.6, 0.8};
    CHECK(node_value(t, t.root(), means) == doctest::Approx(0.6));
    CHECK(node_answer(t, t.root(), means, 0.5) == Answer::Win);
}

TEST_CASE("answer is inclusive at the threshold") {
    std::vector<TreeNode> nodes(1);
    nodes[0].id = 0;
    nodes[0].name = "only";
    const GameTree t = GameTree::from_nodes(std::move(nodes), 0);
    const std::vector<double> means{0.5};
    CHECK(node_answer(t, 0, means, 0.5) == Answer::Win);
}

TEST_CASE("max root below threshold loses") {
    GameTree t = GameTree::parse(R"({"root":{"label":"MAX","children":[{"leaf":"a"},{"leaf":"b"}]}})");
    const std::vector<double> means{0.3, 0.7};
    CHECK(node_answer(t, t.root(), means, 0.8) == Answer::Lose);
}

TEST_CASE("good children thresholds") {
    GameTree t = GameTree::parse(R"({"root":{"label":"MAX","children":[{"leaf":"a"},{"leaf":"b"}]}})");
    const std::vector<double> means{0.3, 0.7};
    CHECK(good_children(t, t.root(), means, 0.5) == std::vector<int>{2});
    CHECK(good_children(t, t.root(), means, 0.1) == std::vector<int>{1, 2});
    CHECK(good_children(t, t.root(), means, 0.9).empty());
    CHECK_THROWS(good_children(t, 1, means, 0.5));
}

TEST_CASE("sample document parses with document-order leaf index") {
    GameTree t = GameTree::parse(kSampleDoc);
    CHECK(t.num_leaves() == 3);
    CHECK(t.depth() == 2);
    CHECK(t.node(t.root()).label == NodeLabel::Max);
    CHECK(t.node(t.leaf_node(0)).name == "a");
    CHECK(t.node(t.leaf_node(1)).name == "b");
    CHECK(t.node(t.leaf_node(2)).name == "c");
}

TEST_CASE("empty document is a parse error") {
    CHECK_THROWS_AS(GameTree::parse(""), ParseError);
    CHECK_THROWS_AS(GameTree::parse("{}"), ParseError);
}

TEST_CASE("serialize-parse round trip preserves structure") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        GameTree t = test::random_tree(rng, 4, 3);
        GameTree back = GameTree::parse(t.serialize());
        REQUIRE(back.num_nodes() == t.num_nodes());
        REQUIRE(back.num_leaves() == t.num_leaves());
        for (int id = 0; id < t.num_nodes(); ++id) {
            CHECK(back.node(id).parent == t.node(id).parent);
            CHECK(back.node(id).children == t.node(id).children);
            CHECK(back.node(id).label == t.node(id).label);
            CHECK(back.node(id).name == t.node(id).name);
            CHECK(back.node(id).leaf_index == t.node(id).leaf_index);
        }
        CHECK(GameTree::parse(back.serialize()).serialize() == back.serialize());
    }
}

TEST_CASE("means document round trip") {
    GameTree t = depth2_tree();
    const std::vector<double> means{0.25, 0.5, 0.75, 0.125};
    const auto parsed = parse_means(t, serialize_means(t, means));
    CHECK(parsed == means);
    CHECK_THROWS_AS(parse_means(t, R"({"a":0.1})"), ParseError);
}

TEST_CASE("value and answer are pure and local to descendants") {
    Rng rng(11);
    const RewardModel model = RewardModel::bernoulli();
    for (int rep = 0; rep < 30; ++rep) {
        GameTree t = test::random_tree(rng, 3, 3);
        auto means = test::random_means(rng, model, t.num_leaves(), 0.5);
        const double theta = 0.5;
        // Purity: recomputation matches.
        const double v1 = node_value(t, t.root(), means);
        const double v2 = node_value(t, t.root(), means);
        CHECK(v1 == v2);
        // Locality: perturbing a leaf outside the subtree never changes the answer.
        for (int id = 0; id < t.num_nodes(); ++id) {
            const TreeNode& n = t.node(id);
            const Answer before = node_answer(t, id, means, theta);
            for (int leaf = 0; leaf < t.num_leaves(); ++leaf) {
                const bool inside = leaf >= n.leaf_begin && leaf < n.leaf_begin + n.leaf_count;
                if (inside) continue;
                auto perturbed = means;
                perturbed[static_cast<size_t>(leaf)] = rng.uniform();
                CHECK(node_answer(t, id, perturbed, theta) == before);
            }
        }
    }
}

TEST_CASE("root value is monotone in every leaf mean") {
    Rng rng(13);
    const RewardModel model = RewardModel::bernoulli();
    for (int rep = 0; rep < 50; ++rep) {
        GameTree t = test::random_tree(rng, 3, 3);
        auto means = test::random_means(rng, model, t.num_leaves(), 0.5);
        const double base = node_value(t, t.root(), means);
        const int leaf = static_cast<int>(rng.uniform() * t.num_leaves());
        auto bumped = means;
        bumped[static_cast<size_t>(leaf)] += 0.05;
        CHECK(node_value(t, t.root(), bumped) >= base - 1e-15);
    }
}

TEST_CASE("all_values agrees with per-node evaluation") {
    Rng rng(17);
    GameTree t = test::random_tree(rng, 4, 3);
    auto means = test::random_means(rng, RewardModel::bernoulli(), t.num_leaves(), 0.5);
    const auto values = all_values(t, means);
    for (int id = 0; id < t.num_nodes(); ++id)
        CHECK(values[static_cast<size_t>(id)] == doctest::Approx(node_value(t, id, means)));
}
