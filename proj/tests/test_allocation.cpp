#include <doctest.h>

#include <cmath>

#include "support/test_util.hpp"
#include "tmcts/allocation.hpp"

using namespace tmcts;

namespace {

GameTree single_leaf() {
    std::vector<TreeNode> nodes(1);
    nodes[0].id = 0;
    nodes[0].name = "only";
    return GameTree::from_nodes(std::move(nodes), 0);
}

}  // namespace

TEST_CASE("single winning leaf") {
    const GameTree t = single_leaf();
    const RewardModel bern = RewardModel::bernoulli();
    const std::vector<double> means{0.8};
    const Allocation a = optimal_allocation(t, means, 0.5, bern);
    CHECK(a.answer == Answer::Win);
    CHECK(a.d_root == doctest::Approx(bern.kl(0.8, 0.5)).epsilon(1e-12));
    CHECK(a.w == std::vector<double>{1.0});
}

TEST_CASE("min root over two winning leaves: harmonic value, reciprocal weights") {
    GameTree t = GameTree::parse(R"({"root":{"label":"MIN","children":[{"leaf":"a"},{"leaf":"b"}]}})");
    const RewardModel bern = RewardModel::bernoulli();
    const std::vector<double> means{0.7, 0.9};
    const double d1 = bern.kl(0.7, 0.5), d2 = bern.kl(0.9, 0.5);
    const Allocation a = optimal_allocation(t, means, 0.5, bern);
    CHECK(a.answer == Answer::Win);
    CHECK(a.d_root == doctest::Approx(1.0 / (1.0 / d1 + 1.0 / d2)).epsilon(1e-12));
    CHECK(a.w[0] == doctest::Approx((1.0 / d1) / (1.0 / d1 + 1.0 / d2)).epsilon(1e-12));
    CHECK(a.w[1] == doctest::Approx((1.0 / d2) / (1.0 / d1 + 1.0 / d2)).epsilon(1e-12));
    // Frozen from an independent evaluation of the same formulas.
    CHECK(a.d_root == doctest::Approx(0.06724898062837067).epsilon(1e-12));
    CHECK(a.w[0] == doctest::Approx(0.8172900833098814).epsilon(1e-12));
}

TEST_CASE("root at the threshold violates the standing assumption") {
    const GameTree t = single_leaf();
    const RewardModel bern = RewardModel::bernoulli();
    const std::vector<double> means{0.5};
    CHECK_THROWS_AS(optimal_allocation(t, means, 0.5, bern), AssumptionViolated);
    // The non-enforcing path stays total and spreads uniformly.
    const Allocation a = optimal_allocation(t, means, 0.5, bern, AssumptionCheck::Skip);
    CHECK(a.d_root == 0.0);
    CHECK(a.w == std::vector<double>{1.0});
}

TEST_CASE("alt_infimum equals d_root at the optimal weights and never exceeds it") {
    Rng rng(2024);
    int win_seen = 0, lose_seen = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const RewardModel model =
            rep % 2 == 0 ? RewardModel::bernoulli() : RewardModel::gaussian(0.5 + rng.uniform());
        const double theta = model.family() == Family::Bernoulli ? 0.35 + 0.3 * rng.uniform() : rng.normal();
        GameTree t = test::random_tree(rng, 3, 3);
        auto means = test::random_means(rng, model, t.num_leaves(), theta);
        const Allocation a = optimal_allocation(t, means, theta, model, AssumptionCheck::Skip);
        if (a.d_root <= 0.0) continue;
        (a.answer == Answer::Win ? win_seen : lose_seen) += 1;

        const double at_opt = alt_infimum(t, means, theta, model, a.w);
        CHECK(std::abs(at_opt - a.d_root) <= 1e-9 * std::max(1.0, a.d_root));
        for (int k = 0; k < 20; ++k) {
            const auto w = test::random_simplex(rng, t.num_leaves());
            CHECK(alt_infimum(t, means, theta, model, w) <= a.d_root + 1e-9);
        }
    }
    CHECK(win_seen > 20);
    CHECK(lose_seen > 20);
}

TEST_CASE("alt_infimum matches subset enumeration on small trees") {
    Rng rng(31337);
    int checked = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const RewardModel model =
            rep % 2 == 0 ? RewardModel::bernoulli() : RewardModel::gaussian(1.0);
        const double theta = model.family() == Family::Bernoulli ? 0.5 : 0.0;
        GameTree t = test::random_tree(rng, 3, 2);
        if (t.num_leaves() > 10) continue;
        auto means = test::random_means(rng, model, t.num_leaves(), theta);
        const auto w = test::random_simplex(rng, t.num_leaves());
        const double fast = alt_infimum(t, means, theta, model, w);
        const double slow = test::enumeration_alt_infimum(t, means, theta, model, w);
        CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("weights with support disjoint from every certificate cost nothing") {
    // MAX root: winning left child, losing right child. Putting all weight on
    // the right leaf leaves the left certificate free to flip.
    GameTree t = GameTree::parse(R"({"root":{"label":"MAX","children":[{"leaf":"a"},{"leaf":"b"}]}})");
    const RewardModel bern = RewardModel::bernoulli();
    const std::vector<double> means{0.8, 0.3};
    const std::vector<double> w{0.0, 1.0};
    CHECK(alt_infimum(t, means, 0.5, bern, w) == 0.0);
}

TEST_CASE("positive-weight leaves satisfy the sign condition and the value identity") {
    Rng rng(555);
    for (int rep = 0; rep < 300; ++rep) {
        const RewardModel model =
            rep % 2 == 0 ? RewardModel::bernoulli() : RewardModel::gaussian(1.0);
        const double theta = model.family() == Family::Bernoulli ? 0.3 + 0.4 * rng.uniform() : 0.5 * rng.normal();
        GameTree t = test::random_tree(rng, 3, 3);
        auto means = test::random_means(rng, model, t.num_leaves(), theta);
        const Allocation a = optimal_allocation(t, means, theta, model, AssumptionCheck::Skip);
        if (a.d_root <= 0.0) continue;

        double total = 0.0;
        for (int leaf = 0; leaf < t.num_leaves(); ++leaf) {
            const double wl = a.w[static_cast<size_t>(leaf)];
            total += wl;
            CHECK(wl >= 0.0);
            if (wl <= 0.0) continue;
            const double mu = means[static_cast<size_t>(leaf)];
            if (a.answer == Answer::Win)
                CHECK(mu > theta);
            else
                CHECK(mu < theta);
            const double expected = a.d_root / model.kl(mu, theta);
            CHECK(std::abs(wl - expected) <= 1e-9 * std::max(1.0, expected));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("restriction: the argmax child carries the whole sub-allocation") {
    Rng rng(808);
    int exercised = 0;
    for (int rep = 0; rep < 200 && exercised < 60; ++rep) {
        const RewardModel model = RewardModel::gaussian(1.0);
        const double theta = 0.0;
        GameTree t = test::random_tree(rng, 3, 3);
        const TreeNode& root = t.node(t.root());
        if (root.children.empty() || root.label != NodeLabel::Max) continue;
        auto means = test::random_means(rng, model, t.num_leaves(), theta);
        const Allocation a = optimal_allocation(t, means, theta, model, AssumptionCheck::Skip);
        if (a.answer != Answer::Win || a.d_root <= 0.0) continue;

        int star = root.children.front();
        for (int c : root.children)
            if (a.d[static_cast<size_t>(c)] > a.d[static_cast<size_t>(star)]) star = c;
        const Allocation sub = subtree_allocation(t, star, means, theta, model);
        const TreeNode& sn = t.node(star);
        for (int k = 0; k < sn.leaf_count; ++k) {
            const size_t leaf = static_cast<size_t>(sn.leaf_begin + k);
            CHECK(a.w[leaf] == doctest::Approx(sub.w[leaf]).epsilon(1e-9));
        }
        CHECK(sub.d_root == doctest::Approx(a.d_root).epsilon(1e-9));
        ++exercised;
    }
    CHECK(exercised >= 30);
}

TEST_CASE("scaling every leaf divergence scales d_root and keeps w fixed") {
    Rng rng(909);
    for (int rep = 0; rep < 50; ++rep) {
        GameTree t = test::random_tree(rng, 3, 3);
        const double theta = 0.0;
        auto means = test::random_means(rng, RewardModel::gaussian(1.0), t.num_leaves(), theta);
        const Allocation base = optimal_allocation(t, means, theta, RewardModel::gaussian(1.0),
                                                   AssumptionCheck::Skip);
        if (base.d_root <= 0.0) continue;
        // Doubling the variance halves every KL, so d_root halves.
        const Allocation scaled = optimal_allocation(t, means, theta, RewardModel::gaussian(2.0),
                                                     AssumptionCheck::Skip);
        CHECK(scaled.d_root == doctest::Approx(base.d_root / 2.0).epsilon(1e-9));
        for (int leaf = 0; leaf < t.num_leaves(); ++leaf)
            CHECK(scaled.w[static_cast<size_t>(leaf)] ==
                  doctest::Approx(base.w[static_cast<size_t>(leaf)]).epsilon(1e-9));
    }
}

TEST_CASE("lower bound on the stopping time") {
    CHECK(lower_bound_time(1.0, std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lower_bound_time(2.0, std::exp(-10.0)) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(lower_bound_time(0.0, 0.1), AssumptionViolated);
    CHECK_THROWS_AS(lower_bound_time(1.0, 0.0), DomainError);
    // Published consistency relation: at delta = 1e-10 a bound of 4996.8
    // corresponds to d_root = ln(1e10)/4996.8.
    const double d = std::log(1e10) / 4996.8;
    CHECK(lower_bound_time(d, 1e-10) == doctest::Approx(4996.8).epsilon(1e-12));
}
