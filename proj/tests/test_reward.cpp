#include <doctest.h>

#include <cmath>

#include "support/test_util.hpp"
#include "tmcts/reward_model.hpp"

using namespace tmcts;

TEST_CASE("kl identity and frozen values") {
    const RewardModel bern = RewardModel::bernoulli();
    CHECK(bern.kl(0.5, 0.5) == 0.0);
    // 0.2*ln(0.25) + 0.8*ln(4), evaluated independently.
    CHECK(bern.kl(0.2, 0.8) == doctest::Approx(0.8317766166719344).epsilon(1e-12));

    const RewardModel gauss = RewardModel::gaussian(1.0);
    CHECK(gauss.kl(0.0, 1.0) == doctest::Approx(0.5));
    CHECK(gauss.kl(3.0, 3.0) == 0.0);
}

TEST_CASE("kl boundary behavior") {
    const RewardModel bern = RewardModel::bernoulli();
    // Boundary first arguments are finite against interior second arguments.
    CHECK(bern.kl(0.0, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK(bern.kl(1.0, 0.5) == doctest::Approx(std::log(2.0)));
    // Boundary second argument with a different first argument would be infinite.
    CHECK_THROWS_AS(bern.kl(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(bern.kl(0.5, 1.0), DomainError);
    CHECK(bern.kl(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(bern.kl(-0.1, 0.5), DomainError);
}

TEST_CASE("kl is nonnegative and zero only at equality") {
    Rng rng(101);
    const RewardModel bern = RewardModel::bernoulli();
    const RewardModel gauss = RewardModel::gaussian(2.5);
    for (int i = 0; i < 2000; ++i) {
        const double x = 0.01 + 0.98 * rng.uniform();
        const double y = 0.01 + 0.98 * rng.uniform();
        const double v = bern.kl(x, y);
        CHECK(v >= 0.0);
        if (x != y) CHECK(v > 0.0);
        const double gx = 4.0 * rng.normal();
        const double gy = 4.0 * rng.normal();
        const double gv = gauss.kl(gx, gy);
        CHECK(gv >= 0.0);
        if (gx != gy) CHECK(gv > 0.0);
    }
}

TEST_CASE("kl(x,.) is convex with its minimum at x") {
    const RewardModel bern = RewardModel::bernoulli();
    const double x = 0.37;
    const double lo = 0.02, hi = 0.98;
    const int grid = 97;
    double prev = 0.0;
    // Discrete convexity: second differences nonnegative on a uniform grid.
    std::vector<double> vals;
    for (int i = 0; i <= grid; ++i) vals.push_back(bern.kl(x, lo + (hi - lo) * i / grid));
    for (size_t i = 1; i + 1 < vals.size(); ++i) CHECK(vals[i + 1] - 2 * vals[i] + vals[i - 1] >= -1e-12);
    // Minimum at y = x.
    for (double v : vals) CHECK(v >= -1e-15);
    CHECK(bern.kl(x, x) == 0.0);
    (void)prev;
}

TEST_CASE("degenerate bernoulli sampling") {
    const RewardModel bern = RewardModel::bernoulli();
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(bern.sample(1.0, rng) == 1.0);
        CHECK(bern.sample(0.0, rng) == 0.0);
    }
    CHECK_THROWS_AS(bern.sample(1.5, rng), DomainError);
}

TEST_CASE("gaussian sample average matches the mean") {
    const RewardModel gauss = RewardModel::gaussian(1.0);
    Rng rng(12345);
    const double mu = 0.25;
    const int n = 1'000'000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += gauss.sample(mu, rng);
    const double avg = total / n;
    CHECK(std::abs(avg - mu) <= 5.0 / 1000.0);  // 5*sigma/sqrt(n)
}

TEST_CASE("sampling is deterministic given the stream") {
    const RewardModel gauss = RewardModel::gaussian(1.0);
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(gauss.sample(0.3, a) == gauss.sample(0.3, b));
    Rng c = Rng::stream(9, 1, 2), d = Rng::stream(9, 1, 2), e = Rng::stream(9, 1, 3);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 50; ++i) {
        const uint64_t cv = c.next_u64();
        all_equal = all_equal && (cv == d.next_u64());
        any_diff = any_diff || (cv != e.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("empirical means concentrate") {
    // |mean_n - mu| <= 6*sqrt(Var/n) must hold in at least 99.9% of trials.
    Rng seed_rng(777);
    const RewardModel bern = RewardModel::bernoulli();
    int failures = 0;
    const int trials = 3000;
    const int n = 400;
    const double mu = 0.3;
    const double bound = 6.0 * std::sqrt(mu * (1 - mu) / n);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(777, static_cast<uint64_t>(trial));
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += bern.sample(mu, rng);
        if (std::abs(total / n - mu) > bound) ++failures;
    }
    CHECK(static_cast<double>(failures) / trials <= 0.001);
}

TEST_CASE("interior threshold validation") {
    const RewardModel bern = RewardModel::bernoulli();
    CHECK_THROWS_AS(bern.require_interior(0.0), DomainError);
    CHECK_THROWS_AS(bern.require_interior(1.0), DomainError);
    bern.require_interior(0.5);
    CHECK_THROWS_AS(RewardModel::gaussian(0.0), DomainError);
    CHECK_THROWS_AS(RewardModel::gaussian(-1.0), DomainError);
}
