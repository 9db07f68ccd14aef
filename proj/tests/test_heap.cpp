#include <doctest.h>

#include <vector>

#include "tmcts/engine.hpp"
#include "tmcts/indexed_heap.hpp"
#include "tmcts/rng.hpp"

using namespace tmcts;

TEST_CASE("heapify and peek, min orientation") {
    IndexedHeap<double, OrientedDoubleBefore> h(OrientedDoubleBefore{false});
    h.heapify({{3.0, 0}, {1.0, 1}, {2.0, 2}});
    CHECK(h.peek().first == 1.0);
    CHECK(h.peek().second == 1);
}

TEST_CASE("rewrite moves the extreme") {
    IndexedHeap<double, OrientedDoubleBefore> h(OrientedDoubleBefore{false});
    h.heapify({{3.0, 0}, {1.0, 1}, {2.0, 2}});
    h.rewrite(0.0, 0);
    CHECK(h.peek().first == 0.0);
    CHECK(h.peek().second == 0);
    h.check();
}

TEST_CASE("rewrite on an absent index throws") {
    IndexedHeap<double, OrientedDoubleBefore> h(OrientedDoubleBefore{false});
    h.heapify({{3.0, 0}, {1.0, 1}});
    CHECK_THROWS_AS(h.rewrite(1.0, 5), Error);
    CHECK_THROWS_AS(h.heapify({{1.0, 0}, {2.0, 0}}), Error);
}

TEST_CASE("ties resolve to the lowest index in both orientations") {
    IndexedHeap<double, OrientedDoubleBefore> mn(OrientedDoubleBefore{false});
    mn.heapify({{1.0, 2}, {1.0, 0}, {1.0, 1}});
    CHECK(mn.peek().second == 0);
    IndexedHeap<double, OrientedDoubleBefore> mx(OrientedDoubleBefore{true});
    mx.heapify({{1.0, 2}, {1.0, 0}, {1.0, 1}});
    CHECK(mx.peek().second == 0);
}

TEST_CASE("randomized rewrites agree with a linear scan") {
    Rng rng(99);
    const int n = 64;
    std::vector<double> keys(n);
    for (int i = 0; i < n; ++i) keys[static_cast<size_t>(i)] = rng.uniform();

    IndexedHeap<double, OrientedDoubleBefore> mn(OrientedDoubleBefore{false});
    IndexedHeap<double, OrientedDoubleBefore> mx(OrientedDoubleBefore{true});
    std::vector<std::pair<double, int>> items;
    for (int i = 0; i < n; ++i) items.emplace_back(keys[static_cast<size_t>(i)], i);
    mn.heapify(items);
    mx.heapify(items);

    for (int step = 0; step < 100000; ++step) {
        const int idx = static_cast<int>(rng.uniform() * n);
        const double key = rng.uniform() < 0.1 ? keys[static_cast<size_t>(static_cast<int>(rng.uniform() * n))]
                                               : rng.uniform() * 2.0 - 0.5;
        keys[static_cast<size_t>(idx)] = key;
        mn.rewrite(key, idx);
        mx.rewrite(key, idx);

        int lo = 0, hi = 0;
        for (int i = 1; i < n; ++i) {
            if (keys[static_cast<size_t>(i)] < keys[static_cast<size_t>(lo)]) lo = i;
            if (keys[static_cast<size_t>(i)] > keys[static_cast<size_t>(hi)]) hi = i;
        }
        CHECK(mn.peek().first == keys[static_cast<size_t>(lo)]);
        CHECK(mx.peek().first == keys[static_cast<size_t>(hi)]);
        if ((step & 1023) == 0) {
            mn.check();
            mx.check();
        }
    }
}

TEST_CASE("rd-key heaps break ties by leaf id") {
    IndexedHeap<RdKey, OrientedRdBefore> mn(OrientedRdBefore{false});
    mn.heapify({{RdKey{2.0, 9}, 0}, {RdKey{2.0, 3}, 1}, {RdKey{5.0, 1}, 2}});
    CHECK(mn.peek().first.leaf == 3);
    IndexedHeap<RdKey, OrientedRdBefore> mx(OrientedRdBefore{true});
    const double inf = std::numeric_limits<double>::infinity();
    mx.heapify({{RdKey{inf, 7}, 0}, {RdKey{inf, 2}, 1}, {RdKey{1.0, 0}, 2}});
    CHECK(mx.peek().first.leaf == 2);
}
