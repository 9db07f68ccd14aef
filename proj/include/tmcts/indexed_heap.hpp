#pragma once

#include <utility>
#include <vector>

#include "tmcts/errors.hpp"

namespace tmcts {

// Binary heap over (key, index) pairs with a position map, so any entry can
// be re-keyed in O(log n) while peek stays O(1). Indices must be dense
// 0..n-1. `Before(a_key, a_idx, b_key, b_idx)` returns true when a belongs
// nearer the top; taking the index lets key ties resolve deterministically.
template <typename Key, typename Before>
class IndexedHeap {
public:
    IndexedHeap() = default;
    explicit IndexedHeap(Before before) : before_(before) {}

    void heapify(std::vector<std::pair<Key, int>> items) {
        entries_ = std::move(items);
        pos_.assign(entries_.size(), -1);
        for (size_t slot = 0; slot < entries_.size(); ++slot) {
            const int idx = entries_[slot].second;
            if (idx < 0 || static_cast<size_t>(idx) >= entries_.size() || pos_[static_cast<size_t>(idx)] != -1)
                throw Error("heapify needs dense unique indices");
            pos_[static_cast<size_t>(idx)] = static_cast<int>(slot);
        }
        if (entries_.size() > 1)
            for (size_t i = entries_.size() / 2; i-- > 0;) sift_down(i);
    }

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const std::pair<Key, int>& peek() const {
        if (entries_.empty()) throw Error("peek on empty heap");
        return entries_.front();
    }

    Key key_of(int index) const { return entries_[static_cast<size_t>(pos_.at(static_cast<size_t>(index)))].first; }

    void rewrite(Key key, int index) {
        if (index < 0 || static_cast<size_t>(index) >= pos_.size() || pos_[static_cast<size_t>(index)] < 0)
            throw Error("rewrite on absent heap index");
        const auto slot = static_cast<size_t>(pos_[static_cast<size_t>(index)]);
        entries_[slot].first = key;
        if (!sift_up(slot)) sift_down(slot);
    }

    // Debug audit: heap order and position-map consistency.
    void check() const {
        for (size_t i = 1; i < entries_.size(); ++i) {
            const size_t p = (i - 1) / 2;
            if (before_(entries_[i].first, entries_[i].second, entries_[p].first, entries_[p].second))
                throw Error("heap order violated");
        }
        for (size_t i = 0; i < entries_.size(); ++i)
            if (pos_[static_cast<size_t>(entries_[i].second)] != static_cast<int>(i))
                throw Error("heap position map inconsistent");
    }

private:
    bool sift_up(size_t slot) {
        bool moved = false;
        while (slot > 0) {
            const size_t parent = (slot - 1) / 2;
            if (!before_(entries_[slot].first, entries_[slot].second, entries_[parent].first,
                         entries_[parent].second))
                break;
            swap_slots(slot, parent);
            slot = parent;
            moved = true;
        }
        return moved;
    }

    void sift_down(size_t slot) {
        const size_t n = entries_.size();
        for (;;) {
            size_t best = slot;
            const size_t l = 2 * slot + 1, r = 2 * slot + 2;
            if (l < n && before_(entries_[l].first, entries_[l].second, entries_[best].first, entries_[best].second))
                best = l;
            if (r < n && before_(entries_[r].first, entries_[r].second, entries_[best].first, entries_[best].second))
                best = r;
            if (best == slot) break;
            swap_slots(slot, best);
            slot = best;
        }
    }

    void swap_slots(size_t a, size_t b) {
        std::swap(entries_[a], entries_[b]);
        pos_[static_cast<size_t>(entries_[a].second)] = static_cast<int>(a);
        pos_[static_cast<size_t>(entries_[b].second)] = static_cast<int>(b);
    }

    Before before_{};
    std::vector<std::pair<Key, int>> entries_;
    std::vector<int> pos_;
};

}  // namespace tmcts
