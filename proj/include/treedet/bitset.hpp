#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <unordered_map>
#include <vector>

namespace treedet {

// Fixed-width bit vector. All automata-side sets (state sets, transition
// sets) are bitsets over dense indices so the hot loops reduce to word ops.
class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(uint32_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    uint32_t size_bits() const { return nbits_; }

    void set(uint32_t i) { words_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    void reset(uint32_t i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    bool test(uint32_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    bool none() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    uint32_t count() const {
        uint32_t c = 0;
        for (uint64_t w : words_) c += static_cast<uint32_t>(__builtin_popcountll(w));
        return c;
    }

    DynBitset& operator&=(const DynBitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    DynBitset& operator|=(const DynBitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool intersects(const DynBitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const DynBitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool operator==(const DynBitset& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    // Set order: A < B iff the smallest index where they differ is in A.
    // Gives a stable canonical ordering for serialisation.
    bool set_less(const DynBitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t diff = words_[i] ^ o.words_[i];
            if (diff) {
                uint64_t low = diff & ~(diff - 1);
                return (words_[i] & low) != 0;
            }
        }
        return false;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (size_t wi = 0; wi < words_.size(); ++wi) {
            uint64_t w = words_[wi];
            while (w) {
                uint32_t b = static_cast<uint32_t>(__builtin_ctzll(w));
                f(static_cast<uint32_t>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<uint32_t> members() const {
        std::vector<uint32_t> out;
        out.reserve(count());
        for_each([&](uint32_t i) { out.push_back(i); });
        return out;
    }

    size_t hash() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (uint64_t w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return static_cast<size_t>(h);
    }

private:
    uint32_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

struct DynBitsetHash {
    size_t operator()(const DynBitset& b) const { return b.hash(); }
};

// Interning pool: each distinct bitset gets a dense id in insertion order,
// so set equality downstream is an integer comparison and iteration order
// is reproducible.
class SetPool {
public:
    uint32_t intern(const DynBitset& s) {
        auto it = ids_.find(s);
        if (it != ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(sets_.size());
        sets_.push_back(s);
        ids_.emplace(s, id);
        return id;
    }

    // Lookup without inserting; returns false if absent.
    bool find(const DynBitset& s, uint32_t& id) const {
        auto it = ids_.find(s);
        if (it == ids_.end()) return false;
        id = it->second;
        return true;
    }

    const DynBitset& at(uint32_t id) const { return sets_[id]; }
    size_t size() const { return sets_.size(); }

private:
    std::vector<DynBitset> sets_;
    std::unordered_map<DynBitset, uint32_t, DynBitsetHash> ids_;
};

}  // namespace treedet
