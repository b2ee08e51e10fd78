#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace rt {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int size() const { return n_; }
    void set(int i) { w_[i >> 6] |= 1ULL << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
    void assign(int i, bool b) { b ? set(i) : reset(i); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }
    void fill() {
        std::fill(w_.begin(), w_.end(), ~0ULL);
        trim();
    }

    int count() const {
        int c = 0;
        for (uint64_t x : w_) c += std::popcount(x);
        return c;
    }
    bool any() const {
        for (uint64_t x : w_)
            if (x) return true;
        return false;
    }
    int count_and(const Bitset& o) const {
        int c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }
    int count_and(const Bitset& a, const Bitset& b) const {
        int c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & a.w_[i] & b.w_[i]);
        return c;
    }
    // Lowest index set in both, or -1.
    int first_and(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (uint64_t x = w_[i] & o.w_[i]) return int(i * 64 + std::countr_zero(x));
        return -1;
    }
    int first() const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return int(i * 64 + std::countr_zero(w_[i]));
        return -1;
    }
    int next(int i) const {
        ++i;
        if (i >= n_) return -1;
        size_t k = i >> 6;
        uint64_t x = w_[k] & (~0ULL << (i & 63));
        while (true) {
            if (x) return int(k * 64 + std::countr_zero(x));
            if (++k >= w_.size()) return -1;
            x = w_[k];
        }
    }
    // k-th set bit of this & o (0-based), or -1.
    int nth_and(const Bitset& o, int k) const {
        for (size_t i = 0; i < w_.size(); ++i) {
            uint64_t x = w_[i] & o.w_[i];
            int c = std::popcount(x);
            if (k < c) {
                while (k--) x &= x - 1;
                return int(i * 64 + std::countr_zero(x));
            }
            k -= c;
        }
        return -1;
    }

    Bitset& operator&=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator-=(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }
    Bitset operator~() const {
        Bitset r(n_);
        for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        r.trim();
        return r;
    }
    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        for (int i = first(); i >= 0; i = next(i)) v.push_back(i);
        return v;
    }
    static Bitset of(int n, const std::vector<int>& xs) {
        Bitset b(n);
        for (int x : xs) b.set(x);
        return b;
    }

    const std::vector<uint64_t>& words() const { return w_; }

private:
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }
    int n_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace rt
