#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace atomlab {

/// Dense bit set over atom indices. All complex-algebra elements in
/// explicit mode are AtomSets; operations are word-parallel.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(std::size_t universe)
        : size_(universe), words_((universe + 63) / 64, 0) {}

    static AtomSet all(std::size_t universe) {
        AtomSet s(universe);
        for (auto& w : s.words_) w = ~0ull;
        s.trim();
        return s;
    }
    static AtomSet single(std::size_t universe, std::size_t i) {
        AtomSet s(universe);
        s.set(i);
        return s;
    }

    std::size_t universe() const { return size_; }
    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool is_all() const { return *this == all(size_); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    AtomSet& operator|=(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    AtomSet& operator&=(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    AtomSet& operator-=(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
    friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }

    AtomSet complement() const {
        AtomSet r(size_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    bool intersects(const AtomSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    bool subset_of(const AtomSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool operator==(const AtomSet& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }
    bool operator!=(const AtomSet& o) const { return !(*this == o); }
    bool operator<(const AtomSet& o) const {
        if (size_ != o.size_) return size_ < o.size_;
        return words_ < o.words_;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                f(w * 64 + b);
                bits &= bits - 1;
            }
        }
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](std::size_t i) {
            if (!first) s += ',';
            s += std::to_string(i);
            first = false;
        });
        s += '}';
        return s;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    void trim() {
        if (size_ % 64 && !words_.empty())
            words_.back() &= (~0ull) >> (64 - size_ % 64);
    }
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// FNV-1a over a byte string; used for structure fingerprints.
inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace atomlab
