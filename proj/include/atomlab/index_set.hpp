#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomlab {

/// A finite or cofinite subset of the naturals, exact in both cases.
/// Finite sets list their members; cofinite sets list their exceptions.
/// This is the building block of all symbolic elements.
class IndexSet {
public:
    IndexSet() : cofinite_(false) {}

    static IndexSet finite(std::vector<std::uint32_t> members) {
        IndexSet s;
        s.cofinite_ = false;
        s.elems_ = normalize(std::move(members));
        return s;
    }
    static IndexSet cofinite(std::vector<std::uint32_t> exceptions) {
        IndexSet s;
        s.cofinite_ = true;
        s.elems_ = normalize(std::move(exceptions));
        return s;
    }
    static IndexSet empty() { return finite({}); }
    static IndexSet full() { return cofinite({}); }

    bool is_cofinite() const { return cofinite_; }
    bool is_finite() const { return !cofinite_; }
    bool is_empty() const { return !cofinite_ && elems_.empty(); }
    bool is_full() const { return cofinite_ && elems_.empty(); }

    /// Members (finite case) or exceptions (cofinite case), sorted.
    const std::vector<std::uint32_t>& support() const { return elems_; }

    bool contains(std::uint32_t k) const {
        bool listed = std::binary_search(elems_.begin(), elems_.end(), k);
        return cofinite_ ? !listed : listed;
    }

    /// Least t such that every k >= t is a member; only for cofinite sets.
    std::uint32_t tail_start() const {
        if (!cofinite_) throw std::logic_error("tail_start on finite IndexSet");
        return elems_.empty() ? 0 : elems_.back() + 1;
    }

    /// Least member; set must be non-empty.
    std::uint32_t min() const {
        if (is_empty()) throw std::logic_error("min of empty IndexSet");
        if (!cofinite_) return elems_.front();
        std::uint32_t k = 0;
        while (contains(k) == false) ++k;
        return k;
    }

    IndexSet complement() const {
        IndexSet s;
        s.cofinite_ = !cofinite_;
        s.elems_ = elems_;
        return s;
    }

    friend IndexSet operator|(const IndexSet& a, const IndexSet& b) {
        IndexSet s;
        if (!a.cofinite_ && !b.cofinite_) {
            s.cofinite_ = false;
            s.elems_ = merged(a.elems_, b.elems_);
        } else if (a.cofinite_ && b.cofinite_) {
            s.cofinite_ = true;
            s.elems_ = intersected(a.elems_, b.elems_);
        } else {
            const IndexSet& co = a.cofinite_ ? a : b;
            const IndexSet& fi = a.cofinite_ ? b : a;
            s.cofinite_ = true;
            s.elems_ = subtracted(co.elems_, fi.elems_);
        }
        return s;
    }
    friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
        return (a.complement() | b.complement()).complement();
    }
    friend IndexSet operator-(const IndexSet& a, const IndexSet& b) {
        return a & b.complement();
    }

    bool intersects(const IndexSet& b) const { return !((*this) & b).is_empty(); }

    bool operator==(const IndexSet& o) const {
        return cofinite_ == o.cofinite_ && elems_ == o.elems_;
    }
    bool operator!=(const IndexSet& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s = cofinite_ ? "cofinite~{" : "{";
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(elems_[i]);
        }
        s += '}';
        return s;
    }

private:
    static std::vector<std::uint32_t> normalize(std::vector<std::uint32_t> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
    static std::vector<std::uint32_t> merged(const std::vector<std::uint32_t>& a,
                                             const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }
    static std::vector<std::uint32_t> intersected(const std::vector<std::uint32_t>& a,
                                                  const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(out));
        return out;
    }
    static std::vector<std::uint32_t> subtracted(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(out));
        return out;
    }

    bool cofinite_;
    std::vector<std::uint32_t> elems_;
};

}  // namespace atomlab
