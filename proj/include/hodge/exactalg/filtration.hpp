#pragma once

// Increasing and decreasing filtrations by subspaces, stored by their jumps.
//
// An increasing filtration W has W_k equal to the entry at the largest stored
// index <= k, and 0 below every stored index. A decreasing filtration F has
// F^p equal to the entry at the smallest stored index >= p, and 0 above every
// stored index. Stored maps are normalized so that only genuine jumps remain.

#include <map>
#include <string>

#include <hodge/exactalg/subspace.hpp>

namespace hodge {

class increasing_filtration {
public:
    increasing_filtration() = default;
    explicit increasing_filtration(std::size_t ambient) : ambient_(ambient) {}
    increasing_filtration(std::size_t ambient, std::map<int, subspace> levels) : ambient_(ambient) {
        for (auto &[k, s] : levels) {
            require(s.ambient() == ambient, "filtration: ambient mismatch");
        }
        levels_ = std::move(levels);
        normalize();
    }

    // The filtration 0 = W_{k-1} subset W_k = V.
    static increasing_filtration trivial(std::size_t ambient, int k) {
        return increasing_filtration(ambient, {{k, subspace::full(ambient)}});
    }

    std::size_t ambient() const noexcept { return ambient_; }
    const std::map<int, subspace> &levels() const noexcept { return levels_; }

    subspace at(int k) const {
        auto it = levels_.upper_bound(k);
        if (it == levels_.begin()) return subspace::zero(ambient_);
        return std::prev(it)->second;
    }

    // Smallest index with W_k != 0 and smallest with W_k = V.
    int lowest() const {
        require(!levels_.empty(), "filtration is empty");
        return levels_.begin()->first;
    }
    int highest() const {
        require(!levels_.empty(), "filtration is empty");
        return levels_.rbegin()->first;
    }
    bool is_exhaustive() const { return ambient_ == 0 || (!levels_.empty() && levels_.rbegin()->second.is_full()); }
    bool is_conj_stable() const {
        for (const auto &[k, s] : levels_) {
            if (!s.is_conj_stable()) return false;
        }
        return true;
    }
    // W[l]_j = W_{j+l}.
    increasing_filtration shift(int l) const {
        std::map<int, subspace> out;
        for (const auto &[k, s] : levels_) out.emplace(k - l, s);
        return increasing_filtration(ambient_, std::move(out));
    }

    friend bool operator==(const increasing_filtration &a, const increasing_filtration &b) {
        return a.ambient_ == b.ambient_ && a.levels_ == b.levels_;
    }
    friend bool operator!=(const increasing_filtration &a, const increasing_filtration &b) { return !(a == b); }

private:
    std::size_t ambient_ = 0;
    std::map<int, subspace> levels_;

    void normalize() {
        subspace prev = subspace::zero(ambient_);
        std::map<int, subspace> out;
        for (auto &[k, s] : levels_) {
            require(s.contains(prev), "increasing filtration is not nested at index " + std::to_string(k));
            if (s != prev) out.emplace(k, s);
            prev = s;
        }
        levels_ = std::move(out);
    }
};

class decreasing_filtration {
public:
    decreasing_filtration() = default;
    explicit decreasing_filtration(std::size_t ambient) : ambient_(ambient) {}
    decreasing_filtration(std::size_t ambient, std::map<int, subspace> levels) : ambient_(ambient) {
        for (auto &[k, s] : levels) {
            require(s.ambient() == ambient, "filtration: ambient mismatch");
        }
        levels_ = std::move(levels);
        normalize();
    }

    std::size_t ambient() const noexcept { return ambient_; }
    const std::map<int, subspace> &levels() const noexcept { return levels_; }

    subspace at(int p) const {
        auto it = levels_.lower_bound(p);
        if (it == levels_.end()) return subspace::zero(ambient_);
        return it->second;
    }

    // Smallest stored index (where F^p = V when exhaustive) and the largest
    // index with F^p != 0.
    int lowest() const {
        require(!levels_.empty(), "filtration is empty");
        return levels_.begin()->first;
    }
    int highest() const {
        require(!levels_.empty(), "filtration is empty");
        return levels_.rbegin()->first;
    }
    bool is_exhaustive() const { return ambient_ == 0 || (!levels_.empty() && levels_.begin()->second.is_full()); }

    decreasing_filtration conj() const {
        std::map<int, subspace> out;
        for (const auto &[k, s] : levels_) out.emplace(k, s.conj());
        return decreasing_filtration(ambient_, std::move(out));
    }
    // Image under an invertible map.
    decreasing_filtration image(const matrix &g) const {
        std::map<int, subspace> out;
        for (const auto &[k, s] : levels_) out.emplace(k, s.image(g));
        return decreasing_filtration(ambient_, std::move(out));
    }

    friend bool operator==(const decreasing_filtration &a, const decreasing_filtration &b) {
        return a.ambient_ == b.ambient_ && a.levels_ == b.levels_;
    }
    friend bool operator!=(const decreasing_filtration &a, const decreasing_filtration &b) { return !(a == b); }

private:
    std::size_t ambient_ = 0;
    std::map<int, subspace> levels_;

    void normalize() {
        subspace prev = subspace::zero(ambient_);
        std::map<int, subspace> out;
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
            require(it->second.contains(prev),
                    "decreasing filtration is not nested at index " + std::to_string(it->first));
            if (it->second != prev) out.emplace(it->first, it->second);
            prev = it->second;
        }
        levels_ = std::move(out);
    }
};

} // namespace hodge
