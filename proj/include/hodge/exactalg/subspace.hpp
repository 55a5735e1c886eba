#pragma once

// Subspaces of a coordinate space, stored through a canonical basis: the
// columns of the basis matrix are in reduced column echelon form, so two
// subspaces are equal exactly when their basis matrices are equal.

#include <map>
#include <string>
#include <vector>

#include <hodge/exactalg/matrix.hpp>

namespace hodge {

class subspace {
public:
    subspace() = default;
    explicit subspace(std::size_t ambient) : ambient_(ambient), basis_(ambient, 0) {}
    // Span of the columns of `spanning`.
    subspace(std::size_t ambient, const matrix &spanning) : ambient_(ambient) {
        require(spanning.cols() == 0 || spanning.rows() == ambient, "subspace: ambient mismatch");
        canonicalize(spanning);
    }

    static subspace zero(std::size_t n) { return subspace(n); }
    static subspace full(std::size_t n) { return subspace(n, matrix::identity(n)); }
    static subspace span(std::size_t n, const std::vector<matrix> &vectors) {
        if (vectors.empty()) return subspace(n);
        return subspace(n, matrix::from_columns(n, vectors));
    }

    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.cols(); }
    const matrix &basis() const noexcept { return basis_; }
    bool is_zero() const noexcept { return dim() == 0; }
    bool is_full() const noexcept { return dim() == ambient_; }

    subspace operator+(const subspace &o) const {
        check(o);
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        return subspace(ambient_, matrix::hcat(basis_, o.basis_));
    }

    subspace intersect(const subspace &o) const {
        check(o);
        if (is_zero() || o.is_zero()) return subspace(ambient_);
        if (is_full()) return o;
        if (o.is_full()) return *this;
        // x = A a = B b; kernel of [A | -B] gives the coefficients a.
        matrix k = kernel(matrix::hcat(basis_, -o.basis_));
        if (k.cols() == 0) return subspace(ambient_);
        return subspace(ambient_, basis_ * top_rows(k, dim()));
    }

    subspace conj() const { return subspace(ambient_, basis_.conj()); }
    bool is_conj_stable() const { return conj() == *this; }

    // Image under a linear map V -> V'.
    subspace image(const matrix &m) const {
        require(m.cols() == ambient_, "image: shape mismatch");
        if (is_zero()) return subspace(m.rows());
        return subspace(m.rows(), m * basis_);
    }

    // Rows y with y^T s = 0 for all s in the subspace (bilinear annihilator).
    matrix annihilator() const {
        if (is_zero()) return matrix::identity(ambient_);
        return kernel(basis_.transpose()).transpose();
    }

    // {x : M x lies in this subspace} for M : V' -> V.
    subspace preimage(const matrix &m) const {
        require(m.rows() == ambient_, "preimage: shape mismatch");
        if (is_full()) return full(m.cols());
        matrix cond = annihilator() * m;
        matrix k = kernel(cond);
        return subspace(m.cols(), k);
    }

    static subspace kernel_of(const matrix &m) { return subspace(m.cols(), kernel(m)); }

    bool contains(const matrix &v) const {
        require(v.rows() == ambient_, "contains: shape mismatch");
        for (std::size_t c = 0; c < v.cols(); ++c) {
            matrix col = v.col(c);
            if (col.is_zero()) continue;
            if (is_zero()) return false;
            if (rank(matrix::hcat(basis_, col)) != dim()) return false;
        }
        return true;
    }
    bool contains(const subspace &o) const {
        check(o);
        return o.is_zero() || contains(o.basis_);
    }

    // Vectors of `larger` completing this subspace's basis to a basis of it.
    // Requires this subspace to be contained in `larger`.
    matrix complement_in(const subspace &larger) const {
        check(larger);
        matrix acc = basis_;
        std::size_t r = dim();
        std::vector<matrix> extra;
        for (std::size_t c = 0; c < larger.dim(); ++c) {
            matrix v = larger.basis_.col(c);
            matrix trial = matrix::hcat(acc, v);
            std::size_t rk = rank(trial);
            if (rk > r) {
                acc = trial;
                r = rk;
                extra.push_back(v);
            }
        }
        return matrix::from_columns(ambient_, extra);
    }

    friend bool operator==(const subspace &a, const subspace &b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const subspace &a, const subspace &b) { return !(a == b); }

    std::string to_string() const { return "span" + basis_.transpose().to_string(); }

private:
    std::size_t ambient_ = 0;
    matrix basis_;

    void check(const subspace &o) const { require(ambient_ == o.ambient_, "subspace: ambient mismatch"); }

    static matrix top_rows(const matrix &k, std::size_t n) {
        matrix t(n, k.cols());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < k.cols(); ++c) t(r, c) = k(r, c);
        }
        return t;
    }

    void canonicalize(const matrix &spanning) {
        if (spanning.cols() == 0) {
            basis_ = matrix(ambient_, 0);
            return;
        }
        echelon e = rref(spanning.transpose());
        std::size_t d = e.pivots.size();
        matrix b(ambient_, d);
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t r = 0; r < ambient_; ++r) b(r, c) = e.reduced(c, r);
        }
        basis_ = std::move(b);
    }
};

// Sum of a family of subspaces of the same ambient space.
inline subspace sum_of(std::size_t n, const std::vector<subspace> &parts) {
    std::vector<matrix> cols;
    for (const auto &p : parts) {
        for (std::size_t c = 0; c < p.dim(); ++c) cols.push_back(p.basis().col(c));
    }
    return subspace::span(n, cols);
}

// True when the family is independent (its sum is direct).
inline bool is_direct_sum(std::size_t n, const std::vector<subspace> &parts) {
    std::size_t total = 0;
    for (const auto &p : parts) total += p.dim();
    return sum_of(n, parts).dim() == total;
}

} // namespace hodge
