#pragma once

// Dense matrices over the scalar ring together with the exact linear algebra
// used everywhere else: reduced row echelon form, kernels, solving, inverses.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <hodge/errors.hpp>
#include <hodge/exactalg/scalar.hpp>

namespace hodge {

class matrix {
public:
    matrix() = default;
    matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static matrix identity(std::size_t n) {
        matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = scalar(1);
        return m;
    }
    static matrix unit(std::size_t rows, std::size_t cols, std::size_t r, std::size_t c) {
        matrix m(rows, cols);
        m(r, c) = scalar(1);
        return m;
    }
    // Column vector with the given entries.
    static matrix column(const std::vector<scalar> &v) {
        matrix m(v.size(), 1);
        for (std::size_t k = 0; k < v.size(); ++k) m(k, 0) = v[k];
        return m;
    }
    static matrix from_columns(std::size_t rows, const std::vector<matrix> &cols) {
        matrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            require(cols[c].rows() == rows && cols[c].cols() == 1, "from_columns: shape mismatch");
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c](r, 0);
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    scalar &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const scalar &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto &x : data_) {
            if (!x.is_zero()) return false;
        }
        return true;
    }
    bool is_square() const noexcept { return rows_ == cols_; }

    matrix col(std::size_t c) const {
        matrix m(rows_, 1);
        for (std::size_t r = 0; r < rows_; ++r) m(r, 0) = (*this)(r, c);
        return m;
    }
    void set_col(std::size_t c, const matrix &v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v(r, 0);
    }
    matrix cols_range(std::size_t begin, std::size_t end) const {
        matrix m(rows_, end - begin);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = begin; c < end; ++c) m(r, c - begin) = (*this)(r, c);
        }
        return m;
    }
    // Horizontal concatenation [A | B].
    static matrix hcat(const matrix &a, const matrix &b) {
        if (a.cols_ == 0) return b;
        if (b.cols_ == 0) return a;
        require(a.rows_ == b.rows_, "hcat: row mismatch");
        matrix m(a.rows_, a.cols_ + b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
            for (std::size_t c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
        }
        return m;
    }
    static matrix vcat(const matrix &a, const matrix &b) {
        if (a.rows_ == 0) return b;
        if (b.rows_ == 0) return a;
        require(a.cols_ == b.cols_, "vcat: column mismatch");
        matrix m(a.rows_ + b.rows_, a.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
        }
        for (std::size_t r = 0; r < b.rows_; ++r) {
            for (std::size_t c = 0; c < a.cols_; ++c) m(a.rows_ + r, c) = b(r, c);
        }
        return m;
    }

    matrix transpose() const {
        matrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        }
        return m;
    }
    matrix conj() const {
        matrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k].conj();
        return m;
    }

    matrix &operator+=(const matrix &o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!o.data_[k].is_zero()) data_[k] += o.data_[k];
        }
        return *this;
    }
    matrix &operator-=(const matrix &o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!o.data_[k].is_zero()) data_[k] -= o.data_[k];
        }
        return *this;
    }
    friend matrix operator+(matrix a, const matrix &b) { return a += b; }
    friend matrix operator-(matrix a, const matrix &b) { return a -= b; }
    matrix operator-() const {
        matrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!data_[k].is_zero()) m.data_[k] = -data_[k];
        }
        return m;
    }
    matrix &operator*=(const scalar &s) {
        if (s.is_one()) return *this;
        for (auto &x : data_) {
            if (!x.is_zero()) x = x * s;
        }
        return *this;
    }
    friend matrix operator*(matrix a, const scalar &s) { return a *= s; }
    friend matrix operator*(const scalar &s, matrix a) { return a *= s; }

    friend matrix operator*(const matrix &a, const matrix &b) {
        require(a.cols_ == b.rows_, "matrix product: shape mismatch");
        matrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const scalar &x = a(r, k);
                if (x.is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    const scalar &y = b(k, c);
                    if (y.is_zero()) continue;
                    m(r, c) += x * y;
                }
            }
        }
        return m;
    }

    friend bool operator==(const matrix &a, const matrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const matrix &a, const matrix &b) { return !(a == b); }

    // Row-major flattening, used to view gl(V) as a vector space.
    matrix vectorize() const {
        matrix v(rows_ * cols_, 1);
        for (std::size_t k = 0; k < data_.size(); ++k) v.data_[k] = data_[k];
        return v;
    }
    static matrix unvectorize(const matrix &v, std::size_t n) {
        require(v.rows() == n * n && v.cols() == 1, "unvectorize: shape mismatch");
        matrix m(n, n);
        for (std::size_t k = 0; k < n * n; ++k) m.data_[k] = v.data_[k];
        return m;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r) s += "; ";
            for (std::size_t c = 0; c < cols_; ++c) {
                if (c) s += ", ";
                s += (*this)(r, c).to_string();
            }
        }
        return s + "]";
    }
    friend std::ostream &operator<<(std::ostream &os, const matrix &m) { return os << m.to_string(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<scalar> data_;

    void check_same(const matrix &o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum: shape mismatch");
    }
};

inline matrix commutator(const matrix &a, const matrix &b) { return a * b - b * a; }

// Row echelon data of a matrix: the reduced row echelon form and the pivot
// column of each nonzero row.
struct echelon {
    matrix reduced;
    std::vector<std::size_t> pivots;
};

// Reduced row echelon form. Pivots must be units of the scalar ring; among
// the candidates in a column the first unit is used, which does not affect
// the (unique) reduced form.
inline echelon rref(matrix a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t piv = m;
        bool nonzero_seen = false;
        for (std::size_t r = row; r < m; ++r) {
            if (a(r, c).is_zero()) continue;
            nonzero_seen = true;
            if (a(r, c).is_unit()) {
                piv = r;
                break;
            }
        }
        if (piv == m) {
            if (nonzero_seen) {
                throw non_unit_pivot("no unit pivot available in column " + std::to_string(c));
            }
            continue;
        }
        if (piv != row) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(row, k));
        }
        scalar inv = a(row, c).inverse();
        for (std::size_t k = c; k < n; ++k) {
            if (!a(row, k).is_zero()) a(row, k) = a(row, k) * inv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || a(r, c).is_zero()) continue;
            scalar f = a(r, c);
            for (std::size_t k = c; k < n; ++k) {
                if (!a(row, k).is_zero()) a(r, k) -= f * a(row, k);
            }
        }
        pivots.push_back(c);
        ++row;
    }
    return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const matrix &a) { return rref(a).pivots.size(); }

// Basis of the right kernel {x : A x = 0} as the columns of the result.
inline matrix kernel(const matrix &a) {
    echelon e = rref(a);
    const std::size_t n = a.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<matrix> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        matrix v(n, 1);
        v(f, 0) = scalar(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            if (!e.reduced(r, f).is_zero()) v(e.pivots[r], 0) = -e.reduced(r, f);
        }
        basis.push_back(std::move(v));
    }
    return matrix::from_columns(n, basis);
}

// One solution X of A X = B (B may have several columns), or nullopt when
// the system is inconsistent. Free variables are set to zero.
inline std::optional<matrix> solve(const matrix &a, const matrix &b) {
    require(a.rows() == b.rows(), "solve: row mismatch");
    const std::size_t n = a.cols();
    echelon e = rref(matrix::hcat(a, b));
    matrix x(n, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] >= n) return std::nullopt;
        for (std::size_t c = 0; c < b.cols(); ++c) x(e.pivots[r], c) = e.reduced(r, n + c);
    }
    return x;
}

inline std::optional<matrix> try_inverse(const matrix &a) {
    require(a.is_square(), "inverse: matrix not square");
    const std::size_t n = a.rows();
    echelon e = rref(matrix::hcat(a, matrix::identity(n)));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    return e.reduced.cols_range(n, 2 * n);
}

inline matrix inverse(const matrix &a) {
    auto inv = try_inverse(a);
    if (!inv) throw check_failure("Singular", "matrix is not invertible");
    return *inv;
}

} // namespace hodge

namespace hodge {

// exp(X) for a nilpotent matrix X.
inline matrix exp_nilpotent(const matrix &x) {
    const std::size_t n = x.rows();
    matrix result = matrix::identity(n);
    matrix power = result;
    for (std::size_t k = 1; k <= n + 1; ++k) {
        power = power * x;
        if (power.is_zero()) return result;
        result += power * scalar::frac(1, static_cast<long>(k));
    }
    throw check_failure("NotNilpotent", "matrix exponential does not terminate");
}

} // namespace hodge
