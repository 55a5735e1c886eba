#pragma once

// Truncated multivariate power series with total-degree truncation.
//
// A series in n variables truncated at order d stores one coefficient per
// monomial of total degree <= d. Coefficients are scalars or matrices. The
// variables are either the multiplicative coordinates q_j = exp(tp * u_j), in
// which case derivatives are taken in u (so d/du_j q^b = tp * b_j * q^b), or
// plain coordinates s_j with the usual derivative.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <hodge/errors.hpp>
#include <hodge/exactalg/matrix.hpp>

namespace hodge {

using exponent = std::vector<int>;

inline int total_degree(const exponent &e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

inline std::string exponent_string(const exponent &e) {
    std::string s = "(";
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(e[k]);
    }
    return s + ")";
}

enum class derivation { log, plain };

// Monomials of total degree <= order in nvars variables, sorted by degree
// and then lexicographically (descending in the first variable), together
// with a product table.
class monomial_basis {
public:
    monomial_basis(std::size_t nvars, int order) : nvars_(nvars), order_(order) {
        require(nvars >= 1, "series need at least one variable");
        require(order >= 0, "series order must be non-negative");
        for (int deg = 0; deg <= order; ++deg) {
            exponent e(nvars, 0);
            enumerate(e, 0, deg);
        }
        for (std::size_t k = 0; k < mons_.size(); ++k) index_.emplace(mons_[k], k);
        const std::size_t m = mons_.size();
        product_.assign(m * m, -1);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                if (degree(a) + degree(b) > order) continue;
                exponent e(nvars);
                for (std::size_t v = 0; v < nvars; ++v) e[v] = mons_[a][v] + mons_[b][v];
                product_[a * m + b] = static_cast<long>(index_.at(e));
            }
        }
    }

    static std::shared_ptr<const monomial_basis> get(std::size_t nvars, int order) {
        static std::mutex mu;
        static std::map<std::pair<std::size_t, int>, std::shared_ptr<const monomial_basis>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(nvars, order);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto b = std::make_shared<const monomial_basis>(nvars, order);
        cache.emplace(key, b);
        return b;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return mons_.size(); }
    const exponent &at(std::size_t k) const { return mons_[k]; }
    int degree(std::size_t k) const { return total_degree(mons_[k]); }
    // Index of a monomial, or -1 when it exceeds the truncation order.
    long find(const exponent &e) const {
        require(e.size() == nvars_, "exponent has wrong number of variables");
        for (int x : e) require(x >= 0, "negative exponent " + exponent_string(e));
        auto it = index_.find(e);
        return it == index_.end() ? -1 : static_cast<long>(it->second);
    }
    // Index of the product of monomials a and b, or -1 past the order.
    long product(std::size_t a, std::size_t b) const { return product_[a * mons_.size() + b]; }

private:
    std::size_t nvars_;
    int order_;
    std::vector<exponent> mons_;
    std::map<exponent, std::size_t> index_;
    std::vector<long> product_;

    void enumerate(exponent &e, std::size_t v, int remaining) {
        if (v + 1 == nvars_) {
            e[v] = remaining;
            mons_.push_back(e);
            return;
        }
        for (int x = remaining; x >= 0; --x) {
            e[v] = x;
            enumerate(e, v + 1, remaining - x);
        }
        e[v] = 0;
    }
};

namespace detail {
inline bool coef_is_zero(const scalar &s) { return s.is_zero(); }
inline bool coef_is_zero(const matrix &m) { return m.is_zero(); }
} // namespace detail

template <class Coef>
class series {
public:
    series() = default;
    series(std::shared_ptr<const monomial_basis> basis, Coef zero)
        : basis_(std::move(basis)), zero_(std::move(zero)), coeffs_(basis_->size(), zero_) {}
    series(std::size_t nvars, int order, Coef zero) : series(monomial_basis::get(nvars, order), std::move(zero)) {}

    static series constant(std::size_t nvars, int order, const Coef &c, const Coef &zero) {
        series s(nvars, order, zero);
        s.coeffs_[0] = c;
        return s;
    }

    const std::shared_ptr<const monomial_basis> &basis() const noexcept { return basis_; }
    std::size_t nvars() const { return basis_->nvars(); }
    int order() const { return basis_->order(); }
    std::size_t size() const { return coeffs_.size(); }
    const Coef &zero_coef() const noexcept { return zero_; }

    const Coef &operator[](std::size_t k) const { return coeffs_[k]; }
    Coef &operator[](std::size_t k) { return coeffs_[k]; }
    const exponent &monomial(std::size_t k) const { return basis_->at(k); }

    // Coefficient of q^e; zero past the truncation order.
    Coef coeff(const exponent &e) const {
        long k = basis_->find(e);
        return k < 0 ? zero_ : coeffs_[static_cast<std::size_t>(k)];
    }
    void set(const exponent &e, const Coef &c) {
        long k = basis_->find(e);
        require(k >= 0, "exponent " + exponent_string(e) + " exceeds truncation order");
        coeffs_[static_cast<std::size_t>(k)] = c;
    }
    const Coef &constant_term() const { return coeffs_[0]; }

    bool is_zero() const {
        for (const auto &c : coeffs_) {
            if (!detail::coef_is_zero(c)) return false;
        }
        return true;
    }

    series &operator+=(const series &o) {
        check(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (!detail::coef_is_zero(o.coeffs_[k])) coeffs_[k] += o.coeffs_[k];
        }
        return *this;
    }
    series &operator-=(const series &o) {
        check(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (!detail::coef_is_zero(o.coeffs_[k])) coeffs_[k] -= o.coeffs_[k];
        }
        return *this;
    }
    friend series operator+(series a, const series &b) { return a += b; }
    friend series operator-(series a, const series &b) { return a -= b; }
    series operator-() const {
        series r(basis_, zero_);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (!detail::coef_is_zero(coeffs_[k])) r.coeffs_[k] = -coeffs_[k];
        }
        return r;
    }
    series &operator*=(const scalar &s) {
        for (auto &c : coeffs_) {
            if (!detail::coef_is_zero(c)) c = c * s;
        }
        return *this;
    }
    friend series operator*(series a, const scalar &s) { return a *= s; }
    friend series operator*(const scalar &s, series a) { return a *= s; }

    // Cauchy product, truncated at the common order.
    template <class A, class B>
    static series product(const series<A> &a, const series<B> &b, Coef zero) {
        require(a.basis() == b.basis(), "series product: truncation mismatch");
        series r(a.basis(), std::move(zero));
        const auto &mb = *a.basis();
        std::vector<std::size_t> nzb;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!detail::coef_is_zero(b[j])) nzb.push_back(j);
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (detail::coef_is_zero(a[i])) continue;
            for (std::size_t j : nzb) {
                long k = mb.product(i, j);
                if (k < 0) continue;
                r.coeffs_[static_cast<std::size_t>(k)] += a[i] * b[j];
            }
        }
        return r;
    }

    // d/du_j in log mode, d/ds_j in plain mode. In plain mode the top-degree
    // coefficients of the result are unknown and set to zero.
    series derivative(std::size_t j, derivation mode) const {
        require(j < nvars(), "derivative: variable index out of range");
        series r(basis_, zero_);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (detail::coef_is_zero(coeffs_[k])) continue;
            const exponent &e = basis_->at(k);
            if (e[j] == 0) continue;
            if (mode == derivation::log) {
                r.coeffs_[k] = coeffs_[k] * (scalar::tp() * scalar(e[j]));
            } else {
                exponent f = e;
                f[j] -= 1;
                r.coeffs_[static_cast<std::size_t>(basis_->find(f))] = coeffs_[k] * scalar(e[j]);
            }
        }
        return r;
    }

    // Same series viewed at another truncation order (dropping or padding).
    series truncate(int new_order) const {
        series r(nvars(), new_order, zero_);
        for (std::size_t k = 0; k < r.size(); ++k) {
            long src = basis_->find(r.monomial(k));
            if (src >= 0) r.coeffs_[k] = coeffs_[static_cast<std::size_t>(src)];
        }
        return r;
    }

    // Entrywise map of the coefficients.
    template <class F>
    auto map(F f) const {
        using R = decltype(f(zero_));
        series<R> r(basis_, f(zero_));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r[k] = f(coeffs_[k]);
        return r;
    }

    // Lowest total degree carrying a nonzero coefficient, or -1 if zero.
    int valuation() const {
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (!detail::coef_is_zero(coeffs_[k])) return basis_->degree(k);
        }
        return -1;
    }

    friend bool operator==(const series &a, const series &b) {
        return a.basis_ == b.basis_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const series &a, const series &b) { return !(a == b); }

private:
    std::shared_ptr<const monomial_basis> basis_;
    Coef zero_;
    std::vector<Coef> coeffs_;

    void check(const series &o) const { require(basis_ == o.basis_, "series: truncation mismatch"); }
};

using series_scalar = series<scalar>;
using series_endo = series<matrix>;

inline series_scalar make_series_scalar(std::size_t nvars, int order) { return series_scalar(nvars, order, scalar()); }
inline series_endo make_series_endo(std::size_t nvars, int order, std::size_t dim) {
    return series_endo(nvars, order, matrix(dim, dim));
}
inline std::size_t endo_dim(const series_endo &s) { return s.zero_coef().rows(); }

inline series_scalar operator*(const series_scalar &a, const series_scalar &b) {
    return series_scalar::product(a, b, scalar());
}
inline series_endo operator*(const series_endo &a, const series_endo &b) {
    return series_endo::product(a, b, matrix(a.zero_coef().rows(), b.zero_coef().cols()));
}
inline series_endo operator*(const series_scalar &a, const series_endo &b) {
    return series_endo::product(a, b, b.zero_coef());
}
// Product with a constant matrix on either side.
inline series_endo operator*(const matrix &m, const series_endo &s) {
    return s.map([&](const matrix &c) { return c.is_zero() ? matrix(m.rows(), c.cols()) : matrix(m * c); });
}
inline series_endo operator*(const series_endo &s, const matrix &m) {
    return s.map([&](const matrix &c) { return c.is_zero() ? matrix(c.rows(), m.cols()) : matrix(c * m); });
}
inline series_endo bracket(const series_endo &a, const series_endo &b) { return a * b - b * a; }
inline series_endo bracket(const matrix &a, const series_endo &b) { return a * b - b * a; }

inline series_endo identity_series(std::size_t nvars, int order, std::size_t dim) {
    return series_endo::constant(nvars, order, matrix::identity(dim), matrix(dim, dim));
}

// Scalar series times a constant matrix.
inline series_endo times_matrix(const series_scalar &f, const matrix &m) {
    series_endo r(f.basis(), matrix(m.rows(), m.cols()));
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!f[k].is_zero()) r[k] = m * f[k];
    }
    return r;
}

// Entry (r, c) of a matrix series as a scalar series.
inline series_scalar entry(const series_endo &s, std::size_t r, std::size_t c) {
    return s.map([&](const matrix &m) { return m(r, c); });
}

// exp(X) for X whose constant term is nilpotent; the sum terminates.
inline series_endo exp_nilpotent(const series_endo &x) {
    const std::size_t n = endo_dim(x);
    series_endo result = identity_series(x.nvars(), x.order(), n);
    series_endo power = result;
    const int cap = static_cast<int>((n + 1) * (x.order() + 2));
    for (int k = 1; k <= cap; ++k) {
        power = power * x;
        if (power.is_zero()) return result;
        result += power * scalar::frac(1, k);
    }
    throw check_failure("NotNilpotent", "exponential series does not terminate");
}

// log(E) for E whose constant term is unipotent; the sum terminates.
inline series_endo log_unipotent(const series_endo &e) {
    const std::size_t n = endo_dim(e);
    series_endo y = e - identity_series(e.nvars(), e.order(), n);
    series_endo result = make_series_endo(e.nvars(), e.order(), n);
    series_endo power = identity_series(e.nvars(), e.order(), n);
    const int cap = static_cast<int>((n + 1) * (e.order() + 2));
    for (int k = 1; k <= cap; ++k) {
        power = power * y;
        if (power.is_zero()) return result;
        result += power * scalar::frac(k % 2 == 1 ? 1 : -1, k);
    }
    throw check_failure("NotUnipotent", "logarithm series does not terminate");
}

// Inverse of a matrix series with invertible constant term.
inline series_endo inverse(const series_endo &a) {
    const std::size_t n = endo_dim(a);
    matrix c0inv = inverse(a.constant_term());
    series_endo r = make_series_endo(a.nvars(), a.order(), n);
    r[0] = c0inv;
    const auto &mb = *a.basis();
    // Solve a * r = 1 degree by degree: a0 r_k = -sum_{i>0} a_i r_{k-i}.
    for (std::size_t k = 1; k < r.size(); ++k) {
        matrix acc(n, n);
        for (std::size_t i = 1; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (r[j].is_zero()) continue;
                if (mb.product(i, j) == static_cast<long>(k)) acc += a[i] * r[j];
            }
        }
        r[k] = -(c0inv * acc);
    }
    return r;
}

// Inverse of a scalar series whose constant term is a unit.
inline series_scalar inverse(const series_scalar &a) {
    scalar c0inv = a.constant_term().inverse();
    series_scalar r = make_series_scalar(a.nvars(), a.order());
    r[0] = c0inv;
    const auto &mb = *a.basis();
    for (std::size_t k = 1; k < r.size(); ++k) {
        scalar acc;
        for (std::size_t i = 1; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (!r[j].is_zero() && mb.product(i, j) == static_cast<long>(k)) acc += a[i] * r[j];
            }
        }
        r[k] = -(c0inv * acc);
    }
    return r;
}

// One-forms sum_j A_j dx_j with series coefficients.
template <class Coef>
struct one_form {
    std::vector<series<Coef>> comp;

    std::size_t nvars() const { return comp.size(); }
    one_form &operator+=(const one_form &o) {
        require(comp.size() == o.comp.size(), "one-form: size mismatch");
        for (std::size_t j = 0; j < comp.size(); ++j) comp[j] += o.comp[j];
        return *this;
    }
    friend one_form operator+(one_form a, const one_form &b) { return a += b; }
    friend one_form operator-(one_form a, const one_form &b) {
        require(a.comp.size() == b.comp.size(), "one-form: size mismatch");
        for (std::size_t j = 0; j < a.comp.size(); ++j) a.comp[j] -= b.comp[j];
        return a;
    }
    friend bool operator==(const one_form &a, const one_form &b) { return a.comp == b.comp; }
    friend bool operator!=(const one_form &a, const one_form &b) { return !(a == b); }
};

using series_one_form = one_form<matrix>;
using scalar_one_form = one_form<scalar>;

// Exterior derivative of a series.
template <class Coef>
one_form<Coef> differential(const series<Coef> &f, derivation mode) {
    one_form<Coef> w;
    for (std::size_t j = 0; j < f.nvars(); ++j) w.comp.push_back(f.derivative(j, mode));
    return w;
}

// Location of a failed identity between series: variable pair and monomial.
struct series_defect {
    std::size_t i = 0;
    std::size_t j = 0;
    exponent beta;
    std::string describe() const {
        return "(i=" + std::to_string(i) + ", j=" + std::to_string(j) + ", beta=" + exponent_string(beta) + ")";
    }
};

// First monomial where theta ^ theta = sum_{i<j} [A_i, A_j] dx_i ^ dx_j is
// nonzero, if any.
inline std::optional<series_defect> wedge_defect(const series_one_form &w) {
    for (std::size_t i = 0; i < w.nvars(); ++i) {
        for (std::size_t j = i + 1; j < w.nvars(); ++j) {
            series_endo c = bracket(w.comp[i], w.comp[j]);
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (!c[k].is_zero()) return series_defect{i, j, c.monomial(k)};
            }
        }
    }
    return std::nullopt;
}

// First monomial where d_i A_j != d_j A_i, if any. In plain mode only the
// degrees known exactly (below order - 1) are compared.
template <class Coef>
std::optional<series_defect> closedness_defect(const one_form<Coef> &w, derivation mode) {
    for (std::size_t i = 0; i < w.nvars(); ++i) {
        for (std::size_t j = i + 1; j < w.nvars(); ++j) {
            auto c = w.comp[j].derivative(i, mode) - w.comp[i].derivative(j, mode);
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (mode == derivation::plain && c.basis()->degree(k) >= c.order() - 1) continue;
                if (!detail::coef_is_zero(c[k])) return series_defect{i, j, c.monomial(k)};
            }
        }
    }
    return std::nullopt;
}

// Primitive G with dG = w and G(0) = 0.
//
// In log mode the constant part of w would integrate to a multiple of u_j,
// which is not a series: it raises ConstantObstruction when
// require_zero_constant is set, and is ignored otherwise. Failure of
// integrability raises NotClosed with the offending (i, j, beta).
template <class Coef>
series<Coef> integrate(const one_form<Coef> &w, derivation mode, bool require_zero_constant) {
    require(w.nvars() >= 1, "integrate: empty one-form");
    const auto &first = w.comp[0];
    for (const auto &c : w.comp) require(c.basis() == first.basis(), "integrate: truncation mismatch");
    const auto &mb = *first.basis();
    series<Coef> g(first.basis(), first.zero_coef());
    if (mode == derivation::log) {
        for (std::size_t j = 0; j < w.nvars(); ++j) {
            if (!detail::coef_is_zero(w.comp[j][0]) && require_zero_constant) {
                throw check_failure("ConstantObstruction",
                                    "component " + std::to_string(j) + " has a nonzero constant term");
            }
        }
        for (std::size_t k = 1; k < mb.size(); ++k) {
            const exponent &e = mb.at(k);
            std::size_t lead = w.nvars();
            for (std::size_t j = 0; j < w.nvars(); ++j) {
                if (e[j] != 0) {
                    lead = j;
                    break;
                }
            }
            Coef value = w.comp[lead][k] * (scalar::tp() * scalar(e[lead])).inverse();
            for (std::size_t j = 0; j < w.nvars(); ++j) {
                Coef expect = e[j] == 0 ? first.zero_coef() : Coef(value * (scalar::tp() * scalar(e[j])));
                if (w.comp[j][k] != expect) {
                    throw check_failure("NotClosed", "one-form is not closed at " +
                                                         series_defect{lead, j, e}.describe());
                }
            }
            g[k] = value;
        }
        return g;
    }
    // Plain coordinates: G_b = (A_j)_{b - e_j} / b_j for any j with b_j > 0.
    for (std::size_t k = 1; k < mb.size(); ++k) {
        const exponent &e = mb.at(k);
        bool have = false;
        Coef value = first.zero_coef();
        std::size_t lead = 0;
        for (std::size_t j = 0; j < w.nvars(); ++j) {
            if (e[j] == 0) continue;
            exponent f = e;
            f[j] -= 1;
            Coef cand = w.comp[j].coeff(f) * scalar::frac(1, e[j]);
            if (!have) {
                value = cand;
                lead = j;
                have = true;
            } else if (cand != value) {
                throw check_failure("NotClosed", "one-form is not closed at " + series_defect{lead, j, e}.describe());
            }
        }
        g[k] = value;
    }
    return g;
}

// Substitution f(s) with s_j = g_j(q), each g_j without constant term; the
// result is a series in q truncated at the order of g.
template <class Coef>
series<Coef> compose(const series<Coef> &f, const std::vector<series_scalar> &g) {
    require(g.size() == f.nvars(), "compose: wrong number of substitutions");
    require(!g.empty(), "compose: no substitutions");
    for (const auto &gj : g) {
        require(gj.constant_term().is_zero(), "compose: substitution must vanish at the origin");
        require(gj.basis() == g[0].basis(), "compose: truncation mismatch");
    }
    const auto &mb = *f.basis();
    const int out_order = g[0].order();
    std::vector<series_scalar> powers(mb.size());
    series<Coef> r(g[0].basis(), f.zero_coef());
    for (std::size_t k = 0; k < mb.size(); ++k) {
        const exponent &e = mb.at(k);
        if (k == 0) {
            powers[k] = series_scalar::constant(g[0].nvars(), out_order, scalar(1), scalar());
        } else {
            std::size_t j = 0;
            while (e[j] == 0) ++j;
            exponent prev = e;
            prev[j] -= 1;
            powers[k] = powers[static_cast<std::size_t>(mb.find(prev))] * g[j];
        }
        if (detail::coef_is_zero(f[k])) continue;
        for (std::size_t m = 0; m < powers[k].size(); ++m) {
            if (!powers[k][m].is_zero()) r[m] += f[k] * powers[k][m];
        }
    }
    return r;
}

// Inverse of a coordinate change q = f(s) with f(0) = 0 and invertible
// Jacobian: returns g with f(g(q)) = q to the truncation order.
inline std::vector<series_scalar> reversion(const std::vector<series_scalar> &f) {
    const std::size_t n = f.size();
    require(n >= 1, "reversion: empty map");
    for (const auto &fj : f) {
        if (!fj.constant_term().is_zero()) {
            throw check_failure("NotVanishing", "coordinate change does not vanish at the origin");
        }
    }
    matrix jac(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            exponent e(n, 0);
            e[k] = 1;
            jac(i, k) = f[i].coeff(e);
        }
    }
    auto jinv = try_inverse(jac);
    if (!jinv) throw check_failure("SingularJacobian", "Jacobian of the coordinate change is singular");
    const int order = f[0].order();
    std::vector<series_scalar> q(n, make_series_scalar(n, order));
    for (std::size_t j = 0; j < n; ++j) {
        exponent e(n, 0);
        e[j] = 1;
        if (order >= 1) q[j].set(e, scalar(1));
    }
    // Fixed point g = J^{-1} (q - (f(g) - J g)); each pass fixes one degree.
    std::vector<series_scalar> g(n, make_series_scalar(n, order));
    for (int pass = 0; pass <= order; ++pass) {
        std::vector<series_scalar> fg(n);
        for (std::size_t i = 0; i < n; ++i) fg[i] = compose(f[i], g);
        std::vector<series_scalar> next(n, make_series_scalar(n, order));
        for (std::size_t i = 0; i < n; ++i) {
            series_scalar nonlinear = fg[i];
            for (std::size_t k = 0; k < n; ++k) nonlinear -= g[k] * jac(i, k);
            series_scalar rhs = q[i] - nonlinear;
            for (std::size_t k = 0; k < n; ++k) next[k] += rhs * (*jinv)(k, i);
        }
        g = std::move(next);
    }
    return g;
}

} // namespace hodge
