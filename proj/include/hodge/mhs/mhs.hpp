#pragma once

// Mixed Hodge structures on V = C^n with rational structure Q^n: validation,
// the Deligne bigrading, the induced bigrading of gl(V), gradings of the
// weight filtration and the group exp(Lie_{-1}) acting on them.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <hodge/exactalg/filtration.hpp>
#include <hodge/report.hpp>

namespace hodge {

struct mixed_hodge_structure {
    decreasing_filtration F;
    increasing_filtration W;

    std::size_t dim() const { return F.ambient(); }
};

using bidegree = std::pair<int, int>;
// Nonzero pieces I^{p,q} of a bigrading, keyed by (p, q).
using bigrading = std::map<bidegree, subspace>;

inline std::string bidegree_string(const bidegree &b) {
    return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")";
}

// Hodge numbers h^{p,q} of the graded pieces.
struct mhs_summary {
    std::map<bidegree, std::size_t> hodge_numbers;
};

inline void check_shapes(const mixed_hodge_structure &m) {
    require(m.F.ambient() == m.W.ambient(), "F and W live on different spaces");
    require(m.F.is_exhaustive(), "Hodge filtration is not exhaustive");
    require(m.W.is_exhaustive(), "weight filtration is not exhaustive");
    require(m.W.is_conj_stable(), "weight filtration is not defined over the rationals");
}

// Checks that F induces a pure Hodge structure of weight k on every Gr^W_k.
// Throws NotPure naming the first failing (k, p).
inline mhs_summary validate_mhs(const mixed_hodge_structure &m) {
    check_shapes(m);
    mhs_summary out;
    const std::size_t n = m.dim();
    if (n == 0) return out;
    const int flo = m.F.lowest();
    const int fhi = m.F.highest();
    decreasing_filtration fbar = m.F.conj();
    for (int k = m.W.lowest(); k <= m.W.highest(); ++k) {
        subspace wk = m.W.at(k);
        subspace wk1 = m.W.at(k - 1);
        if (wk == wk1) continue;
        const int plo = std::min(flo, k - fhi) - 1;
        const int phi = std::max(fhi, k - flo) + 1;
        std::map<int, std::size_t> dims;
        for (int p = plo; p <= phi + 1; ++p) {
            subspace a = m.F.at(p).intersect(wk) + wk1;
            subspace b = fbar.at(k - p + 1).intersect(wk) + wk1;
            if (p <= phi && ((a + b) != wk || a.intersect(b) != wk1)) {
                throw check_failure("NotPure", "k=" + std::to_string(k) + ", p=" + std::to_string(p));
            }
            dims[p] = a.dim() - wk1.dim();
        }
        for (int p = plo; p <= phi; ++p) {
            std::size_t h = dims[p] - dims[p + 1];
            if (h) out.hodge_numbers[{p, k - p}] = h;
        }
    }
    return out;
}

// Deligne's splitting through the closed formula
// I^{p,q} = F^p & W_{p+q} & (conj F^q & W_{p+q} + sum_{j>=1} conj F^{q-j} & W_{p+q-j-1}).
inline bigrading deligne_bigrading(const mixed_hodge_structure &m) {
    validate_mhs(m);
    bigrading out;
    const std::size_t n = m.dim();
    if (n == 0) return out;
    decreasing_filtration fbar = m.F.conj();
    const int wlo = m.W.lowest();
    for (int p = m.F.lowest(); p <= m.F.highest(); ++p) {
        for (int k = wlo; k <= m.W.highest(); ++k) {
            const int q = k - p;
            subspace wk = m.W.at(k);
            subspace inner = fbar.at(q).intersect(wk);
            for (int j = 1; k - j - 1 >= wlo; ++j) {
                inner = inner + fbar.at(q - j).intersect(m.W.at(k - j - 1));
            }
            subspace piece = m.F.at(p).intersect(wk).intersect(inner);
            if (!piece.is_zero()) out.emplace(bidegree{p, q}, piece);
        }
    }
    return out;
}

inline subspace sum_where(std::size_t n, const bigrading &I, const auto &pred) {
    std::vector<subspace> parts;
    for (const auto &[pq, s] : I) {
        if (pred(pq.first, pq.second)) parts.push_back(s);
    }
    return sum_of(n, parts);
}

// Verifies the defining properties of a bigrading against (F, W):
// V is the direct sum, F^p and W_k are recovered, and
// conj I^{p,q} = I^{q,p} modulo the sum of I^{r,s} with r < q, s < p.
inline report verify_bigrading(const mixed_hodge_structure &m, const bigrading &I) {
    report r;
    const std::size_t n = m.dim();
    std::vector<subspace> parts;
    for (const auto &[pq, s] : I) parts.push_back(s);
    r.add("direct sum equals V", is_direct_sum(n, parts) && sum_of(n, parts).is_full());
    bool f_ok = true;
    std::string f_detail;
    for (int p = m.F.lowest() - 1; p <= m.F.highest() + 1; ++p) {
        if (sum_where(n, I, [&](int a, int) { return a >= p; }) != m.F.at(p)) {
            f_ok = false;
            f_detail = "p=" + std::to_string(p);
            break;
        }
    }
    r.add("F^p is the sum of I^{r,s} with r >= p", f_ok, f_detail);
    bool w_ok = true;
    std::string w_detail;
    for (int k = m.W.lowest() - 1; k <= m.W.highest() + 1; ++k) {
        if (sum_where(n, I, [&](int a, int b) { return a + b <= k; }) != m.W.at(k)) {
            w_ok = false;
            w_detail = "k=" + std::to_string(k);
            break;
        }
    }
    r.add("W_k is the sum of I^{r,s} with r + s <= k", w_ok, w_detail);
    bool c_ok = true;
    std::string c_detail;
    for (const auto &[pq, s] : I) {
        const int p = pq.first, q = pq.second;
        subspace lower = sum_where(n, I, [&](int a, int b) { return a < q && b < p; });
        auto it = I.find({q, p});
        subspace mirror = it == I.end() ? subspace::zero(n) : it->second;
        if (s.conj() + lower != mirror + lower) {
            c_ok = false;
            c_detail = "at " + bidegree_string(pq);
            break;
        }
    }
    r.add("conjugation swaps I^{p,q} and I^{q,p} modulo lower terms", c_ok, c_detail);
    return r;
}

// A basis of V adapted to a bigrading: the columns are grouped by bidegree,
// with the inverse matrix precomputed. Components of endomorphisms with
// respect to the induced bigrading of gl(V) are read off in this basis.
class adapted_frame {
public:
    adapted_frame() = default;
    explicit adapted_frame(const bigrading &I) {
        require(!I.empty(), "adapted frame of an empty bigrading");
        n_ = I.begin()->second.ambient();
        std::vector<matrix> cols;
        for (const auto &[pq, s] : I) {
            for (std::size_t c = 0; c < s.dim(); ++c) {
                cols.push_back(s.basis().col(c));
                labels_.push_back(pq);
            }
        }
        require(cols.size() == n_, "bigrading does not split V");
        basis_ = matrix::from_columns(n_, cols);
        auto inv = try_inverse(basis_);
        require(inv.has_value(), "bigrading pieces are not independent");
        inverse_ = *inv;
    }

    std::size_t dim() const noexcept { return n_; }
    const matrix &basis() const noexcept { return basis_; }
    const matrix &basis_inverse() const noexcept { return inverse_; }
    const std::vector<bidegree> &labels() const noexcept { return labels_; }

    // Coordinates B^{-1} X B of an endomorphism in the adapted basis.
    matrix to_frame(const matrix &x) const { return inverse_ * x * basis_; }
    matrix from_frame(const matrix &y) const { return basis_ * y * inverse_; }

    // Component of X in gl^{r,s}.
    matrix component(const matrix &x, int r, int s) const {
        return filtered(x, [&](const bidegree &row, const bidegree &col) {
            return row.first == col.first + r && row.second == col.second + s;
        });
    }
    // Component mapping U^p into U^{p+a} for every p, where U^p is the sum
    // of the I^{p,q} over q.
    matrix p_component(const matrix &x, int a) const {
        return filtered(x, [&](const bidegree &row, const bidegree &col) { return row.first == col.first + a; });
    }
    // All nonzero (r, s) components of X.
    std::map<bidegree, matrix> components(const matrix &x) const {
        matrix y = to_frame(x);
        std::map<bidegree, matrix> out;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (y(i, j).is_zero()) continue;
                bidegree rs{labels_[i].first - labels_[j].first, labels_[i].second - labels_[j].second};
                auto it = out.find(rs);
                if (it == out.end()) it = out.emplace(rs, matrix(n_, n_)).first;
                it->second(i, j) = y(i, j);
            }
        }
        for (auto &[rs, m] : out) m = from_frame(m);
        return out;
    }
    // The grading Y acting on I^{p,q} by p + q.
    matrix weight_grading() const {
        matrix d(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) d(i, i) = scalar(labels_[i].first + labels_[i].second);
        return from_frame(d);
    }
    // Projector onto U^p along the other U^{p'}.
    matrix u_projector(int p) const {
        matrix d(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (labels_[i].first == p) d(i, i) = scalar(1);
        }
        return from_frame(d);
    }
    std::vector<int> u_indices() const {
        std::vector<int> ps;
        for (const auto &l : labels_) {
            if (ps.empty() || ps.back() != l.first) ps.push_back(l.first);
        }
        return ps;
    }

private:
    std::size_t n_ = 0;
    matrix basis_;
    matrix inverse_;
    std::vector<bidegree> labels_;

    template <class Pred>
    matrix filtered(const matrix &x, Pred keep) const {
        matrix y = to_frame(x);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (!y(i, j).is_zero() && !keep(labels_[i], labels_[j])) y(i, j) = scalar();
            }
        }
        return from_frame(y);
    }
};

// The pieces U^p = sum_q I^{p,q}.
inline std::map<int, subspace> u_decomposition(const bigrading &I) {
    std::map<int, std::vector<subspace>> parts;
    std::size_t n = 0;
    for (const auto &[pq, s] : I) {
        parts[pq.first].push_back(s);
        n = s.ambient();
    }
    std::map<int, subspace> out;
    for (auto &[p, v] : parts) out.emplace(p, sum_of(n, v));
    return out;
}

// The induced bigrading of gl(V): gl^{r,s} maps I^{p,q} into I^{p+r,q+s}.
// Subspaces live in C^{n*n} through row-major flattening.
inline std::map<bidegree, subspace> gl_bigrading(const bigrading &I) {
    adapted_frame fr(I);
    const std::size_t n = fr.dim();
    std::map<bidegree, std::vector<matrix>> gens;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bidegree rs{fr.labels()[i].first - fr.labels()[j].first, fr.labels()[i].second - fr.labels()[j].second};
            gens[rs].push_back(fr.from_frame(matrix::unit(n, n, i, j)).vectorize());
        }
    }
    std::map<bidegree, subspace> out;
    for (auto &[rs, v] : gens) out.emplace(rs, subspace::span(n * n, v));
    return out;
}

// A grading of W: a semisimple endomorphism with integer eigenvalues whose
// eigenspaces E_k satisfy W_k = W_{k-1} + E_k (direct).
struct grading {
    matrix Y;
    std::map<int, subspace> eigenspaces;
};

inline grading grading_from_bigrading(const bigrading &I) {
    grading g;
    adapted_frame fr(I);
    g.Y = fr.weight_grading();
    std::map<int, std::vector<subspace>> parts;
    for (const auto &[pq, s] : I) parts[pq.first + pq.second].push_back(s);
    for (auto &[k, v] : parts) g.eigenspaces.emplace(k, sum_of(fr.dim(), v));
    return g;
}

inline grading grading_from_mhs(const mixed_hodge_structure &m) { return grading_from_bigrading(deligne_bigrading(m)); }

// Builds a grading from its eigenspaces, which must split V.
inline grading grading_from_eigenspaces(const std::map<int, subspace> &e) {
    bigrading fake;
    for (const auto &[k, s] : e) {
        if (!s.is_zero()) fake.emplace(bidegree{k, 0}, s);
    }
    grading g;
    g.Y = adapted_frame(fake).weight_grading();
    g.eigenspaces = e;
    return g;
}

inline bool grades(const grading &g, const increasing_filtration &W) {
    const std::size_t n = W.ambient();
    if (!is_direct_sum(n, [&] {
            std::vector<subspace> v;
            for (const auto &[k, s] : g.eigenspaces) v.push_back(s);
            return v;
        }())) {
        return false;
    }
    for (int k = W.lowest() - 1; k <= W.highest() + 1; ++k) {
        auto it = g.eigenspaces.find(k);
        subspace ek = it == g.eigenspaces.end() ? subspace::zero(n) : it->second;
        subspace wk1 = W.at(k - 1);
        if (ek.intersect(wk1).dim() != 0 || ek + wk1 != W.at(k)) return false;
    }
    for (const auto &[k, s] : g.eigenspaces) {
        if (!s.is_zero() && (k < W.lowest() || k > W.highest())) return false;
    }
    return true;
}

// Adapted basis of a filtration W: columns grouped by weight, each group
// completing W_{k-1} to W_k.
struct weight_frame {
    matrix basis;
    std::vector<int> weights;
};

inline weight_frame frame_of(const increasing_filtration &W) {
    weight_frame out;
    const std::size_t n = W.ambient();
    std::vector<matrix> cols;
    for (const auto &[k, s] : W.levels()) {
        matrix extra = W.at(k - 1).complement_in(s);
        for (std::size_t c = 0; c < extra.cols(); ++c) {
            cols.push_back(extra.col(c));
            out.weights.push_back(k);
        }
    }
    out.basis = matrix::from_columns(n, cols);
    return out;
}

// Lie_{-1}(W) = {a : a W_k in W_{k-1}} as a subspace of gl(V).
inline subspace lie_minus1(const increasing_filtration &W) {
    const std::size_t n = W.ambient();
    weight_frame fr = frame_of(W);
    matrix inv = inverse(fr.basis);
    std::vector<matrix> gens;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (fr.weights[i] < fr.weights[j]) {
                gens.push_back((fr.basis * matrix::unit(n, n, i, j) * inv).vectorize());
            }
        }
    }
    return subspace::span(n * n, gens);
}

inline bool in_lie_minus1(const matrix &a, const increasing_filtration &W) {
    for (const auto &[k, s] : W.levels()) {
        if (!W.at(k - 1).contains(a * s.basis())) return false;
    }
    return true;
}

// The unique g in exp(Lie_{-1}(W)) with g Y1 g^{-1} = Y2. Throws NoSolution
// when either grading fails to grade W.
inline matrix grading_transitivity_check(const grading &y1, const grading &y2, const increasing_filtration &W) {
    if (!grades(y1, W) || !grades(y2, W)) {
        throw check_failure("NoSolution", "one of the gradings does not grade W");
    }
    const std::size_t n = W.ambient();
    std::vector<matrix> src, dst;
    for (const auto &[k, e1] : y1.eigenspaces) {
        if (e1.is_zero()) continue;
        const subspace &e2 = y2.eigenspaces.at(k);
        matrix sys = matrix::hcat(e2.basis(), W.at(k - 1).basis());
        for (std::size_t c = 0; c < e1.dim(); ++c) {
            matrix v = e1.basis().col(c);
            auto coef = solve(sys, v);
            require(coef.has_value(), "grading eigenspace not inside W_k");
            matrix w(n, 1);
            for (std::size_t t = 0; t < e2.dim(); ++t) {
                matrix add = e2.basis().col(t) * (*coef)(t, 0);
                w += add;
            }
            src.push_back(v);
            dst.push_back(w);
        }
    }
    matrix g = matrix::from_columns(n, dst) * inverse(matrix::from_columns(n, src));
    if (g * y1.Y != y2.Y * g || !in_lie_minus1(g - matrix::identity(n), W)) {
        throw check_failure("NoSolution", "constructed element does not conjugate the gradings");
    }
    return g;
}

// Both sides of the filtration identity
// sum_{s<=q} I^{r,s} = sum_k W_k & F^{k-q}, together with the version
// using the bigrading of (conj F, W).
struct appendix_identity_result {
    subspace from_bigrading;
    subspace from_conjugate_bigrading;
    subspace from_filtrations;
    bool holds() const { return from_bigrading == from_filtrations && from_conjugate_bigrading == from_filtrations; }
};

inline appendix_identity_result appendix_filtration_identity(const mixed_hodge_structure &m, int q) {
    const std::size_t n = m.dim();
    bigrading I = deligne_bigrading(m);
    appendix_identity_result out;
    out.from_bigrading = sum_where(n, I, [&](int, int s) { return s <= q; });
    // The bigrading of (conj F, W) is conj I^{s,r} in bidegree (r, s).
    std::vector<subspace> bars;
    for (const auto &[pq, s] : I) {
        if (pq.first <= q) bars.push_back(s.conj());
    }
    out.from_conjugate_bigrading = sum_of(n, bars);
    std::vector<subspace> parts;
    for (int k = m.W.lowest(); k <= m.W.highest(); ++k) parts.push_back(m.W.at(k).intersect(m.F.at(k - q)));
    out.from_filtrations = sum_of(n, parts);
    return out;
}

} // namespace hodge
