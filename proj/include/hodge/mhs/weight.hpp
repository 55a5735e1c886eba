#pragma once

// Monodromy weight filtrations of nilpotent endomorphisms, absolute and
// relative to a given increasing filtration.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <hodge/exactalg/filtration.hpp>
#include <hodge/report.hpp>

namespace hodge {

// A Jordan chain v, Nv, ..., N^{length-1} v with N^length v = 0.
struct jordan_chain {
    matrix top;
    int length = 0;
};

inline int nilpotency_index(const matrix &n) {
    require(n.is_square(), "nilpotent endomorphism must be square");
    const std::size_t d = n.rows();
    matrix p = matrix::identity(d);
    for (std::size_t k = 0; k <= d; ++k) {
        if (p.is_zero()) return static_cast<int>(k);
        p = p * n;
    }
    throw validation_error("endomorphism is not nilpotent");
}

inline matrix matrix_power(const matrix &a, int k) {
    matrix p = matrix::identity(a.rows());
    for (int t = 0; t < k; ++t) p = p * a;
    return p;
}

// Jordan chains of a nilpotent N, longest first. The tops are chosen from
// the canonical bases of the kernels of the powers of N.
inline std::vector<jordan_chain> jordan_chains(const matrix &n) {
    const int m = nilpotency_index(n);
    const std::size_t d = n.rows();
    std::vector<subspace> ker(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) ker[static_cast<std::size_t>(i)] = subspace::kernel_of(matrix_power(n, i));
    std::vector<jordan_chain> chains;
    for (int i = m; i >= 1; --i) {
        std::vector<subspace> parts{ker[static_cast<std::size_t>(i - 1)]};
        for (const auto &c : chains) {
            parts.push_back(subspace(d, matrix_power(n, c.length - i) * c.top));
        }
        subspace s = sum_of(d, parts);
        matrix extra = s.complement_in(ker[static_cast<std::size_t>(i)]);
        for (std::size_t c = 0; c < extra.cols(); ++c) chains.push_back({extra.col(c), i});
    }
    return chains;
}

// Vectors with assigned weights; the filtration they generate has W_j equal
// to the span of the vectors of weight <= j.
struct weighted_vectors {
    std::size_t ambient = 0;
    std::vector<std::pair<matrix, int>> items;

    increasing_filtration filtration() const {
        std::map<int, std::vector<matrix>> by;
        for (const auto &[v, w] : items) by[w].push_back(v);
        std::map<int, subspace> levels;
        std::vector<matrix> acc;
        for (auto &[w, vs] : by) {
            acc.insert(acc.end(), vs.begin(), vs.end());
            levels.emplace(w, subspace::span(ambient, acc));
        }
        return increasing_filtration(ambient, std::move(levels));
    }
    // Span of the vectors of weight <= j.
    subspace level(int j) const {
        std::vector<matrix> acc;
        for (const auto &[v, w] : items) {
            if (w <= j) acc.push_back(v);
        }
        return subspace::span(ambient, acc);
    }
};

inline void add_chain(weighted_vectors &out, const matrix &n, const matrix &top, int length, int center) {
    matrix v = top;
    for (int t = 0; t < length; ++t) {
        out.items.emplace_back(v, center + (length - 1) - 2 * t);
        v = n * v;
    }
}

// Checks the two defining properties of W(N) centered at `center`:
// N W_j in W_{j-2}, and N^l : Gr_{center+l} -> Gr_{center-l} bijective.
inline report verify_monodromy_filtration(const matrix &n, const increasing_filtration &w, int center) {
    report r;
    bool lowers = true;
    std::string where;
    for (const auto &[j, s] : w.levels()) {
        if (!w.at(j - 2).contains(n * s.basis())) {
            lowers = false;
            where = "j=" + std::to_string(j);
            break;
        }
    }
    r.add("N lowers weight by two", lowers, where);
    bool iso = true;
    std::string bad;
    const int span = std::max(w.highest() - center, center - w.lowest()) + 1;
    for (int l = 0; l <= span && iso; ++l) {
        subspace hi = w.at(center + l), hi1 = w.at(center + l - 1);
        subspace lo = w.at(center - l), lo1 = w.at(center - l - 1);
        matrix nl = matrix_power(n, l);
        bool ok = (hi.dim() - hi1.dim()) == (lo.dim() - lo1.dim());
        ok = ok && lo.contains(nl * hi.basis());
        ok = ok && (hi.image(nl) + lo1).contains(lo);
        if (!ok) {
            iso = false;
            bad = "l=" + std::to_string(l);
        }
    }
    r.add("N^l is an isomorphism Gr_{c+l} -> Gr_{c-l}", iso, bad);
    return r;
}

// W(N) centered at `center`: a vector N^t v of a chain of length l+1 gets
// weight center + l - 2t.
inline increasing_filtration monodromy_weight_filtration(const matrix &n, int center = 0) {
    weighted_vectors out{n.rows(), {}};
    for (const auto &c : jordan_chains(n)) add_chain(out, n, c.top, c.length, center);
    increasing_filtration w = out.filtration();
    if (n.rows() == 0) return w;
    report r = verify_monodromy_filtration(n, w, center);
    if (!r.pass()) throw check_failure("InternalError", "monodromy filtration failed its own verification");
    return w;
}

// Chains of the map induced by N on hi/lo, with tops lifted to V.
inline std::vector<jordan_chain> quotient_chains(const matrix &n, const subspace &lo, const subspace &hi) {
    const std::size_t d = n.rows();
    matrix c = lo.complement_in(hi);
    const std::size_t r = c.cols();
    if (r == 0) return {};
    matrix sys = matrix::hcat(lo.basis(), c);
    auto coords = solve(sys, n * c);
    require(coords.has_value(), "N does not preserve the filtration");
    matrix nbar(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) nbar(i, j) = (*coords)(lo.dim() + i, j);
    }
    std::vector<jordan_chain> out;
    for (const auto &ch : jordan_chains(nbar)) out.push_back({c * ch.top, ch.length});
    (void)d;
    return out;
}

// Options used to exercise independence of the result from choices made
// along the way.
struct relative_weight_options {
    bool reverse_chain_order = false;
    std::mt19937_64 *perturb = nullptr;
};

inline void check_preserves(const matrix &n, const increasing_filtration &w) {
    require(n.rows() == w.ambient() && n.is_square(), "N has the wrong size");
    for (const auto &[k, s] : w.levels()) {
        require(s.contains(n * s.basis()), "N does not preserve W_" + std::to_string(k));
    }
}

// Checks the defining properties of the relative weight filtration M:
// N M_j in M_{j-2}, and M induces W(N)[-k] on every Gr^W_k.
inline report verify_relative_filtration(const matrix &n, const increasing_filtration &w,
                                         const increasing_filtration &m) {
    report r;
    bool lowers = true;
    std::string where;
    for (const auto &[j, s] : m.levels()) {
        if (!m.at(j - 2).contains(n * s.basis())) {
            lowers = false;
            where = "j=" + std::to_string(j);
            break;
        }
    }
    r.add("N M_j lies in M_{j-2}", lowers, where);
    bool induced = true;
    std::string bad;
    for (const auto &[k, wk] : w.levels()) {
        subspace wk1 = w.at(k - 1);
        weighted_vectors expect{n.rows(), {}};
        for (const auto &c : quotient_chains(n, wk1, wk)) add_chain(expect, n, c.top, c.length, k);
        for (int j = m.lowest() - 1; j <= m.highest() + 1 && induced; ++j) {
            subspace lhs = m.at(j).intersect(wk) + wk1;
            // Lifts of W(N|Gr_k)[-k]_j: chain vectors of weight <= j, mod W_{k-1}.
            subspace rhs = expect.level(j) + wk1;
            if (lhs != rhs) {
                induced = false;
                bad = "k=" + std::to_string(k) + ", j=" + std::to_string(j);
            }
        }
    }
    r.add("M induces W(N)[-k] on each Gr^W_k", induced, bad);
    return r;
}

// The relative weight filtration M = relW(N, W), built weight by weight from
// the bottom of W. Throws DoesNotExist with a certificate when some Jordan
// chain of N on Gr^W_k admits no lift compatible with the part already built.
inline increasing_filtration relative_weight_filtration(const matrix &n, const increasing_filtration &w,
                                                        const relative_weight_options &opt = {}) {
    check_preserves(n, w);
    nilpotency_index(n);
    const std::size_t d = n.rows();
    weighted_vectors built{d, {}};
    for (const auto &[k, wk] : w.levels()) {
        subspace below = w.at(k - 1);
        auto chains = quotient_chains(n, below, wk);
        if (opt.reverse_chain_order) std::reverse(chains.begin(), chains.end());
        weighted_vectors added{d, {}};
        for (const auto &c : chains) {
            const int l = c.length - 1;
            matrix top = c.top;
            if (!below.is_zero()) {
                matrix nl1 = matrix_power(n, l + 1);
                subspace target = built.level(k - l - 2);
                matrix ann = target.annihilator();
                matrix lhs = ann * nl1 * below.basis();
                matrix rhs = -(ann * nl1 * top);
                auto sol = solve(lhs, rhs);
                if (!sol) {
                    throw check_failure("DoesNotExist",
                                        "weight " + std::to_string(k) + ", chain of length " +
                                            std::to_string(c.length) + ", top " + top.transpose().to_string() +
                                            ": N^" + std::to_string(l + 1) + " of every lift misses M_" +
                                            std::to_string(k - l - 2));
                }
                matrix coef = *sol;
                if (opt.perturb) {
                    matrix ker = kernel(lhs);
                    std::uniform_int_distribution<int> dist(-2, 2);
                    for (std::size_t t = 0; t < ker.cols(); ++t) {
                        matrix add = ker.col(t) * scalar(dist(*opt.perturb));
                        coef += add;
                    }
                }
                top += below.basis() * coef;
            }
            add_chain(added, n, top, c.length, k);
        }
        built.items.insert(built.items.end(), added.items.begin(), added.items.end());
    }
    increasing_filtration m = built.filtration();
    report r = verify_relative_filtration(n, w, m);
    if (!r.pass()) {
        throw check_failure("DoesNotExist", "candidate fails verification: " + r.first_failure()->name);
    }
    return m;
}

} // namespace hodge
