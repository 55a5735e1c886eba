#pragma once

// Seeded generators for random test data: mixed Hodge structures with known
// bigradings, nilpotent endomorphisms of prescribed Jordan type, and
// Gromov-Witten potentials. All sampling uses std::mt19937_64 so that a seed
// determines the corpus exactly.

#include <random>
#include <vector>

#include <hodge/amodel/amodel.hpp>
#include <hodge/mhs/mhs.hpp>

namespace hodge::corpus {

using rng_t = std::mt19937_64;

inline int uniform(rng_t &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline scalar small_rational(rng_t &rng, int range = 3) {
    int num = uniform(rng, -range, range);
    int den = uniform(rng, 1, 2);
    return scalar::frac(num, den);
}
inline scalar small_gaussian(rng_t &rng, int range = 2) {
    return scalar(rational(uniform(rng, -range, range)), rational(uniform(rng, -range, range)));
}

inline matrix random_rational_matrix(rng_t &rng, std::size_t r, std::size_t c, int range = 3) {
    matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) m(i, j) = scalar(uniform(rng, -range, range));
    }
    return m;
}

inline matrix random_invertible(rng_t &rng, std::size_t n) {
    for (;;) {
        matrix m = random_rational_matrix(rng, n, n, 2);
        if (try_inverse(m)) return m;
    }
}

// A mixed Hodge structure together with the bigrading it was built from.
struct mhs_sample {
    mixed_hodge_structure m;
    bigrading expected;
};

inline mixed_hodge_structure mhs_from_bigrading(const bigrading &I) {
    const std::size_t n = I.begin()->second.ambient();
    std::map<int, std::vector<subspace>> fp, wk;
    int pmin = 1000, pmax = -1000, kmin = 1000, kmax = -1000;
    for (const auto &[pq, s] : I) {
        pmin = std::min(pmin, pq.first);
        pmax = std::max(pmax, pq.first);
        kmin = std::min(kmin, pq.first + pq.second);
        kmax = std::max(kmax, pq.first + pq.second);
    }
    std::map<int, subspace> f, w;
    for (int p = pmin; p <= pmax; ++p) f.emplace(p, sum_where(n, I, [&](int a, int) { return a >= p; }));
    for (int k = kmin; k <= kmax; ++k) w.emplace(k, sum_where(n, I, [&](int a, int b) { return a + b <= k; }));
    return {decreasing_filtration(n, f), increasing_filtration(n, w)};
}

// A split real mixed Hodge structure of dimension <= max_dim: conjugation
// exchanges I^{p,q} and I^{q,p} exactly.
inline bigrading random_split_bigrading(rng_t &rng, std::size_t max_dim) {
    for (;;) {
        std::vector<std::pair<bidegree, int>> pieces;
        std::size_t used = 0;
        const int count = uniform(rng, 1, 4);
        for (int t = 0; t < count; ++t) {
            int p = uniform(rng, 0, 3);
            int q = uniform(rng, 0, 3);
            if (p < q) std::swap(p, q);
            int h = uniform(rng, 1, 2);
            std::size_t need = static_cast<std::size_t>(p == q ? h : 2 * h);
            bool dup = false;
            for (auto &pc : pieces) dup = dup || pc.first == bidegree{p, q};
            if (dup || used + need > max_dim) continue;
            used += need;
            pieces.push_back({{p, q}, h});
        }
        if (used == 0) continue;
        matrix r = random_invertible(rng, used);
        bigrading I;
        std::size_t col = 0;
        for (const auto &[pq, h] : pieces) {
            std::vector<matrix> a, b;
            if (pq.first == pq.second) {
                for (int t = 0; t < h; ++t) a.push_back(r.col(col++));
                I.emplace(pq, subspace::span(used, a));
                continue;
            }
            for (int t = 0; t < h; ++t) {
                matrix re = r.col(col++);
                matrix im = r.col(col++);
                a.push_back(re + im * scalar::i());
                b.push_back(re - im * scalar::i());
            }
            I.emplace(pq, subspace::span(used, a));
            I.emplace(bidegree{pq.second, pq.first}, subspace::span(used, b));
        }
        return I;
    }
}

// Random element of the sum of gl^{r,s} over (r, s) accepted by `keep`,
// written in the frame adapted to I.
template <class Pred>
matrix random_graded_element(rng_t &rng, const bigrading &I, Pred keep, bool complex) {
    adapted_frame fr(I);
    const std::size_t n = fr.dim();
    matrix y(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto &a = fr.labels()[i];
            const auto &b = fr.labels()[j];
            if (keep(a.first - b.first, a.second - b.second)) {
                y(i, j) = complex ? small_gaussian(rng) : small_rational(rng);
            }
        }
    }
    return fr.from_frame(y);
}

// Random real element of Lie_{-1}(W).
inline matrix random_lie_minus1(rng_t &rng, const increasing_filtration &W) {
    weight_frame fr = frame_of(W);
    const std::size_t n = W.ambient();
    matrix y(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (fr.weights[i] < fr.weights[j]) y(i, j) = small_rational(rng);
        }
    }
    return fr.basis * y * inverse(fr.basis);
}

// A random mixed Hodge structure with known bigrading: start from a split
// structure, act by exp of a complex element of Lambda (which moves the
// bigrading along) and by exp of a real element of Lie_{-1}(W).
inline mhs_sample random_mhs(rng_t &rng, std::size_t max_dim) {
    bigrading split = random_split_bigrading(rng, max_dim);
    matrix lam = random_graded_element(rng, split, [](int r, int s) { return r < 0 && s < 0; }, true);
    mixed_hodge_structure base = mhs_from_bigrading(split);
    matrix g = random_lie_minus1(rng, base.W);
    matrix act = exp_nilpotent(g) * exp_nilpotent(lam);
    mhs_sample out;
    out.m = {base.F.image(act), base.W};
    for (const auto &[pq, s] : split) out.expected.emplace(pq, s.image(act));
    return out;
}

// A nilpotent matrix of random Jordan type, conjugated by a random rational
// change of basis.
inline matrix random_nilpotent(rng_t &rng, std::size_t dim) {
    matrix j(dim, dim);
    std::size_t start = 0;
    while (start < dim) {
        std::size_t len = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(dim - start)));
        for (std::size_t t = start + 1; t < start + len; ++t) j(t, t - 1) = scalar(1);
        start += len;
    }
    matrix p = random_invertible(rng, dim);
    return p * j * inverse(p);
}


// A Gromov-Witten potential whose classical couplings satisfy Hard
// Lefschetz for the sum of the N_j, with random instanton numbers.
inline gw_potential random_potential(rng_t &rng, std::size_t n, int order) {
    for (;;) {
        gw_potential p;
        p.n = n;
        p.order = order;
        p.kappa.assign(n, std::vector<std::vector<rational>>(n, std::vector<rational>(n)));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                for (std::size_t c = b; c < n; ++c) {
                    rational v(a == b && b == c ? uniform(rng, 1, 5) : uniform(rng, 0, 3));
                    for (auto [x, y, z] : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                                           std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
                        p.kappa[x][y][z] = v;
                    }
                }
            }
        }
        const auto &mb = *monomial_basis::get(n, order);
        for (std::size_t k = 1; k < mb.size(); ++k) {
            if (uniform(rng, 0, 2) == 0) continue;
            scalar v = small_rational(rng, 4);
            if (!v.is_zero()) p.instantons.emplace(mb.at(k), v.constant_re());
        }
        std::vector<matrix> ns = amodel_monodromy(p);
        matrix sum = ns[0];
        for (std::size_t j = 1; j < n; ++j) sum += ns[j];
        if (monodromy_weight_filtration(sum, 3) == amodel_weight_filtration(n)) return p;
    }
}

// Gamma_{-1} of a potential plus a term c q^b T_k -> T_l^v with k != l and no
// symmetric partner. Its Higgs field is not integrable and the product it
// defines is not associative. Needs n >= 2 and order >= 1.
inline series_endo broken_gamma1(rng_t &rng, const gw_potential &p) {
    require(p.n >= 2 && p.order >= 1, "broken instances need n >= 2 and order >= 1");
    amodel_space s{p.n};
    series_endo g = amodel_gamma1(p.n, phi_hol(p));
    const auto &mb = *monomial_basis::get(p.n, p.order);
    std::size_t beta = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(mb.size()) - 1));
    std::size_t k = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(p.n)));
    std::size_t l = k;
    while (l == k) l = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(p.n)));
    int c = uniform(rng, 1, 3) * (uniform(rng, 0, 1) ? 1 : -1);
    g[beta] += matrix::unit(s.dim(), s.dim(), s.tv(l), s.t(k)) * (scalar(c) * scalar::tp(-1));
    return g;
}

} // namespace hodge::corpus
