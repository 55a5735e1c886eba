#pragma once

// Nilpotent orbits and their holomorphic corrections near a normal crossing
// boundary, in the coordinates u_j with q_j = exp(tp u_j).
//
// Limit data (F_inf, W, N_1..N_n) determine the relative weight filtration
// relW = relW(N, W) of any N in the open cone, the bigrading of
// (F_inf, relW), the pieces U^p_inf, and the grading of gl(V) by
// P_a = {X : X U^p in U^{p+a}}. A germ is the untwisted period map
// e^{Gamma(q)} . F_inf with Gamma valued in q_inf = sum_{a<0} P_a. It is
// horizontal when
//   e^{-ad Gamma} Omega + e^{-Gamma} d e^{Gamma}  lies in P_{-1},
// with Omega = sum_j N_j du_j.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <hodge/higgs/higgs.hpp>
#include <hodge/mhs/weight.hpp>

namespace hodge {

struct limit_data {
    mixed_hodge_structure limit;
    increasing_filtration relW;
    std::vector<matrix> N;
    bigrading I;
    adapted_frame frame;
    std::map<int, subspace> U;

    std::size_t dim() const { return limit.dim(); }
    std::size_t nvars() const { return N.size(); }
    // Number of steps between the highest and the lowest U^p.
    int depth() const { return U.empty() ? 0 : U.rbegin()->first - U.begin()->first; }
    matrix component(const matrix &x, int a) const { return frame.p_component(x, a); }
    series_endo component(const series_endo &x, int a) const {
        return x.map([&](const matrix &c) { return c.is_zero() ? c : frame.p_component(c, a); });
    }
    bool hodge_tate() const {
        if (relW != limit.W) return false;
        for (const auto &[pq, s] : I) {
            if (pq.first != pq.second) return false;
        }
        return true;
    }
};

// Builds limit data and checks its hypotheses: relW exists and is the same
// at several interior points of the cone, (F_inf, relW) is a mixed Hodge
// structure and every N_j has type (-1,-1) for it.
inline limit_data make_limit_data(const decreasing_filtration &f_inf, const increasing_filtration &w,
                                  const std::vector<matrix> &n) {
    require(!n.empty(), "limit data needs at least one nilpotent");
    const std::size_t d = f_inf.ambient();
    matrix sum(d, d), weighted(d, d);
    for (std::size_t j = 0; j < n.size(); ++j) {
        require(n[j].rows() == d && n[j].is_square(), "nilpotent N_" + std::to_string(j) + " has the wrong size");
        for (std::size_t k = 0; k < j; ++k) {
            require(commutator(n[j], n[k]).is_zero(), "nilpotents do not commute");
        }
        sum += n[j];
        weighted += n[j] * scalar(static_cast<long>(j + 1));
    }
    limit_data ld;
    ld.relW = relative_weight_filtration(sum, w);
    if (n.size() > 1 && relative_weight_filtration(weighted, w) != ld.relW) {
        throw check_failure("NotConstantOnCone", "relative weight filtration varies over the monodromy cone");
    }
    ld.limit = {f_inf, w};
    ld.N = n;
    mixed_hodge_structure lim{f_inf, ld.relW};
    ld.I = deligne_bigrading(lim);
    ld.frame = adapted_frame(ld.I);
    ld.U = u_decomposition(ld.I);
    for (std::size_t j = 0; j < n.size(); ++j) {
        if (ld.frame.component(n[j], -1, -1) != n[j]) {
            throw check_failure("NotMorphism", "N_" + std::to_string(j) + " is not of type (-1,-1) for the limit");
        }
    }
    return ld;
}

struct orbit_germ {
    limit_data limit;
    series_endo gamma;

    std::size_t nvars() const { return gamma.nvars(); }
    int order() const { return gamma.order(); }
    series_endo gamma_part(int k) const { return limit.component(gamma, -k); }
};

inline series_one_form omega_form(const limit_data &ld, int order) {
    series_one_form w;
    const std::size_t d = ld.dim();
    for (const auto &nj : ld.N) w.comp.push_back(series_endo::constant(ld.nvars(), order, nj, matrix(d, d)));
    return w;
}

// One coefficient of a series one-form that should have vanished.
struct residual_entry {
    std::size_t direction = 0;
    exponent beta;
    int level = 0;
};

struct residual_report {
    series_one_form residual;
    std::vector<residual_entry> violations;
    bool pass() const { return violations.empty(); }
};

inline void check_germ(const orbit_germ &g) {
    require(endo_dim(g.gamma) == g.limit.dim(), "germ has the wrong dimension");
    require(g.gamma.nvars() == g.limit.nvars(), "germ has the wrong number of variables");
    require(g.gamma.constant_term().is_zero(), "Gamma must vanish at q = 0");
    for (std::size_t k = 0; k < g.gamma.size(); ++k) {
        matrix c = g.gamma[k];
        for (int a = 0; a <= g.limit.depth(); ++a) {
            if (!g.limit.component(c, a).is_zero()) {
                throw validation_error("Gamma is not valued in q_inf at " + exponent_string(g.gamma.monomial(k)));
            }
        }
    }
}

// e^{-ad Gamma} Omega + e^{-Gamma} d e^{Gamma}, with every component
// outside P_{-1} listed.
inline residual_report horizontality_residual(const orbit_germ &g) {
    check_germ(g);
    residual_report out;
    series_endo e = exp_nilpotent(g.gamma);
    series_endo einv = exp_nilpotent(-g.gamma);
    for (std::size_t j = 0; j < g.nvars(); ++j) {
        series_endo r = (einv * g.limit.N[j]) * e + einv * e.derivative(j, derivation::log);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].is_zero()) continue;
            for (int a = -g.limit.depth(); a <= g.limit.depth(); ++a) {
                if (a == -1) continue;
                if (!g.limit.component(r[k], a).is_zero()) out.violations.push_back({j, r.monomial(k), a});
            }
        }
        out.residual.comp.push_back(std::move(r));
    }
    return out;
}

// dX_{-1} = Omega + d Gamma_{-1}; raises NotFlat unless its components
// commute.
inline series_one_form higgs_oneform(const orbit_germ &g) {
    series_endo g1 = g.gamma_part(1);
    series_one_form w = omega_form(g.limit, g.order());
    for (std::size_t j = 0; j < g.nvars(); ++j) w.comp[j] += g1.derivative(j, derivation::log);
    if (auto bad = wedge_defect(w)) throw check_failure("NotFlat", bad->describe());
    return w;
}

struct reconstruct_options {
    // Visit the monomials of each degree in an order shuffled by this seed.
    std::optional<std::uint64_t> shuffle_seed;
    // Re-run with a shuffled order and compare.
    bool verify_uniqueness = true;
};

namespace detail {

// For every monomial b, the pairs (c, d) of indices with c + d = b, d != 0.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> divisor_pairs(const monomial_basis &mb) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(mb.size());
    for (std::size_t c = 0; c < mb.size(); ++c) {
        for (std::size_t d = 1; d < mb.size(); ++d) {
            long b = mb.product(c, d);
            if (b >= 0) out[static_cast<std::size_t>(b)].push_back({c, d});
        }
    }
    return out;
}

// Solves the horizontality equation for E = e^{Gamma} level by level. The
// P_{-k} part of [Omega, E] + dE - E dE_{-1} must vanish, which reads
//   d E_{-k} = [E_{-k+1}, Omega] + E_{-k+1} d E_{-1}.
// Coefficients are produced by increasing total degree; inside a degree the
// right-hand side is assembled monomial by monomial in the given order and
// then integrated.
inline series_endo solve_gamma(const series_endo &g1, const limit_data &ld, std::optional<std::uint64_t> seed) {
    const std::size_t nv = g1.nvars();
    const std::size_t n = ld.dim();
    const int order = g1.order();
    const int depth = ld.depth();
    const auto &mb = *g1.basis();
    auto pairs = divisor_pairs(mb);
    std::vector<series_endo> d1;
    for (std::size_t j = 0; j < nv; ++j) d1.push_back(g1.derivative(j, derivation::log));
    std::vector<series_endo> e(static_cast<std::size_t>(depth) + 1, make_series_endo(nv, order, n));
    if (depth >= 1) e[1] = g1;
    std::vector<std::vector<std::size_t>> by_degree(static_cast<std::size_t>(order) + 1);
    for (std::size_t k = 0; k < mb.size(); ++k) by_degree[static_cast<std::size_t>(mb.degree(k))].push_back(k);
    std::mt19937_64 rng(seed.value_or(0));
    for (int m = 1; m <= order; ++m) {
        auto mons = by_degree[static_cast<std::size_t>(m)];
        if (seed) std::shuffle(mons.begin(), mons.end(), rng);
        for (int k = 2; k <= depth; ++k) {
            const series_endo &prev = e[static_cast<std::size_t>(k - 1)];
            series_one_form slice;
            for (std::size_t j = 0; j < nv; ++j) slice.comp.push_back(make_series_endo(nv, order, n));
            for (std::size_t b : mons) {
                for (std::size_t j = 0; j < nv; ++j) {
                    matrix rhs = commutator(prev[b], ld.N[j]);
                    for (const auto &[c, dd] : pairs[b]) {
                        if (!prev[c].is_zero() && !d1[j][dd].is_zero()) rhs += prev[c] * d1[j][dd];
                    }
                    slice.comp[j][b] = ld.component(rhs, -k);
                }
            }
            series_endo prim;
            try {
                prim = integrate(slice, derivation::log, true);
            } catch (const check_failure &err) {
                throw check_failure("IntegrationObstruction",
                                    "level " + std::to_string(k) + ", degree " + std::to_string(m) + ": " + err.what());
            }
            for (std::size_t b : mons) e[static_cast<std::size_t>(k)][b] = prim[b];
        }
    }
    series_endo total = identity_series(nv, order, n);
    for (int k = 1; k <= depth; ++k) total += e[static_cast<std::size_t>(k)];
    return log_unipotent(total);
}

} // namespace detail

// Recovers Gamma from Gamma_{-1} by solving the horizontality equation. The
// result is checked against the residual computed directly from Gamma.
inline orbit_germ reconstruct_gamma(const series_endo &gamma_minus1, const limit_data &ld,
                                    const reconstruct_options &opt = {}) {
    orbit_germ probe{ld, gamma_minus1};
    check_germ(probe);
    if (ld.component(gamma_minus1, -1) != gamma_minus1) {
        throw validation_error("Gamma_{-1} is not valued in P_{-1}");
    }
    higgs_oneform(probe);
    orbit_germ out{ld, detail::solve_gamma(gamma_minus1, ld, opt.shuffle_seed)};
    residual_report r = horizontality_residual(out);
    if (!r.pass()) {
        const auto &v = r.violations.front();
        throw check_failure("IntegrationObstruction", "residual left at direction " + std::to_string(v.direction) +
                                                          ", " + exponent_string(v.beta) + ", level " +
                                                          std::to_string(v.level));
    }
    if (opt.verify_uniqueness) {
        series_endo again = detail::solve_gamma(gamma_minus1, ld, opt.shuffle_seed.value_or(0) + 0x9e3779b97f4a7c15ULL);
        if (again != out.gamma) throw check_failure("InternalError", "reconstruction depends on the visiting order");
    }
    return out;
}

// Integrates a flat Higgs one-form Omega + d Gamma_{-1} back to a germ.
inline orbit_germ germ_from_higgs(const series_one_form &dx, const limit_data &ld, const reconstruct_options &opt = {}) {
    require(dx.nvars() == ld.nvars(), "Higgs one-form has the wrong number of variables");
    series_one_form corr = dx - omega_form(ld, dx.comp[0].order());
    series_endo g1 = integrate(corr, derivation::log, true);
    return reconstruct_gamma(g1, ld, opt);
}

// Closed-form identities for the first levels of Gamma:
//   d Gamma_{-2} = [Gamma_{-1}, Omega + 1/2 d Gamma_{-1}]
//   d Gamma_{-3} = [Gamma_{-2}, Omega + 1/2 d Gamma_{-1}]
//                  + 1/12 [Gamma_{-1}, [Gamma_{-1}, d Gamma_{-1}]].
inline report lie_polynomial_check(const orbit_germ &g) {
    report r;
    series_endo g1 = g.gamma_part(1), g2 = g.gamma_part(2), g3 = g.gamma_part(3);
    bool ok2 = true, ok3 = true;
    for (std::size_t j = 0; j < g.nvars(); ++j) {
        series_endo d1 = g1.derivative(j, derivation::log);
        series_endo half = d1 * scalar::frac(1, 2) + g.limit.N[j] * identity_series(g.nvars(), g.order(), g.limit.dim());
        ok2 = ok2 && g2.derivative(j, derivation::log) == bracket(g1, half);
        series_endo rhs3 = bracket(g2, half) + bracket(g1, bracket(g1, d1)) * scalar::frac(1, 12);
        ok3 = ok3 && g3.derivative(j, derivation::log) == rhs3;
    }
    r.add("d Gamma_{-2} identity", ok2);
    r.add("d Gamma_{-3} identity", ok3);
    return r;
}

// T_j = e^{-Gamma} e^{-N_j} e^{Gamma}, checked to be unipotent.
inline series_endo recover_monodromy(const orbit_germ &g, std::size_t j) {
    require(j < g.nvars(), "monodromy index out of range");
    const std::size_t n = g.limit.dim();
    series_endo t = (exp_nilpotent(-g.gamma) * exp_nilpotent(-g.limit.N[j])) * exp_nilpotent(g.gamma);
    series_endo u = t - identity_series(g.nvars(), g.order(), n);
    series_endo p = identity_series(g.nvars(), g.order(), n);
    for (std::size_t k = 0; k < n; ++k) p = p * u;
    if (!p.is_zero()) throw check_failure("NotUnipotent", "monodromy of direction " + std::to_string(j));
    return t;
}

// In the Hodge-Tate case the Higgs field of the variation, read off as the
// U^p -> U^{p-1} part of the connection in the moving frame, agrees with
// dX_{-1} modulo the levels below -1. The flat bundles of the untwisted
// frame are also rebuilt from it, checking that e^{Gamma} transports the
// Hodge bundles and that the covariant derivative of Y is 2 theta.
inline report hodge_tate_theta(const orbit_germ &g) {
    if (!g.limit.hodge_tate()) throw check_failure("NotHodgeTate", "limit is not of Hodge-Tate type");
    report r;
    residual_report res = horizontality_residual(g);
    series_one_form dx = higgs_oneform(g);
    bool agree = true;
    series_one_form theta_u;
    series_endo e = exp_nilpotent(g.gamma);
    series_endo einv = exp_nilpotent(-g.gamma);
    for (std::size_t j = 0; j < g.nvars(); ++j) {
        series_endo theta = g.limit.component(res.residual.comp[j], -1);
        agree = agree && theta == dx.comp[j];
        theta_u.comp.push_back(e * theta * einv);
    }
    r.add("theta equals dX_{-1} modulo lower levels", agree);
    grading y = grading_from_bigrading(g.limit.I);
    unipotent_germ ug = reconstruct_unipotent(omega_form(g.limit, g.order()), theta_u, g.limit.U, derivation::log, y.Y);
    r.append(ug.checks);
    r.add("transport of the Hodge bundles is e^Gamma", ug.transport == e);
    return r;
}

} // namespace hodge
