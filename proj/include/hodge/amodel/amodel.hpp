#pragma once

// The A-model variation of Hodge structure of a Calabi-Yau threefold with
// H = H^0 + H^2 + H^4 + H^6, built from a truncated Gromov-Witten potential.
//
// Basis order: T_0, T_1..T_n, T_1^v..T_n^v, T_0^v, where T_0 = 1, T_j are
// divisor classes, T_j^v the dual curve classes and T_0^v the point class.
// The instanton part of the potential is Phi_hol = tp^{-3} sum_b N_b q^b,
// so that its third logarithmic derivatives are the tp-free Yukawa series
// kappa_{jkl} + sum_b N_b b_j b_k b_l q^b.

#include <array>
#include <map>
#include <string>
#include <vector>

#include <hodge/orbit/orbit.hpp>

namespace hodge {

struct gw_potential {
    std::size_t n = 0;
    int order = 0;
    // kappa[j][k][l], fully symmetric.
    std::vector<std::vector<std::vector<rational>>> kappa;
    // Instanton numbers N_b for b != 0 of total degree <= order.
    std::map<exponent, rational> instantons;

    rational k(std::size_t j, std::size_t a, std::size_t b) const { return kappa[j][a][b]; }
};

// Index helpers for the basis T_0, T_j, T_j^v, T_0^v (j counted from 1).
struct amodel_space {
    std::size_t n = 0;
    std::size_t dim() const { return 2 * n + 2; }
    std::size_t t0() const { return 0; }
    std::size_t t(std::size_t j) const { return j; }
    std::size_t tv(std::size_t j) const { return n + j; }
    std::size_t t0v() const { return 2 * n + 1; }
    // Half the cohomological degree of a basis vector.
    int half_degree(std::size_t i) const {
        if (i == t0()) return 0;
        if (i <= n) return 1;
        if (i < t0v()) return 2;
        return 3;
    }
};

inline void validate_potential(const gw_potential &p) {
    require(p.n >= 1, "potential needs at least one divisor class");
    require(p.order >= 0, "truncation order must be non-negative");
    require(p.kappa.size() == p.n, "kappa has the wrong size");
    for (std::size_t a = 0; a < p.n; ++a) {
        require(p.kappa[a].size() == p.n, "kappa has the wrong size");
        for (std::size_t b = 0; b < p.n; ++b) require(p.kappa[a][b].size() == p.n, "kappa has the wrong size");
    }
    for (std::size_t a = 0; a < p.n; ++a) {
        for (std::size_t b = 0; b < p.n; ++b) {
            for (std::size_t c = 0; c < p.n; ++c) {
                const rational &v = p.kappa[a][b][c];
                if (v != p.kappa[b][a][c] || v != p.kappa[a][c][b]) {
                    throw validation_error("kappa is not symmetric at (" + std::to_string(a + 1) + "," +
                                           std::to_string(b + 1) + "," + std::to_string(c + 1) + ")");
                }
            }
        }
    }
    for (const auto &[b, v] : p.instantons) {
        require(b.size() == p.n, "instanton degree " + exponent_string(b) + " has the wrong length");
        for (int x : b) require(x >= 0, "instanton degree " + exponent_string(b) + " is negative");
        require(total_degree(b) > 0, "Phi_hol must vanish at q = 0");
        require(total_degree(b) <= p.order, "instanton degree " + exponent_string(b) + " exceeds the order");
    }
}

// Phi_hol = tp^{-3} sum_b N_b q^b.
inline series_scalar phi_hol(const gw_potential &p) {
    validate_potential(p);
    series_scalar phi = make_series_scalar(p.n, p.order);
    for (const auto &[b, v] : p.instantons) phi.set(b, scalar(v) * scalar::tp(-3));
    return phi;
}

// T_a * T_b for all basis vectors, stored as matrices of left multiplication.
class quantum_product {
  public:
    quantum_product() = default;
    // c[j][k][l] = C_{jkl}(q), coefficient of T_l^v in T_j * T_k.
    quantum_product(std::size_t n, std::vector<std::vector<std::vector<series_scalar>>> c) : space_{n}, c_(std::move(c)) {
        const std::size_t d = space_.dim();
        const auto &zero = c_[0][0][0];
        series_endo blank = make_series_endo(n, zero.order(), d);
        for (std::size_t a = 0; a < d; ++a) {
            series_endo m = blank;
            auto put = [&](std::size_t row, std::size_t col, const series_scalar &f) {
                m += times_matrix(f, matrix::unit(d, d, row, col));
            };
            series_scalar one = make_series_scalar(n, zero.order());
            one[0] = scalar(1);
            if (a == space_.t0()) {
                m = identity_series(n, zero.order(), d);
            } else if (a <= n) {
                put(space_.t(a), space_.t0(), one);
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t l = 1; l <= n; ++l) put(space_.tv(l), space_.t(k), c_[a - 1][k - 1][l - 1]);
                }
                put(space_.t0v(), space_.tv(a), one);
            } else if (a < space_.t0v()) {
                put(space_.tv(a - n), space_.t0(), one);
                put(space_.t0v(), space_.t(a - n), one);
            } else {
                put(space_.t0v(), space_.t0(), one);
            }
            left_.push_back(std::move(m));
        }
    }

    std::size_t n() const { return space_.n; }
    const amodel_space &space() const { return space_; }
    int order() const { return c_[0][0][0].order(); }
    const series_scalar &c(std::size_t j, std::size_t k, std::size_t l) const { return c_[j][k][l]; }
    // Left multiplication by the basis vector with index a.
    const series_endo &left(std::size_t a) const { return left_[a]; }
    // Left multiplication by sum_i x_i e_i, x given as a column series.
    series_endo left_by(const series_endo &x) const {
        series_endo out = make_series_endo(n(), order(), space_.dim());
        for (std::size_t i = 0; i < space_.dim(); ++i) out += entry_series(x, i) * left_[i];
        return out;
    }
    // Column series of T_a * T_b.
    series_endo times(std::size_t a, std::size_t b) const {
        return left_[a] * series_endo::constant(n(), order(), matrix::unit(space_.dim(), 1, b, 0),
                                                matrix(space_.dim(), 1));
    }

  private:
    static series_scalar entry_series(const series_endo &x, std::size_t i) { return entry(x, i, 0); }

    amodel_space space_;
    std::vector<std::vector<std::vector<series_scalar>>> c_;
    std::vector<series_endo> left_;
};

// C_{jkl} = kappa_{jkl} + d^3 Phi_hol / du_j du_k du_l.
inline quantum_product make_quantum_product(const gw_potential &p) {
    series_scalar phi = phi_hol(p);
    std::vector<std::vector<std::vector<series_scalar>>> c(
        p.n, std::vector<std::vector<series_scalar>>(p.n, std::vector<series_scalar>(p.n)));
    for (std::size_t j = 0; j < p.n; ++j) {
        series_scalar dj = phi.derivative(j, derivation::log);
        for (std::size_t k = 0; k < p.n; ++k) {
            series_scalar djk = dj.derivative(k, derivation::log);
            for (std::size_t l = 0; l < p.n; ++l) {
                series_scalar f = djk.derivative(l, derivation::log);
                f[0] = f[0] + scalar(p.kappa[j][k][l]);
                c[j][k][l] = f;
            }
        }
    }
    return quantum_product(p.n, std::move(c));
}

// A_j = left multiplication by T_j. Flat when the A_j commute and the form
// sum_j A_j du_j is closed.
inline report dubrovin_flatness(const quantum_product &qp) {
    report r;
    std::string where;
    for (std::size_t i = 1; i <= qp.n() && where.empty(); ++i) {
        for (std::size_t j = i + 1; j <= qp.n() && where.empty(); ++j) {
            if (!bracket(qp.left(i), qp.left(j)).is_zero()) where = "[A_" + std::to_string(i) + ", A_" + std::to_string(j) + "]";
        }
    }
    r.add("A_i commute", where.empty(), where);
    std::string closed;
    for (std::size_t i = 1; i <= qp.n() && closed.empty(); ++i) {
        for (std::size_t j = i + 1; j <= qp.n() && closed.empty(); ++j) {
            if (qp.left(j).derivative(i - 1, derivation::log) != qp.left(i).derivative(j - 1, derivation::log)) {
                closed = "d_" + std::to_string(i) + " A_" + std::to_string(j);
            }
        }
    }
    r.add("sum A_j du_j is closed", closed.empty(), closed);
    return r;
}
inline report dubrovin_flatness(const gw_potential &p) { return dubrovin_flatness(make_quantum_product(p)); }

// Pairing Q(a, b) = (-1)^p int a b with p half the degree of a.
inline matrix amodel_pairing(std::size_t n) {
    amodel_space s{n};
    matrix q(s.dim(), s.dim());
    q(s.t0(), s.t0v()) = scalar(1);
    q(s.t0v(), s.t0()) = scalar(-1);
    for (std::size_t k = 1; k <= n; ++k) {
        q(s.t(k), s.tv(k)) = scalar(-1);
        q(s.tv(k), s.t(k)) = scalar(1);
    }
    return q;
}

// N_j = cup product with T_j.
inline std::vector<matrix> amodel_monodromy(const gw_potential &p) {
    amodel_space s{p.n};
    std::vector<matrix> out;
    for (std::size_t j = 1; j <= p.n; ++j) {
        matrix m(s.dim(), s.dim());
        m(s.t(j), s.t0()) = scalar(1);
        for (std::size_t k = 1; k <= p.n; ++k) {
            for (std::size_t l = 1; l <= p.n; ++l) m(s.tv(l), s.t(k)) = scalar(p.kappa[j - 1][k - 1][l - 1]);
        }
        m(s.t0v(), s.tv(j)) = scalar(1);
        out.push_back(m);
    }
    return out;
}

namespace detail {
inline subspace amodel_span(std::size_t d, std::size_t lo, std::size_t hi) {
    std::vector<matrix> cols;
    for (std::size_t k = lo; k < hi; ++k) cols.push_back(matrix::unit(d, 1, k, 0));
    return subspace::span(d, cols);
}
} // namespace detail

// F^p_inf = sum of H^{2a} with a <= 3 - p.
inline decreasing_filtration amodel_limit_filtration(std::size_t n) {
    amodel_space s{n};
    const std::size_t d = s.dim();
    return decreasing_filtration(d, {{0, subspace::full(d)},
                                     {1, detail::amodel_span(d, 0, s.t0v())},
                                     {2, detail::amodel_span(d, 0, n + 1)},
                                     {3, detail::amodel_span(d, 0, 1)}});
}

// W_k = sum of H^{2a} with 2a >= 6 - k.
inline increasing_filtration amodel_weight_filtration(std::size_t n) {
    amodel_space s{n};
    const std::size_t d = s.dim();
    return increasing_filtration(d, {{0, detail::amodel_span(d, s.t0v(), d)},
                                     {2, detail::amodel_span(d, s.tv(1), d)},
                                     {4, detail::amodel_span(d, 1, d)},
                                     {6, subspace::full(d)}});
}

// Gamma_{-1}(T_k) = sum_l Phi_{kl} T_l^v.
inline series_endo amodel_gamma1(std::size_t n, const series_scalar &phi) {
    amodel_space s{n};
    series_endo g = make_series_endo(n, phi.order(), s.dim());
    for (std::size_t k = 1; k <= n; ++k) {
        series_scalar dk = phi.derivative(k - 1, derivation::log);
        for (std::size_t l = 1; l <= n; ++l) {
            g += times_matrix(dk.derivative(l - 1, derivation::log), matrix::unit(s.dim(), s.dim(), s.tv(l), s.t(k)));
        }
    }
    return g;
}

// Closed form of Gamma = Gamma_{-1} + Gamma_{-2} + Gamma_{-3}.
inline series_endo amodel_gamma(std::size_t n, const series_scalar &phi) {
    amodel_space s{n};
    const std::size_t d = s.dim();
    series_endo g = amodel_gamma1(n, phi);
    for (std::size_t k = 1; k <= n; ++k) {
        series_scalar dk = phi.derivative(k - 1, derivation::log);
        g -= times_matrix(dk, matrix::unit(d, d, s.t0v(), s.t(k)));
        g += times_matrix(dk, matrix::unit(d, d, s.tv(k), s.t0()));
    }
    g -= times_matrix(phi * scalar(2), matrix::unit(d, d, s.t0v(), s.t0()));
    return g;
}

struct amodel_vhs {
    gw_potential potential;
    matrix Q;
    std::vector<matrix> N;
    increasing_filtration W;
    decreasing_filtration F_inf;
    limit_data limit;
    orbit_germ germ;
    quantum_product quantum;
    report checks;
};

inline limit_data amodel_limit_data(const gw_potential &p) {
    return make_limit_data(amodel_limit_filtration(p.n), amodel_weight_filtration(p.n), amodel_monodromy(p));
}

// Sum of the Q-pairings between the columns of a and b is zero.
inline bool pairing_vanishes(const matrix &q, const matrix &a, const matrix &b) {
    return (a.transpose() * q * b).is_zero();
}

// Builds the variation and runs every consistency check on it. Raises NotFlat
// when the Dubrovin connection of the potential is not flat.
inline amodel_vhs build_vhs(const gw_potential &p) {
    validate_potential(p);
    amodel_vhs v;
    v.potential = p;
    v.quantum = make_quantum_product(p);
    report flat = dubrovin_flatness(v.quantum);
    if (!flat.pass()) throw check_failure("NotFlat", flat.first_failure()->name + ": " + flat.first_failure()->detail);
    amodel_space s{p.n};
    const std::size_t d = s.dim();
    v.Q = amodel_pairing(p.n);
    v.N = amodel_monodromy(p);
    v.W = amodel_weight_filtration(p.n);
    v.F_inf = amodel_limit_filtration(p.n);
    v.limit = make_limit_data(v.F_inf, v.W, v.N);
    series_scalar phi = phi_hol(p);
    v.germ = orbit_germ{v.limit, amodel_gamma(p.n, phi)};
    report &r = v.checks;

    reconstruct_options opt;
    opt.verify_uniqueness = false;
    orbit_germ rec = reconstruct_gamma(amodel_gamma1(p.n, phi), v.limit, opt);
    r.add("closed-form Gamma equals the reconstruction from Gamma_{-1}", rec.gamma == v.germ.gamma);
    residual_report res = horizontality_residual(v.germ);
    r.add("germ is horizontal", res.pass());
    r.append(lie_polynomial_check(v.germ));
    r.add("Gamma vanishes at q = 0", v.germ.gamma.constant_term().is_zero());

    // Flat frame S = e^{-Gamma}: dS + A S - S N = 0.
    series_endo frame = exp_nilpotent(-v.germ.gamma);
    bool frame_flat = true;
    for (std::size_t j = 0; j < p.n; ++j) {
        series_endo lhs = frame.derivative(j, derivation::log) + v.quantum.left(j + 1) * frame - frame * v.N[j];
        frame_flat = frame_flat && lhs.is_zero();
    }
    r.add("frame e^{-Gamma} is flat for the Dubrovin connection", frame_flat);

    // F^p(q) = e^Gamma F^p_inf: the moving frame is unipotent, so the jump
    // dimensions are those of the limit.
    std::vector<std::size_t> dims;
    for (int q = 3; q >= 0; --q) dims.push_back(v.F_inf.at(q).dim());
    bool dims_ok = dims == std::vector<std::size_t>{1, 1 + p.n, 1 + 2 * p.n, 2 + 2 * p.n};
    bool unipotent = (exp_nilpotent(v.germ.gamma).constant_term() == matrix::identity(d));
    r.add("Hodge filtration has jumps of dimension 1, 1+n, 1+2n, 2+2n", dims_ok && unipotent);

    // Limit bigrading: I^{p,p} = H^{2(3-p)}.
    bool bigrading_ok = v.limit.I.size() == 4;
    const std::array<std::pair<std::size_t, std::size_t>, 4> blocks{
        {{s.t0v(), d}, {s.tv(1), s.t0v()}, {1, s.tv(1)}, {0, 1}}};
    for (int a = 0; a < 4 && bigrading_ok; ++a) {
        auto it = v.limit.I.find({a, a});
        bigrading_ok = it != v.limit.I.end() && it->second == detail::amodel_span(d, blocks[a].first, blocks[a].second);
    }
    r.add("limit bigrading is I^{p,p} = H^{2(3-p)}", bigrading_ok);
    r.add("relative weight filtration of the cone equals W", v.limit.relW == v.W);
    matrix nsum(d, d);
    for (const auto &nj : v.N) nsum += nj;
    bool lefschetz = false;
    try {
        lefschetz = monodromy_weight_filtration(nsum, 3) == v.W;
    } catch (const error &) {
    }
    r.add("W equals the monodromy weight filtration of the cone centered at 3", lefschetz);

    bool iso = true;
    for (const auto &nj : v.N) iso = iso && (nj.transpose() * v.Q + v.Q * nj).is_zero();
    r.add("N_j are infinitesimal isometries of Q", iso);
    bool giso = true;
    for (std::size_t k = 0; k < v.germ.gamma.size(); ++k) {
        const matrix &c = v.germ.gamma[k];
        giso = giso && (c.transpose() * v.Q + v.Q * c).is_zero();
    }
    r.add("Gamma is an infinitesimal isometry of Q", giso);
    bool first = true;
    for (int q = 1; q <= 3; ++q) first = first && pairing_vanishes(v.Q, v.F_inf.at(q).basis(), v.F_inf.at(4 - q).basis());
    r.add("first bilinear relation Q(F^p, F^{4-p}) = 0", first);
    return v;
}

// dX_{-1}(d/du_j) = T_j * on the whole basis.
inline report higgs_equals_product(const amodel_vhs &v) {
    report r;
    series_one_form dx = higgs_oneform(v.germ);
    for (std::size_t j = 0; j < v.potential.n; ++j) {
        r.add("dX_{-1}(d/du_" + std::to_string(j + 1) + ") = T_" + std::to_string(j + 1) + " *",
              dx.comp[j] == v.quantum.left(j + 1));
    }
    return r;
}

// Reads structure constants off a Higgs field Omega + d Gamma_{-1}, which
// need not come from a potential: C_{jkl} = coefficient of T_l^v in
// (N_j + d_j Gamma_{-1}) T_k.
inline quantum_product product_from_higgs(const limit_data &ld, const series_endo &gamma1) {
    const std::size_t n = ld.nvars();
    amodel_space s{n};
    require(ld.dim() == s.dim(), "limit data do not have the A-model shape");
    std::vector<std::vector<std::vector<series_scalar>>> c(
        n, std::vector<std::vector<series_scalar>>(n, std::vector<series_scalar>(n)));
    for (std::size_t j = 0; j < n; ++j) {
        series_endo th = gamma1.derivative(j, derivation::log) +
                         series_endo::constant(n, gamma1.order(), ld.N[j], matrix(s.dim(), s.dim()));
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 1; l <= n; ++l) c[j][k - 1][l - 1] = entry(th, s.tv(l), s.t(k));
        }
    }
    return quantum_product(n, std::move(c));
}

// Associativity (with commutativity) of the quantum product checked on all
// basis triples, against the integrability dX_{-1} ^ dX_{-1} = 0 of the
// Higgs field Omega + d Gamma_{-1}. The two criteria must agree.
inline report wdvv_check(const limit_data &ld, const series_endo &gamma1) {
    quantum_product qp = product_from_higgs(ld, gamma1);
    const std::size_t d = qp.space().dim();
    report r;
    std::string comm, assoc;
    for (std::size_t a = 0; a < d && comm.empty(); ++a) {
        for (std::size_t b = a + 1; b < d && comm.empty(); ++b) {
            if (qp.times(a, b) != qp.times(b, a)) comm = "e" + std::to_string(a) + " * e" + std::to_string(b);
        }
    }
    for (std::size_t a = 0; a < d && assoc.empty(); ++a) {
        for (std::size_t b = 0; b < d && assoc.empty(); ++b) {
            series_endo ab = qp.times(a, b);
            series_endo lab = qp.left_by(ab);
            for (std::size_t c = 0; c < d && assoc.empty(); ++c) {
                series_endo col = series_endo::constant(qp.n(), qp.order(), matrix::unit(d, 1, c, 0), matrix(d, 1));
                if (lab * col != qp.left(a) * (qp.left(b) * col)) {
                    assoc = "(e" + std::to_string(a) + " * e" + std::to_string(b) + ") * e" + std::to_string(c);
                }
            }
        }
    }
    series_one_form th;
    for (std::size_t j = 0; j < ld.nvars(); ++j) {
        th.comp.push_back(gamma1.derivative(j, derivation::log) +
                          series_endo::constant(ld.nvars(), gamma1.order(), ld.N[j], matrix(d, d)));
    }
    auto wedge = wedge_defect(th);
    r.add("commutative", comm.empty(), comm);
    r.add("associative", assoc.empty(), assoc);
    r.add("higgs-flat", !wedge, wedge ? wedge->describe() : std::string{});
    if ((comm.empty() && assoc.empty()) != !wedge) {
        throw check_failure("Inconsistent", "associativity and Higgs flatness disagree");
    }
    return r;
}

inline report wdvv_check(const gw_potential &p) {
    return wdvv_check(amodel_limit_data(p), amodel_gamma1(p.n, phi_hol(p)));
}

// Recovers the potential from a horizontal germ: Phi_hol = -1/2 times the
// T_0^v coefficient of Gamma_{-3}(T_0), and kappa from the classical
// product N_j T_k.
inline gw_potential potential_from_germ(const orbit_germ &g) {
    const std::size_t n = g.limit.nvars();
    amodel_space s{n};
    require(g.limit.dim() == s.dim(), "germ does not have the A-model shape");
    residual_report res = horizontality_residual(g);
    if (!res.pass()) throw check_failure("NotHorizontal", "germ does not satisfy the horizontality equation");
    report lp = lie_polynomial_check(g);
    if (!lp.pass()) throw check_failure("NotHorizontal", lp.first_failure()->name);
    gw_potential p;
    p.n = n;
    p.order = g.order();
    p.kappa.assign(n, std::vector<std::vector<rational>>(n, std::vector<rational>(n)));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 1; l <= n; ++l) {
                const scalar &v = g.limit.N[j](s.tv(l), s.t(k));
                require(v.is_rational(), "classical product is not rational");
                p.kappa[j][k - 1][l - 1] = v.constant_re();
            }
        }
    }
    series_scalar phi = entry(g.gamma_part(3), s.t0v(), s.t0()) * scalar::frac(-1, 2);
    for (std::size_t k = 1; k < phi.size(); ++k) {
        if (phi[k].is_zero()) continue;
        scalar nb = phi[k] * scalar::tp(3);
        if (!nb.is_rational()) {
            throw validation_error("instanton coefficient at " + exponent_string(phi.monomial(k)) + " is not rational");
        }
        p.instantons.emplace(phi.monomial(k), nb.constant_re());
    }
    validate_potential(p);
    return p;
}

inline gw_potential potential_from_vhs(const amodel_vhs &v) { return potential_from_germ(v.germ); }

} // namespace hodge
