#pragma once

// The B-model quantum product from extension data of a Hodge-Tate
// variation with graded pieces Gr_0, Gr_{-2}, Gr_{-4}, Gr_{-6} of dimensions
// 1, n, n, 1.
//
// The extension class near the boundary is
//   E = exp(sum_j u_j N_j) exp(log E),   q_j = exp(tp u_j) = f_j(s),
// where f_j(s) are the coefficients of the Gr_0 -> Gr_{-2} block,
// E_0(1) = sum_j f_j(s) N_j(1), and log E is a grading-lowering series in
// the coordinates s with no Gr_0 -> Gr_{-2} block of its own. In the
// canonical coordinates q the connection form is
//   theta = -sum_j N_j du_j - tp^{-1} d log E.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <hodge/amodel/amodel.hpp>

namespace hodge {

struct extension_class {
    std::size_t n = 0;
    int order = 0;
    // Grading label of each basis vector: 0, -2, -4 or -6.
    std::vector<int> grades;
    std::vector<matrix> N;
    matrix Q;
    // E_0(1) = sum_j f[j](s) N_j(1).
    std::vector<series_scalar> f;
    series_endo logE;

    std::size_t dim() const { return grades.size(); }
    std::size_t generator() const {
        for (std::size_t i = 0; i < grades.size(); ++i) {
            if (grades[i] == 0) return i;
        }
        return 0;
    }
    std::vector<std::size_t> indices(int grade) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < grades.size(); ++i) {
            if (grades[i] == grade) out.push_back(i);
        }
        return out;
    }
};

namespace detail {

// Matrix with columns N_j(1).
inline matrix gr2_frame(const extension_class &e) {
    std::vector<matrix> cols;
    const matrix one = matrix::unit(e.dim(), 1, e.generator(), 0);
    for (const auto &nj : e.N) cols.push_back(nj * one);
    matrix m = cols[0];
    for (std::size_t j = 1; j < cols.size(); ++j) m = matrix::hcat(m, cols[j]);
    return m;
}

// Coordinates of the Gr_{-2} part of a column in the frame N_j(1).
inline matrix gr2_coordinates(const extension_class &e, const matrix &v) {
    matrix part(v.rows(), 1);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        if (e.grades[i] == -2) part(i, 0) = v(i, 0);
    }
    auto x = solve(gr2_frame(e), part);
    require(x.has_value(), "vector is not in the span of N_j(1)");
    return *x;
}

} // namespace detail

inline void validate_extension(const extension_class &e) {
    require(e.n >= 1, "extension data need n >= 1");
    const std::size_t d = e.dim();
    require(d == 2 * e.n + 2, "graded pieces must have dimensions 1, n, n, 1");
    require(e.indices(0).size() == 1 && e.indices(-2).size() == e.n && e.indices(-4).size() == e.n &&
                e.indices(-6).size() == 1,
            "graded pieces must have dimensions 1, n, n, 1");
    require(e.N.size() == e.n, "need one nilpotent per coordinate");
    require(e.f.size() == e.n, "need one coordinate function per nilpotent");
    require(e.Q.rows() == d && e.Q.cols() == d, "pairing has the wrong size");
    require(try_inverse(e.Q).has_value(), "pairing is degenerate");
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!e.Q(i, j).is_zero() && e.grades[i] + e.grades[j] != -6) {
                throw validation_error("pairing does not pair Gr_{-k} with Gr_{-6+k}");
            }
        }
    }
    for (std::size_t a = 0; a < e.n; ++a) {
        require(e.N[a].rows() == d && e.N[a].is_square(), "nilpotent has the wrong size");
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (!e.N[a](i, j).is_zero() && e.grades[i] != e.grades[j] - 2) {
                    throw validation_error("N_" + std::to_string(a + 1) + " does not have degree -2");
                }
            }
        }
        for (std::size_t b = 0; b < a; ++b) require(commutator(e.N[a], e.N[b]).is_zero(), "nilpotents do not commute");
    }
    require(rank(detail::gr2_frame(e)) == e.n, "N_j(1) do not span Gr_{-2}");
    require(e.logE.nvars() == e.n && endo_dim(e.logE) == d, "log E has the wrong shape");
    for (const auto &fj : e.f) require(fj.basis() == e.logE.basis(), "coordinate functions and log E disagree in truncation");
    for (std::size_t k = 0; k < e.logE.size(); ++k) {
        const matrix &c = e.logE[k];
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (c(i, j).is_zero()) continue;
                if (e.grades[i] >= e.grades[j]) {
                    throw check_failure("NotGraded", "log E has a block Gr_" + std::to_string(e.grades[j]) + " -> Gr_" +
                                                         std::to_string(e.grades[i]) + " at " +
                                                         exponent_string(e.logE.monomial(k)));
                }
                if (e.grades[j] == 0 && e.grades[i] == -2) {
                    throw validation_error("the Gr_0 -> Gr_{-2} block is carried by the coordinate functions");
                }
            }
        }
    }
}

struct canonical_change {
    // q = f(s) and its inverse s = g(q).
    std::vector<series_scalar> q_of_s;
    std::vector<series_scalar> s_of_q;
};

inline canonical_change canonical_coordinates(const extension_class &e) {
    validate_extension(e);
    canonical_change c;
    c.q_of_s = e.f;
    c.s_of_q = reversion(e.f);
    return c;
}

// log E written in the canonical coordinates q.
inline series_endo log_extension_in_q(const extension_class &e) {
    canonical_change c = canonical_coordinates(e);
    return compose(e.logE, c.s_of_q);
}

struct theta_result {
    series_one_form theta;
    // Whether -tp^{-1} (dE) E^{-1} gives the same form as -tp^{-1} d log E.
    bool readings_agree = true;
    std::string discrepancy;
};

inline theta_result theta_from_extension(const extension_class &e) {
    series_endo le = log_extension_in_q(e);
    const std::size_t d = e.dim();
    theta_result out;
    series_endo big_e = exp_nilpotent(le);
    series_endo big_e_inv = exp_nilpotent(-le);
    const scalar inv_tp = scalar::tp(-1);
    for (std::size_t j = 0; j < e.n; ++j) {
        series_endo dl = le.derivative(j, derivation::log);
        series_endo th = series_endo::constant(e.n, le.order(), -e.N[j], matrix(d, d)) - dl * inv_tp;
        series_endo alt = big_e.derivative(j, derivation::log) * big_e_inv;
        if (alt != dl && out.readings_agree) {
            out.readings_agree = false;
            for (std::size_t k = 0; k < alt.size(); ++k) {
                if (alt[k] != dl[k]) {
                    out.discrepancy = "direction " + std::to_string(j + 1) + " at " + exponent_string(alt.monomial(k));
                    break;
                }
            }
        }
        out.theta.comp.push_back(std::move(th));
    }
    return out;
}

// Frame xi_j = sum_k X_{kj} d/du_k with theta(xi_j) 1 = N_j(1).
struct vector_frame {
    // X as an n x n matrix series.
    series_endo X;
    // Omega_j(d/du_k), coefficient of N_j(1) in theta(d/du_k) 1.
    series_endo omega;
};

inline vector_frame recover_vector_fields(const series_one_form &theta, const extension_class &e) {
    const std::size_t n = e.n;
    require(theta.nvars() == n, "theta has the wrong number of directions");
    const std::size_t d = e.dim();
    const int order = theta.comp[0].order();
    const matrix one = matrix::unit(d, 1, e.generator(), 0);
    vector_frame out;
    out.omega = make_series_endo(n, order, n);
    for (std::size_t k = 0; k < n; ++k) {
        series_endo col = theta.comp[k] * one;
        for (std::size_t m = 0; m < col.size(); ++m) {
            if (col[m].is_zero()) continue;
            matrix x = detail::gr2_coordinates(e, col[m]);
            for (std::size_t j = 0; j < n; ++j) out.omega[m](j, k) = x(j, 0);
        }
    }
    if (!try_inverse(out.omega.constant_term())) {
        throw check_failure("DegenerateFrame", "the forms Omega_j are linearly dependent at the origin");
    }
    out.X = inverse(out.omega);
    return out;
}

// theta(xi_a) = sum_k X_{ka} theta_k.
inline std::vector<series_endo> theta_on_frame(const series_one_form &theta, const vector_frame &v) {
    std::vector<series_endo> out;
    const std::size_t n = theta.nvars();
    for (std::size_t a = 0; a < n; ++a) {
        series_endo acc = make_series_endo(n, theta.comp[0].order(), endo_dim(theta.comp[0]));
        for (std::size_t k = 0; k < n; ++k) acc += entry(v.X, k, a) * theta.comp[k];
        out.push_back(acc);
    }
    return out;
}

// Basis of Gr adapted to the product: 1, v_a = N_a(1), w_a in Gr_{-4} with
// Q(1, N_c w_a) = delta_{ca}, and p in Gr_{-6} with Q(1, p) = 1. Columns in
// that order.
inline matrix adapted_gr_basis(const extension_class &e) {
    const std::size_t d = e.dim();
    const std::size_t n = e.n;
    const matrix one = matrix::unit(d, 1, e.generator(), 0);
    const matrix row = one.transpose() * e.Q;
    auto g4 = e.indices(-4);
    matrix pair(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) pair(c, i) = (row * e.N[c] * matrix::unit(d, 1, g4[i], 0))(0, 0);
    }
    auto pinv = try_inverse(pair);
    if (!pinv) throw check_failure("DegenerateFrame", "Q(1, N_c .) is degenerate on Gr_{-4}");
    matrix basis = one;
    basis = matrix::hcat(basis, detail::gr2_frame(e));
    for (std::size_t a = 0; a < n; ++a) {
        matrix w(d, 1);
        for (std::size_t i = 0; i < n; ++i) w(g4[i], 0) = (*pinv)(i, a);
        basis = matrix::hcat(basis, w);
    }
    const std::size_t g6 = e.indices(-6)[0];
    matrix pt = matrix::unit(d, 1, g6, 0) * (row * matrix::unit(d, 1, g6, 0))(0, 0).inverse();
    return matrix::hcat(basis, pt);
}

struct b_quantum_product {
    std::size_t n = 0;
    // phi[a][b][c] = Q(1, theta(xi_a) theta(xi_b) theta(xi_c) 1).
    std::vector<std::vector<std::vector<series_scalar>>> phi;
    vector_frame frame;
    bool flat = true;
    std::string flatness_defect;
    // Columns 1, v_a, w_a, p in the original basis.
    matrix basis;
    // Left multiplication by each adapted basis vector, in adapted
    // coordinates.
    std::vector<series_endo> left;
};

inline b_quantum_product three_point(const extension_class &e) {
    theta_result tr = theta_from_extension(e);
    b_quantum_product p;
    p.n = e.n;
    p.frame = recover_vector_fields(tr.theta, e);
    if (auto bad = wedge_defect(tr.theta)) {
        p.flat = false;
        p.flatness_defect = bad->describe();
    }
    std::vector<series_endo> th = theta_on_frame(tr.theta, p.frame);
    const std::size_t d = e.dim();
    const std::size_t n = e.n;
    const int order = tr.theta.comp[0].order();
    const matrix one = matrix::unit(d, 1, e.generator(), 0);
    const matrix row = one.transpose() * e.Q;
    p.phi.assign(n, std::vector<std::vector<series_scalar>>(n, std::vector<series_scalar>(n)));
    for (std::size_t c = 0; c < n; ++c) {
        series_endo vc = th[c] * one;
        for (std::size_t b = 0; b < n; ++b) {
            series_endo vbc = th[b] * vc;
            for (std::size_t a = 0; a < n; ++a) p.phi[a][b][c] = entry(row * (th[a] * vbc), 0, 0);
        }
    }
    // Product rule: 1 is the identity, v_a * v_b = sum_c phi_abc w_c,
    // v_a * w_c = w_c * v_a = delta_ac p, all other products vanish.
    p.basis = adapted_gr_basis(e);
    auto v = [&](std::size_t a) { return 1 + a; };
    auto w = [&](std::size_t a) { return 1 + n + a; };
    const std::size_t pt = d - 1;
    series_endo blank = make_series_endo(n, order, d);
    for (std::size_t i = 0; i < d; ++i) {
        series_endo m = blank;
        if (i == 0) {
            m = identity_series(n, order, d);
        } else if (i <= n) {
            const std::size_t a = i - 1;
            m[0](v(a), 0) = scalar(1);
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t c = 0; c < n; ++c) m += times_matrix(p.phi[a][b][c], matrix::unit(d, d, w(c), v(b)));
            }
            m[0](pt, w(a)) = scalar(1);
        } else if (i < pt) {
            const std::size_t c = i - 1 - n;
            m[0](w(c), 0) = scalar(1);
            m[0](pt, v(c)) = scalar(1);
        } else {
            m[0](pt, 0) = scalar(1);
        }
        p.left.push_back(std::move(m));
    }
    return p;
}

// S3 symmetry of phi, commutativity and associativity of the product, its
// q = 0 limit and its agreement with the monodromy action away from
// Gr_{-2} x Gr_{-2}. Raises NotFlat, naming an S3 failure when there is one,
// if theta ^ theta != 0.
inline report b_associativity(const b_quantum_product &p, const extension_class &e) {
    const std::size_t n = p.n;
    const std::size_t d = e.dim();
    std::string asym;
    for (std::size_t a = 0; a < n && asym.empty(); ++a) {
        for (std::size_t b = 0; b < n && asym.empty(); ++b) {
            for (std::size_t c = 0; c < n && asym.empty(); ++c) {
                const auto &x = p.phi[a][b][c];
                if (x != p.phi[b][a][c] || x != p.phi[a][c][b] || x != p.phi[c][b][a]) {
                    asym = "phi_" + std::to_string(a + 1) + std::to_string(b + 1) + std::to_string(c + 1);
                }
            }
        }
    }
    if (!p.flat) {
        throw check_failure("NotFlat", "theta ^ theta != 0 at " + p.flatness_defect +
                                           (asym.empty() ? std::string("; phi still symmetric")
                                                         : "; " + asym + " is not S3-symmetric"));
    }
    report r;
    r.add("phi is S3-symmetric", asym.empty(), asym);
    const int order = p.phi[0][0][0].order();
    auto unit = [&](std::size_t i) { return series_endo::constant(n, order, matrix::unit(d, 1, i, 0), matrix(d, 1)); };
    auto left_by = [&](const series_endo &x) {
        series_endo out = make_series_endo(n, order, d);
        for (std::size_t i = 0; i < d; ++i) out += entry(x, i, 0) * p.left[i];
        return out;
    };
    std::string comm, assoc;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            series_endo ab = p.left[a] * unit(b);
            if (comm.empty() && ab != p.left[b] * unit(a)) comm = std::to_string(a) + "," + std::to_string(b);
            series_endo lab = left_by(ab);
            for (std::size_t c = 0; c < d && assoc.empty(); ++c) {
                if (lab * unit(c) != p.left[a] * (p.left[b] * unit(c))) {
                    assoc = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
                }
            }
        }
    }
    r.add("product is commutative", comm.empty(), comm);
    r.add("product is associative", assoc.empty(), assoc);
    // q = 0: v_a * v_b = N_a N_b (1) and v_a * x = N_a x for x in Gr_{-4}.
    const matrix one = matrix::unit(d, 1, e.generator(), 0);
    bool classical = true;
    bool cup = true;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            matrix prod = p.basis * (p.left[1 + a].constant_term() * matrix::unit(d, 1, 1 + b, 0));
            classical = classical && prod == e.N[a] * e.N[b] * one;
        }
        for (std::size_t c = 0; c < n; ++c) {
            matrix wc = p.basis.col(1 + n + c);
            const matrix expect = inverse(p.basis) * (e.N[a] * wc);
            cup = cup && p.left[1 + a] * unit(1 + n + c) == series_endo::constant(n, order, expect, matrix(d, 1));
        }
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) classical = classical && p.phi[a][b][c].constant_term() ==
                                                                             (one.transpose() * e.Q * e.N[a] * e.N[b] *
                                                                              e.N[c] * one)(0, 0);
        }
    }
    r.add("q = 0 limit is the monodromy algebra", classical);
    r.add("product is the monodromy action off Gr_{-2} x Gr_{-2}", cup);
    return r;
}

// Extension data of the A-model variation: Gr_{-2k} = H^{2k}, the monodromy
// logarithms and pairing of the A-model, and log E = tp Gamma_{-1}. The
// coordinate functions default to q = s; other choices f(s) transport log E
// to the coordinates s.
inline extension_class extension_from_amodel(const amodel_vhs &v, std::optional<std::vector<series_scalar>> f = std::nullopt) {
    const std::size_t n = v.potential.n;
    amodel_space sp{n};
    extension_class e;
    e.n = n;
    e.order = v.germ.order();
    for (std::size_t i = 0; i < sp.dim(); ++i) e.grades.push_back(-2 * sp.half_degree(i));
    e.N = v.N;
    e.Q = v.Q;
    series_endo le = v.germ.gamma_part(1) * scalar::tp();
    if (f) {
        e.f = *f;
        e.logE = compose(le, *f);
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            series_scalar s = make_series_scalar(n, e.order);
            exponent ej(n, 0);
            ej[j] = 1;
            if (e.order >= 1) s.set(ej, scalar(1));
            e.f.push_back(s);
        }
        e.logE = le;
    }
    validate_extension(e);
    return e;
}

} // namespace hodge
