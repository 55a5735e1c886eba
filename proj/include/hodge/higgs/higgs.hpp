#pragma once

// Higgs fields of variations of mixed Hodge structure.
//
// Near a point where the period map is e^{Gamma(s)} . F with Gamma valued in
// q_F and Gamma(s) = sum_j xi_j s_j + O(s^2), the Higgs field is
// theta(d/ds_j) = xi_j and its antiholomorphic counterpart is the component
// of pi_+(conj xi_j) that raises the Hodge index, which equals the ad(Y)
// weight-zero part of conj theta.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <hodge/exactalg/series.hpp>
#include <hodge/higgs/lie.hpp>

namespace hodge {

struct higgs_pair {
    // theta(d/ds_j) at the base point.
    std::vector<matrix> theta;
    // Part of pi_+(conj xi_j) mapping U^p to U^{p+1}.
    std::vector<matrix> tau;
    // pi_+(conj xi_j) itself; it maps U^p into U^p + U^{p+1}.
    std::vector<matrix> antiholomorphic;
    std::map<int, subspace> U;
    report checks;

    // theta as a one-form with constant coefficients.
    series_one_form theta_form(int order = 0) const {
        series_one_form w;
        const std::size_t n = theta.empty() ? 0 : theta[0].rows();
        for (const auto &t : theta) {
            w.comp.push_back(series_endo::constant(theta.size(), order, t, matrix(n, n)));
        }
        return w;
    }
};

// Blocks of X sending U^p into U^{p'} with p' - p outside `allowed`.
inline std::optional<std::string> shape_violation(const adapted_frame &fr, const matrix &x,
                                                  const std::vector<int> &allowed) {
    matrix y = fr.to_frame(x);
    for (std::size_t i = 0; i < fr.dim(); ++i) {
        for (std::size_t j = 0; j < fr.dim(); ++j) {
            if (y(i, j).is_zero()) continue;
            int shift = fr.labels()[i].first - fr.labels()[j].first;
            if (std::find(allowed.begin(), allowed.end(), shift) == allowed.end()) {
                return "U^" + std::to_string(fr.labels()[j].first) + " -> U^" + std::to_string(fr.labels()[i].first);
            }
        }
    }
    return std::nullopt;
}

// Extracts (theta, tau) from a germ Gamma in plain coordinates s around the
// base point. When Gamma is known to order two and horizontal there, the
// integrability theta ^ theta = 0 is checked as well.
inline higgs_pair extract_higgs(const mixed_hodge_structure &m, const graded_polarization &S, const series_endo &gamma) {
    require(gamma.order() >= 1, "extract_higgs needs the germ to order at least one");
    require(endo_dim(gamma) == m.dim(), "germ has the wrong dimension");
    require(gamma.constant_term().is_zero(), "germ must vanish at the base point");
    lie_decomposition d(m, S);
    const adapted_frame &fr = d.frame();
    subspace qf = d.q_f();
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        if (!in_lie(qf, gamma[k])) {
            throw validation_error("germ coefficient at " + exponent_string(gamma.monomial(k)) + " is not in q_F");
        }
    }
    higgs_pair h;
    h.U = u_decomposition(d.bigrading_pieces());
    const std::size_t nv = gamma.nvars();
    for (std::size_t j = 0; j < nv; ++j) {
        exponent e(nv, 0);
        e[j] = 1;
        matrix xi = gamma.coeff(e);
        report hr = horizontal_check(d, xi);
        if (!hr.checks[1].pass) throw check_failure("NotHorizontal", "direction " + std::to_string(j) + ": " + hr.checks[1].detail);
        h.checks.append(hr, "direction " + std::to_string(j) + ": ");
        matrix anti = d.pi_plus(xi.conj());
        h.theta.push_back(xi);
        h.antiholomorphic.push_back(anti);
        h.tau.push_back(fr.p_component(anti, 1));
        auto v1 = shape_violation(fr, xi, {-1});
        auto v2 = shape_violation(fr, anti, {0, 1});
        if (v1 || v2) {
            throw check_failure("ShapeViolation", "direction " + std::to_string(j) + ": " + (v1 ? *v1 : *v2));
        }
        bool preserves_w = true;
        for (const auto &[k, wk] : m.W.levels()) preserves_w = preserves_w && wk.contains(xi * wk.basis());
        h.checks.add("direction " + std::to_string(j) + ": theta preserves W", preserves_w);
    }
    h.checks.add("connection has the shape d + theta on U^p, tau raising by one", true);
    if (gamma.order() >= 2) {
        // Horizontality at first order of e^{-Gamma} d e^{Gamma}: its
        // s-linear coefficient may not reach U^{p-2}.
        series_endo g2 = gamma.truncate(2);
        series_endo e = exp_nilpotent(g2);
        series_endo einv = exp_nilpotent(-g2);
        bool horizontal = true;
        for (std::size_t j = 0; j < nv; ++j) {
            series_endo w = einv * e.derivative(j, derivation::plain);
            for (std::size_t k = 0; k < w.size(); ++k) {
                if (w.basis()->degree(k) > 1) continue;
                for (int a = -8; a <= -2; ++a) horizontal = horizontal && fr.p_component(w[k], a).is_zero();
            }
        }
        bool commute = true;
        for (std::size_t i = 0; i < nv; ++i) {
            for (std::size_t j = i + 1; j < nv; ++j) commute = commute && commutator(h.theta[i], h.theta[j]).is_zero();
        }
        h.checks.add("germ horizontal to second order", horizontal);
        if (horizontal) h.checks.add("theta ^ theta = 0", commute);
    }
    return h;
}

// Weight-zero part of conj theta under ad(Y): sum_k pi_k (conj theta) pi_k.
inline std::vector<matrix> tau_from_theta(const higgs_pair &h, const grading &y) {
    std::vector<matrix> out;
    bigrading fake;
    for (const auto &[k, s] : y.eigenspaces) {
        if (!s.is_zero()) fake.emplace(bidegree{k, 0}, s);
    }
    adapted_frame fr(fake);
    for (const auto &t : h.theta) out.push_back(fr.component(t.conj(), 0, 0));
    return out;
}

// Result of integrating a flat connection on the Hodge bundles: the frame P
// with U^p(s) = P(s) U^p, together with the consistency checks performed.
struct unipotent_germ {
    series_endo transport;
    std::map<int, subspace> U;
    report checks;
};

// Given a flat connection d + A, its Higgs field theta and the Hodge pieces
// U^p at the base point, reconstructs U^p(s) as the bundles parallel for
// d + A - theta. In logarithmic coordinates A - theta must vanish at the
// origin. When a grading Y of the fiber is supplied, the identity
// (d + A) Y = 2 theta of the Hodge-Tate case is checked along the germ.
inline unipotent_germ reconstruct_unipotent(const series_one_form &a, const series_one_form &theta,
                                            const std::map<int, subspace> &U, derivation mode,
                                            const std::optional<matrix> &y = std::nullopt) {
    require(a.nvars() == theta.nvars() && a.nvars() >= 1, "connection and Higgs field disagree in size");
    const std::size_t nv = a.nvars();
    const std::size_t n = endo_dim(a.comp[0]);
    const int order = a.comp[0].order();
    series_one_form b = a - theta;
    if (mode == derivation::log) {
        for (std::size_t j = 0; j < nv; ++j) {
            if (!b.comp[j].constant_term().is_zero()) {
                throw check_failure("ConstantObstruction", "A - theta has a constant term in direction " + std::to_string(j));
            }
        }
    }
    const auto &mb = *b.comp[0].basis();
    series_endo p = identity_series(nv, order, n);
    // Solve d_j P = -B_j P degree by degree.
    for (std::size_t k = 1; k < mb.size(); ++k) {
        const exponent &e = mb.at(k);
        std::size_t j = 0;
        while (e[j] == 0) ++j;
        matrix rhs(n, n);
        if (mode == derivation::log) {
            for (std::size_t g = 1; g < mb.size(); ++g) {
                if (b.comp[j][g].is_zero()) continue;
                for (std::size_t h = 0; h < k; ++h) {
                    if (mb.product(g, h) == static_cast<long>(k)) rhs -= b.comp[j][g] * p[h];
                }
            }
            p[k] = rhs * (scalar::tp() * scalar(e[j])).inverse();
        } else {
            exponent f = e;
            f[j] -= 1;
            const long target = mb.find(f);
            for (std::size_t g = 0; g < mb.size(); ++g) {
                if (b.comp[j][g].is_zero()) continue;
                for (std::size_t h = 0; h < k; ++h) {
                    if (mb.product(g, h) == target) rhs -= b.comp[j][g] * p[h];
                }
            }
            p[k] = rhs * scalar::frac(1, e[j]);
        }
    }
    unipotent_germ out;
    out.transport = p;
    for (const auto &[q, s] : U) out.U.emplace(q, s);
    // Every direction must be solved, not only the one used above.
    for (std::size_t j = 0; j < nv; ++j) {
        series_endo res = p.derivative(j, mode) + b.comp[j] * p;
        for (std::size_t k = 0; k < res.size(); ++k) {
            if (mode == derivation::plain && mb.degree(k) >= order) continue;
            if (!res[k].is_zero()) {
                throw check_failure("NotFlat", "A - theta is not flat: direction " + std::to_string(j) + " at " +
                                                   exponent_string(res.monomial(k)));
            }
        }
    }
    // Re-extract theta: in the frame P the connection is P^{-1} theta P,
    // whose U^p -> U^{p-1} part must be all of it.
    bigrading fake;
    for (const auto &[q, s] : U) {
        if (!s.is_zero()) fake.emplace(bidegree{q, 0}, s);
    }
    adapted_frame fr(fake);
    series_endo pinv = inverse(p);
    bool same = true;
    for (std::size_t j = 0; j < nv; ++j) {
        series_endo moving = pinv * theta.comp[j] * p;
        series_endo lowered = moving.map([&](const matrix &c) { return fr.p_component(c, -1); });
        same = same && (p * lowered * pinv == theta.comp[j]);
    }
    out.checks.add("re-extracted Higgs field equals theta", same);
    if (y && !U.empty()) {
        // The top Hodge bundle U^b is holomorphic: the ad(Y) weight-zero
        // part of conj theta vanishes on it at the base point.
        const int top = U.rbegin()->first;
        bigrading eig;
        for (int k = -16; k <= 16; ++k) {
            subspace e = subspace::kernel_of(*y - matrix::identity(n) * scalar(k));
            if (!e.is_zero()) eig.emplace(bidegree{k, 0}, e);
        }
        adapted_frame yf(eig);
        bool holo = true;
        for (std::size_t j = 0; j < nv; ++j) {
            matrix t = yf.component(theta.comp[j].constant_term().conj(), 0, 0);
            holo = holo && (t * U.at(top).basis()).is_zero();
        }
        out.checks.add("top Hodge bundle U^" + std::to_string(top) + " is holomorphic", holo);
    }
    if (y) {
        series_endo yq = p * series_endo::constant(nv, order, *y, matrix(n, n)) * pinv;
        bool ok = true;
        for (std::size_t j = 0; j < nv; ++j) {
            series_endo lhs = yq.derivative(j, mode) + bracket(a.comp[j], yq);
            series_endo rhs = theta.comp[j] * scalar(2);
            for (std::size_t k = 0; k < lhs.size(); ++k) {
                if (mode == derivation::plain && mb.degree(k) >= order) continue;
                ok = ok && lhs[k] == rhs[k];
            }
        }
        out.checks.add("covariant derivative of Y equals 2 theta", ok);
    }
    return out;
}

} // namespace hodge
