#pragma once

// The Lie algebra of the group G_C of W-preserving automorphisms acting on
// Gr^W by isometries of a graded polarization, and its decomposition with
// respect to a mixed Hodge structure:
//   n_+ = sum_{r>=0, s<0} g^{r,s},  n_0 = g^{0,0},
//   n_- = sum_{r<0, s>=0} g^{r,s},  Lambda = sum_{r<0, s<0} g^{r,s}.

#include <map>
#include <string>

#include <hodge/mhs/mhs.hpp>

namespace hodge {

// Forms S_k on V, one per weight, each meant to descend to Gr^W_k. A weight
// without an entry imposes no isometry condition.
using graded_polarization = std::map<int, matrix>;

inline void validate_polarization(const increasing_filtration &W, const graded_polarization &S) {
    const std::size_t n = W.ambient();
    for (const auto &[k, s] : S) {
        require(s.rows() == n && s.cols() == n, "polarization S_" + std::to_string(k) + " has the wrong size");
        subspace wk = W.at(k), wk1 = W.at(k - 1);
        if (wk == wk1) continue;
        matrix b = wk.basis();
        matrix lower = wk1.basis();
        if (lower.cols() > 0) {
            require((b.transpose() * s * lower).is_zero() && (lower.transpose() * s * b).is_zero(),
                    "S_" + std::to_string(k) + " does not descend to Gr_" + std::to_string(k));
        }
        matrix restricted = b.transpose() * s * b;
        matrix sign = restricted.transpose() * scalar(k % 2 == 0 ? 1 : -1);
        require(restricted == sign, "S_" + std::to_string(k) + " has the wrong symmetry for weight " +
                                        std::to_string(k));
        matrix c = wk1.complement_in(wk);
        require(rank(c.transpose() * s * c) == c.cols(), "S_" + std::to_string(k) + " is degenerate on Gr_" +
                                                             std::to_string(k));
    }
}

// Lie(G_C) as a subspace of gl(V) (row-major flattening).
inline subspace lie_algebra(const increasing_filtration &W, const graded_polarization &S) {
    validate_polarization(W, S);
    const std::size_t n = W.ambient();
    std::vector<matrix> rows;
    auto add_row = [&](const matrix &coef) { rows.push_back(coef.vectorize().transpose()); };
    for (const auto &[k, wk] : W.levels()) {
        matrix ann = wk.annihilator();
        for (std::size_t a = 0; a < ann.rows(); ++a) {
            for (std::size_t c = 0; c < wk.dim(); ++c) {
                // y^T alpha w = sum_ij y_i alpha_ij w_j.
                matrix coef(n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    if (ann(a, i).is_zero()) continue;
                    for (std::size_t j = 0; j < n; ++j) coef(i, j) = ann(a, i) * wk.basis()(j, c);
                }
                if (!coef.is_zero()) add_row(coef);
            }
        }
    }
    for (const auto &[k, s] : S) {
        subspace wk = W.at(k);
        if (wk == W.at(k - 1)) continue;
        matrix b = wk.basis();
        matrix stx = s.transpose() * b;
        matrix sy = s * b;
        for (std::size_t x = 0; x < b.cols(); ++x) {
            for (std::size_t y = x; y < b.cols(); ++y) {
                // x^T S alpha y + (alpha x)^T S y
                //   = sum_ij alpha_ij ((S^T x)_i y_j + (S y)_i x_j).
                matrix coef(n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) coef(i, j) = stx(i, x) * b(j, y) + sy(i, y) * b(j, x);
                }
                if (!coef.is_zero()) add_row(coef);
            }
        }
    }
    if (rows.empty()) return subspace::full(n * n);
    matrix sys(rows.size(), n * n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < n * n; ++c) sys(r, c) = rows[r](0, c);
    }
    return subspace::kernel_of(sys);
}

inline bool in_lie(const subspace &lie, const matrix &x) { return lie.contains(x.vectorize()); }

class lie_decomposition {
public:
    lie_decomposition(const mixed_hodge_structure &m, const graded_polarization &S)
        : mhs_(m), I_(deligne_bigrading(m)), frame_(I_), lie_(lie_algebra(m.W, S)) {
        const std::size_t n = m.dim();
        auto gl = gl_bigrading(I_);
        std::size_t total = 0;
        std::vector<subspace> pl, ze, mi, la;
        for (const auto &[rs, s] : gl) {
            subspace g = s.intersect(lie_);
            if (g.is_zero()) continue;
            total += g.dim();
            g_.emplace(rs, g);
            const int r = rs.first, t = rs.second;
            if (r >= 0 && t < 0) {
                pl.push_back(g);
            } else if (r == 0 && t == 0) {
                ze.push_back(g);
            } else if (r < 0 && t >= 0) {
                mi.push_back(g);
            } else if (r < 0 && t < 0) {
                la.push_back(g);
            } else {
                throw check_failure("PolarizationMismatch",
                                    "nonzero g^{r,s} with r, s >= 0 at " + bidegree_string(rs));
            }
        }
        if (total != lie_.dim()) {
            throw check_failure("PolarizationMismatch", "Lie(G_C) is not the sum of its (r,s) pieces: " +
                                                            std::to_string(total) + " != " +
                                                            std::to_string(lie_.dim()));
        }
        n_plus_ = sum_of(n * n, pl);
        n_zero_ = sum_of(n * n, ze);
        n_minus_ = sum_of(n * n, mi);
        lambda_ = sum_of(n * n, la);
    }

    const mixed_hodge_structure &mhs() const noexcept { return mhs_; }
    const bigrading &bigrading_pieces() const noexcept { return I_; }
    const adapted_frame &frame() const noexcept { return frame_; }
    const subspace &lie() const noexcept { return lie_; }
    const std::map<bidegree, subspace> &pieces() const noexcept { return g_; }
    const subspace &n_plus() const noexcept { return n_plus_; }
    const subspace &n_zero() const noexcept { return n_zero_; }
    const subspace &n_minus() const noexcept { return n_minus_; }
    const subspace &lambda() const noexcept { return lambda_; }
    subspace q_f() const { return n_minus_ + lambda_; }
    // Horizontal tangent directions: sum over k <= 1 of g^{-1,k}.
    subspace t_horizontal() const {
        std::vector<subspace> parts;
        for (const auto &[rs, g] : g_) {
            if (rs.first == -1 && rs.second <= 1) parts.push_back(g);
        }
        return sum_of(mhs_.dim() * mhs_.dim(), parts);
    }

    void require_member(const matrix &x) const {
        if (!in_lie(lie_, x)) throw validation_error("element is not in Lie(G_C)");
    }

    matrix pi_plus(const matrix &x) const { return select(x, [](int r, int s) { return r >= 0 && s < 0; }); }
    matrix pi_zero(const matrix &x) const { return select(x, [](int r, int s) { return r == 0 && s == 0; }); }
    matrix pi_minus(const matrix &x) const { return select(x, [](int r, int s) { return r < 0 && s >= 0; }); }
    matrix pi_lambda(const matrix &x) const { return select(x, [](int r, int s) { return r < 0 && s < 0; }); }

    // Phi_F = n_+ + {x in n_0 : pi_0(conj x) = -pi_0(x)}; a real subspace, so
    // it is exposed as a membership test.
    bool in_phi_f(const matrix &x) const {
        if (!in_lie(n_plus_ + n_zero_, x)) return false;
        matrix z = pi_zero(x);
        return pi_zero(z.conj()) == -z;
    }

private:
    mixed_hodge_structure mhs_;
    bigrading I_;
    adapted_frame frame_;
    subspace lie_;
    std::map<bidegree, subspace> g_;
    subspace n_plus_, n_zero_, n_minus_, lambda_;

    template <class Pred>
    matrix select(const matrix &x, Pred keep) const {
        matrix out(x.rows(), x.cols());
        for (const auto &[rs, c] : frame_.components(x)) {
            if (keep(rs.first, rs.second)) out += c;
        }
        return out;
    }
};

inline matrix real_part(const matrix &x) { return (x + x.conj()) * scalar::frac(1, 2); }
inline matrix imag_part(const matrix &x) { return (x - x.conj()) * scalar::frac(1, 2); }

// x = gamma + lambda + phi with gamma real, lambda in Lambda with
// conj lambda = -lambda, and phi in Phi_F.
struct first_order_parts {
    matrix gamma;
    matrix lambda;
    matrix phi;
};

// Checks the defining properties of a first-order decomposition.
inline report verify_first_order(const lie_decomposition &d, const matrix &x, const first_order_parts &p) {
    report r;
    r.add("sum reproduces x", p.gamma + p.lambda + p.phi == x);
    r.add("gamma is real", p.gamma.conj() == p.gamma);
    r.add("gamma lies in Lie(G_C)", in_lie(d.lie(), p.gamma));
    r.add("lambda lies in Lambda", in_lie(d.lambda(), p.lambda));
    r.add("lambda is imaginary", p.lambda.conj() == -p.lambda);
    r.add("phi lies in Phi_F", d.in_phi_f(p.phi));
    return r;
}

// Splits x in one of n_+, n_0, n_-, Lambda. On n_0 the parts are
// gamma = Re x + Re pi_L(Im x), lambda = Im pi_L(Im x), phi = pi_0(Im x),
// which keeps lambda imaginary even when conj of pi_0(Im x) has a Lambda
// component.
inline first_order_parts first_order_decomposition(const lie_decomposition &d, const matrix &x) {
    d.require_member(x);
    const std::size_t n = x.rows();
    matrix zero(n, n);
    const int which = (d.pi_plus(x) == x) ? 0 : (d.pi_zero(x) == x) ? 1 : (d.pi_minus(x) == x) ? 2
                                                                         : (d.pi_lambda(x) == x) ? 3
                                                                                                 : -1;
    first_order_parts p;
    switch (which) {
    case 0:
        p = {zero, zero, x};
        break;
    case 1: {
        matrix im = imag_part(x);
        matrix lam = d.pi_lambda(im);
        p = {real_part(x) + real_part(lam), imag_part(lam), d.pi_zero(im)};
        break;
    }
    case 2: {
        matrix xb = x.conj();
        matrix lam = d.pi_lambda(xb);
        p = {real_part(x * scalar(2) - lam), -imag_part(lam), -d.pi_plus(xb)};
        break;
    }
    case 3:
        p = {real_part(x), imag_part(x), zero};
        break;
    default:
        throw validation_error("element does not lie in a single summand n_+, n_0, n_-, Lambda");
    }
    report r = verify_first_order(d, x, p);
    if (!r.pass()) throw check_failure("InternalError", "first-order decomposition: " + r.first_failure()->name);
    return p;
}

// General elements are split summand by summand.
inline first_order_parts first_order_decomposition_any(const lie_decomposition &d, const matrix &x) {
    first_order_parts total{matrix(x.rows(), x.cols()), matrix(x.rows(), x.cols()), matrix(x.rows(), x.cols())};
    for (const matrix &part : {d.pi_plus(x), d.pi_zero(x), d.pi_minus(x), d.pi_lambda(x)}) {
        if (part.is_zero()) continue;
        auto p = first_order_decomposition(d, part);
        total.gamma += p.gamma;
        total.lambda += p.lambda;
        total.phi += p.phi;
    }
    return total;
}

// Horizontality of a tangent vector xi in q_F: only g^{-1,k} with k <= 1.
// Also checks that pi_+(conj xi) lies in g^{1,-1} + sum_{k<=-1} g^{0,k}.
inline report horizontal_check(const lie_decomposition &d, const matrix &xi) {
    report r;
    r.add("lies in q_F", in_lie(d.q_f(), xi));
    std::string bad;
    for (const auto &[rs, c] : d.frame().components(xi)) {
        if (!(rs.first == -1 && rs.second <= 1)) {
            bad = bidegree_string(rs);
            break;
        }
    }
    r.add("components only in g^{-1,k}, k <= 1", bad.empty(), bad.empty() ? "" : "NotHorizontal at " + bad);
    std::string bad2;
    for (const auto &[rs, c] : d.frame().components(d.pi_plus(xi.conj()))) {
        bool ok = (rs.first == 1 && rs.second == -1) || (rs.first == 0 && rs.second <= -1);
        if (!ok) {
            bad2 = bidegree_string(rs);
            break;
        }
    }
    r.add("pi_+(conj xi) in g^{1,-1} + g^{0,<=-1}", bad2.empty(), bad2);
    return r;
}

} // namespace hodge
