#include <catch_amalgamated.hpp>

#include <hodge/corpus.hpp>
#include <hodge/higgs/higgs.hpp>

using namespace hodge;

namespace {

matrix vec(std::initializer_list<scalar> v) { return matrix::column(std::vector<scalar>(v)); }

matrix symplectic(std::size_t half) {
    matrix q(2 * half, 2 * half);
    for (std::size_t k = 0; k < half; ++k) {
        q(k, half + k) = scalar(1);
        q(half + k, k) = scalar(-1);
    }
    return q;
}

// Weight-one structure on C^2 with F^1 = span(1, i), polarized by the
// standard symplectic form.
mixed_hodge_structure elliptic() {
    subspace f1(2, vec({scalar(1), scalar::i()}));
    return {decreasing_filtration(2, {{0, subspace::full(2)}, {1, f1}}), increasing_filtration::trivial(2, 1)};
}

// Hodge-Tate structure on C^3 with I^{-a,-a} = span(e_{3-a}) for a = 0, 1, 2.
mixed_hodge_structure hodge_tate3() {
    subspace e1(3, vec({scalar(1), scalar(0), scalar(0)}));
    subspace e12 = e1 + subspace(3, vec({scalar(0), scalar(1), scalar(0)}));
    subspace e3(3, vec({scalar(0), scalar(0), scalar(1)}));
    subspace e23 = e3 + subspace(3, vec({scalar(0), scalar(1), scalar(0)}));
    return {decreasing_filtration(3, {{-2, subspace::full(3)}, {-1, e23}, {0, e3}}),
            increasing_filtration(3, {{-4, e1}, {-2, e12}, {0, subspace::full(3)}})};
}

series_endo linear_germ(const std::vector<matrix> &xi, int order) {
    const std::size_t n = xi[0].rows();
    series_endo g = make_series_endo(xi.size(), order, n);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        exponent e(xi.size(), 0);
        e[j] = 1;
        g.set(e, xi[j]);
    }
    return g;
}

} // namespace

TEST_CASE("polarized weight-one structure: sl2 splits into three lines", "[higgs]") {
    graded_polarization s{{1, symplectic(1)}};
    lie_decomposition d(elliptic(), s);
    CHECK(d.lie().dim() == 3);
    CHECK(d.n_plus().dim() == 1);
    CHECK(d.n_zero().dim() == 1);
    CHECK(d.n_minus().dim() == 1);
    CHECK(d.lambda().dim() == 0);
    CHECK(d.t_horizontal() == d.n_minus());
    CHECK(d.q_f() == d.n_minus());
    for (const subspace *part : {&d.n_plus(), &d.n_zero(), &d.n_minus()}) {
        matrix x = matrix::unvectorize(part->basis().col(0), 2) * scalar(rational(2), rational(-1));
        auto p = first_order_decomposition(d, x);
        CHECK(verify_first_order(d, x, p).pass());
    }
}

TEST_CASE("non-isotropic Hodge filtration does not match the polarization", "[higgs]") {
    // F^1 = span(e1 + i e2, e3 + 2i e4) in (C^4, standard symplectic form) has
    // Q(v1, v2) = -1, so it is not Lagrangian and Lie(Sp) is not graded by it.
    subspace f1(4, matrix::hcat(vec({scalar(1), scalar::i(), scalar(0), scalar(0)}),
                                vec({scalar(0), scalar(0), scalar(1), scalar::i() * scalar(2)})));
    mixed_hodge_structure m{decreasing_filtration(4, {{0, subspace::full(4)}, {1, f1}}),
                            increasing_filtration::trivial(4, 1)};
    validate_mhs(m);
    CHECK_THROWS_WITH(lie_decomposition(m, {{1, symplectic(2)}}),
                      Catch::Matchers::StartsWith("PolarizationMismatch"));
    CHECK_THROWS_AS(lie_algebra(m.W, {{1, matrix::identity(4)}}), validation_error);
}

TEST_CASE("first-order decomposition on random structures", "[higgs]") {
    corpus::rng_t rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        auto sample = corpus::random_mhs(rng, 6);
        lie_decomposition d(sample.m, {});
        auto summands = std::vector<std::function<bool(int, int)>>{
            [](int r, int s) { return r >= 0 && s < 0; }, [](int r, int s) { return r == 0 && s == 0; },
            [](int r, int s) { return r < 0 && s >= 0; }, [](int r, int s) { return r < 0 && s < 0; }};
        for (auto &keep : summands) {
            matrix x = corpus::random_graded_element(rng, sample.expected, keep, true);
            // Only W-preserving elements belong to Lie(G_C).
            if (!in_lie(d.lie(), x)) continue;
            auto p = first_order_decomposition(d, x);
            CHECK(verify_first_order(d, x, p).pass());
        }
    }
}

TEST_CASE("Higgs field of a weight-one germ", "[higgs]") {
    graded_polarization s{{1, symplectic(1)}};
    lie_decomposition d(elliptic(), s);
    matrix xi = matrix::unvectorize(d.n_minus().basis().col(0), 2);
    higgs_pair h = extract_higgs(elliptic(), s, linear_germ({xi}, 1));
    CHECK(h.checks.pass());
    CHECK(h.theta[0] == xi);
    // Split structure: conj xi lies in g^{1,-1}, so tau is conj xi itself.
    CHECK(h.tau[0] == xi.conj());
    grading y = grading_from_mhs(elliptic());
    CHECK(tau_from_theta(h, y)[0] == h.tau[0]);
}

TEST_CASE("Hodge-Tate germ has theta of type (-1,-1) and no tau", "[higgs]") {
    auto m = hodge_tate3();
    matrix xi(3, 3);
    xi(1, 2) = scalar(3);
    xi(0, 1) = scalar::frac(1, 2);
    higgs_pair h = extract_higgs(m, {}, linear_germ({xi}, 2));
    CHECK(h.checks.pass());
    lie_decomposition d(m, {});
    auto comps = d.frame().components(h.theta[0]);
    REQUIRE(comps.size() == 1);
    CHECK(comps.begin()->first == bidegree{-1, -1});
    CHECK(h.tau[0].is_zero());
    CHECK(tau_from_theta(h, grading_from_mhs(m))[0].is_zero());
    // Unipotent case: theta lowers W.
    CHECK(in_lie_minus1(h.theta[0], m.W));
}

TEST_CASE("non-horizontal tangent directions are rejected", "[higgs]") {
    auto m = hodge_tate3();
    matrix xi(3, 3);
    xi(0, 2) = scalar(1);
    CHECK_THROWS_WITH(extract_higgs(m, {}, linear_germ({xi}, 1)), Catch::Matchers::StartsWith("NotHorizontal"));
    matrix up(3, 3);
    up(2, 1) = scalar(1);
    CHECK_THROWS_AS(extract_higgs(m, {}, linear_germ({up}, 1)), validation_error);
}

TEST_CASE("commuting Higgs fields on a two-parameter germ", "[higgs]") {
    auto m = hodge_tate3();
    matrix a(3, 3), b(3, 3);
    a(1, 2) = scalar(1);
    a(0, 1) = scalar(1);
    b(1, 2) = scalar(2);
    b(0, 1) = scalar(2);
    higgs_pair h = extract_higgs(m, {}, linear_germ({a, b}, 2));
    CHECK(h.checks.pass());
    // Non-commuting directions cannot come from a horizontal germ.
    matrix c(3, 3);
    c(1, 2) = scalar(1);
    higgs_pair h2 = extract_higgs(m, {}, linear_germ({a, c}, 2));
    CHECK_FALSE(h2.checks.pass());
}

TEST_CASE("Hodge bundles of a Hodge-Tate variation are parallel for d + A - theta", "[higgs]") {
    auto m = hodge_tate3();
    matrix xi(3, 3);
    xi(1, 2) = scalar(2);
    xi(0, 1) = scalar(-1);
    const int order = 5;
    series_one_form a{{make_series_endo(1, order, 3)}};
    series_one_form theta{{series_endo::constant(1, order, xi, matrix(3, 3))}};
    auto U = u_decomposition(deligne_bigrading(m));
    grading y = grading_from_mhs(m);
    unipotent_germ g = reconstruct_unipotent(a, theta, U, derivation::plain, y.Y);
    CHECK(g.checks.pass());
    CHECK(g.transport == exp_nilpotent(linear_germ({xi}, order)));
    // Two non-commuting directions are not flat.
    matrix c(3, 3);
    c(1, 2) = scalar(1);
    series_one_form a2{{make_series_endo(2, order, 3), make_series_endo(2, order, 3)}};
    series_one_form t2{{series_endo::constant(2, order, xi, matrix(3, 3)),
                        series_endo::constant(2, order, c, matrix(3, 3))}};
    CHECK_THROWS_WITH(reconstruct_unipotent(a2, t2, U, derivation::plain),
                      Catch::Matchers::StartsWith("NotFlat"));
}
